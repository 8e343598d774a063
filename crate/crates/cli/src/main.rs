use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ursell_core::format::Document;
use ursell_core::graph::{currents_up_to, symmetric_difference, BaseGraph, Current, Edge, EdgeId, VertexSet};
use ursell_core::lee_yang::{
    alpha1_of, partition_polynomial, principal_zero_explorer, roots, MAX_COUPLING,
};
use ursell_core::partition::{
    enumerate_partitions, make_special, partition_sum, SpecialFamily, SpecialGraphSpec,
};
use ursell_core::rational::format_rational;
use ursell_core::report::summary_table;
use ursell_core::series::lemma_u2krcr;
use ursell_core::suites::{self, SuiteConfig, DEFAULT_SEED};
use ursell_core::{corpus, ising};

#[derive(Parser, Debug)]
#[command(name = "ursell-lab", version, about = "Exact random-current and Lee-Yang checks on small Ising models")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Instances per randomized suite (defaults to each suite's own size)
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    max_vertices: Option<usize>,
    #[arg(long)]
    max_edges: Option<usize>,
    #[arg(long)]
    max_current: Option<u32>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Write the verb's main output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn suite_config(&self) -> SuiteConfig {
        SuiteConfig {
            seed: self.seed,
            count: self.count,
            max_vertices: self.max_vertices,
            max_edges: self.max_edges,
            max_current: self.max_current,
            tolerance: self.tolerance,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Run every verification suite and print a summary table
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Signed partition count R of a multigraph file
    Rgraph {
        file: PathBuf,
        /// Also list every partition
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Exact Ursell function of the `spins` line at the `t` couplings
    Ursell {
        file: PathBuf,
        /// Also print the derivative in the coupling of this edge
        #[arg(long)]
        edge: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Series coefficient against R(m)/m! on a file or on the built-in corpus
    Oracle {
        file: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Zeros of the field partition function as CSV `re,im,alpha`
    Zeros {
        file: PathBuf,
        /// Use this coupling on every edge
        #[arg(long = "J")]
        j: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// First zero while sweeping one coupling, CSV `edge,J,alpha1`
    Scan {
        file: PathBuf,
        /// Sweep only this edge (default: every edge in turn)
        #[arg(long)]
        edge: Option<u32>,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = MAX_COUPLING)]
        to: f64,
        #[arg(long, default_value_t = 30)]
        steps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Search for a higher zero that moves outward when a coupling grows; JSON lines
    Explore {
        #[command(flatten)]
        common: Common,
    },
}

/// Floats with 17 significant digits.
fn fmt_f64(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..16).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        format!("{x:.16e}")
    }
}

fn read_doc(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Document::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn verify(common: &Common) -> Result<bool> {
    let config = common.suite_config();
    let mut reports = Vec::new();
    for suite in suites::ALL {
        let r = suite(&config);
        print!("{}", r.render());
        io::stdout().flush()?;
        reports.push(r);
    }
    println!();
    print!("{}", summary_table(&reports));
    let ok = reports.iter().all(|r| r.passed());
    if let Some(p) = &common.out {
        let json = serde_json::to_string_pretty(&reports)?;
        fs::write(p, json + "\n").with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(ok)
}

fn rgraph(file: &Path, list: bool, common: &Common) -> Result<bool> {
    let doc = read_doc(file)?;
    let g = doc.multigraph()?;
    let rs = doc.restriction_set()?;
    if let Some(cap) = common.max_edges {
        if g.num_edges() > cap {
            bail!("edge cap exceeded: {} > {cap}", g.num_edges());
        }
    }
    let sum = partition_sum(&g, &rs)?;
    let mut text = format!("R={} partitions={}\n", sum.value, sum.count);
    if list {
        for p in enumerate_partitions(&g, &rs)? {
            text.push_str(&format!("{p}\n"));
        }
    }
    emit(&common.out, &text)?;
    Ok(true)
}

fn ursell_verb(file: &Path, edge: Option<u32>, common: &Common) -> Result<bool> {
    let doc = read_doc(file)?;
    let base = doc.base_graph()?;
    let t = doc.couplings(&base)?;
    if doc.spins.is_empty() {
        bail!("no `spins` line in {}", file.display());
    }
    let u = ising::ursell(&base, &t, &doc.spins)?;
    let mut text = format!("order={}\nu={}\n", u.order, format_rational(&u.value));
    if let Some(e) = edge {
        let d = ising::ursell_derivative(&base, &t, &doc.spins, EdgeId(e))?;
        text.push_str(&format!("du/dJ_{e}={}\n", format_rational(&d)));
    }
    emit(&common.out, &text)?;
    Ok(true)
}

struct OracleCase {
    name: String,
    base: BaseGraph,
    sources: Vec<ursell_core::VertexId>,
    marked: (ursell_core::VertexId, ursell_core::VertexId),
    e0: EdgeId,
    values: Vec<u32>,
}

/// Ensures the marked pair is an edge, appending one with current 0.
fn with_marked_edge(
    base: &BaseGraph,
    values: &[u32],
    marked: (ursell_core::VertexId, ursell_core::VertexId),
) -> Result<(BaseGraph, Vec<u32>, EdgeId)> {
    if let Some(e) = base.edges().iter().find(|e| e.joins(marked.0, marked.1)) {
        return Ok((base.clone(), values.to_vec(), e.id));
    }
    let id = base.fresh_edge_id();
    let mut edges = base.edges().to_vec();
    edges.push(Edge {
        id,
        u: marked.0,
        v: marked.1,
    });
    let mut values = values.to_vec();
    values.push(0);
    Ok((BaseGraph::new(base.vertices().iter().copied(), edges)?, values, id))
}

fn oracle_corpus(common: &Common) -> Result<Vec<OracleCase>> {
    let max_m = common.max_current.unwrap_or(5).min(6);
    let mut cases = Vec::new();
    for (family, k) in [
        (SpecialFamily::KI, 1),
        (SpecialFamily::KI, 2),
        (SpecialFamily::KII, 1),
        (SpecialFamily::KII, 2),
        (SpecialFamily::H, 2),
    ] {
        let g = make_special(SpecialGraphSpec::new(family, k, 0))?;
        let (u0, v0) = g.marked();
        let plain: Vec<Edge> = g.edges().to_vec();
        let base = BaseGraph::new(g.vertices().iter().copied(), plain)?;
        let (base, _, e0) = with_marked_edge(&base, &vec![0; g.num_edges()], (u0, v0))?;
        let want = symmetric_difference(
            &g.sources().iter().copied().collect::<VertexSet>(),
            &[u0, v0].into_iter().collect(),
        );
        for m in currents_up_to(&base, max_m) {
            if m.boundary() == want {
                cases.push(OracleCase {
                    name: format!("{family:?}_{k}"),
                    base: base.clone(),
                    sources: g.sources().to_vec(),
                    marked: (u0, v0),
                    e0,
                    values: m.values().to_vec(),
                });
            }
        }
    }
    let mut rng = corpus::corpus_rng(common.seed);
    for i in 0..common.count.unwrap_or(20) {
        let inst = corpus::random_current_instance(
            &mut rng,
            common.max_vertices.unwrap_or(5),
            common.max_edges.unwrap_or(5),
            max_m,
            3,
        );
        let (base, values, e0) = with_marked_edge(&inst.base, &inst.values, inst.marked)?;
        cases.push(OracleCase {
            name: format!("random_{i}"),
            base,
            sources: inst.sources.clone(),
            marked: inst.marked,
            e0,
            values,
        });
    }
    Ok(cases)
}

fn oracle(file: Option<&Path>, common: &Common) -> Result<bool> {
    let cases = match file {
        Some(path) => {
            let doc = read_doc(path)?;
            let marked = doc.marked.context("oracle input needs a `marked` line")?;
            let base = doc.base_graph()?;
            let values = doc.current(&base)?.values().to_vec();
            let (base, values, e0) = with_marked_edge(&base, &values, marked)?;
            vec![OracleCase {
                name: path.display().to_string(),
                base,
                sources: doc.sources.clone(),
                marked,
                e0,
                values,
            }]
        }
        None => oracle_corpus(common)?,
    };
    let mut text = String::new();
    let mut all = true;
    for c in &cases {
        let m = Current::new(&c.base, c.values.clone())?;
        let o = lemma_u2krcr(&c.base, &c.sources, c.e0, c.marked, &m)?;
        all &= o.holds();
        text.push_str(&format!(
            "{} {} m={:?} series={} partitions={}\n",
            if o.holds() { "PASS" } else { "FAIL" },
            c.name,
            c.values,
            format_rational(&o.series_coefficient),
            format_rational(&o.partition_side)
        ));
    }
    text.push_str(&format!(
        "{} of {} instances agree\n",
        text.lines().filter(|l| l.starts_with("PASS")).count(),
        cases.len()
    ));
    emit(&common.out, &text)?;
    Ok(all)
}

fn float_couplings(doc: &Document, base: &BaseGraph, uniform: Option<f64>) -> Vec<f64> {
    match uniform {
        Some(j) => vec![j; base.num_edges()],
        None => doc.float_couplings(base),
    }
}

fn zeros(file: &Path, j: Option<f64>, common: &Common) -> Result<bool> {
    let doc = read_doc(file)?;
    let base = doc.base_graph()?;
    let field = doc.field(&base)?;
    let couplings = float_couplings(&doc, &base, j);
    let p = partition_polynomial(&base, &couplings, &field)?;
    let spectrum = roots(&p)?;
    let tol = common.tolerance.unwrap_or(1e-9);
    let mut text = String::from("re,im,alpha\n");
    let mut rows: Vec<_> = spectrum
        .roots
        .iter()
        .map(|z| (z, p.denominator as f64 * z.arg().abs() / 2.0))
        .collect();
    rows.sort_by(|a, b| a.1.total_cmp(&b.1).then(b.0.im.total_cmp(&a.0.im)));
    for (z, alpha) in rows {
        text.push_str(&format!("{},{},{}\n", fmt_f64(z.re), fmt_f64(z.im), fmt_f64(alpha)));
    }
    emit(&common.out, &text)?;
    let dev = spectrum.max_circle_deviation();
    if dev > tol {
        eprintln!("warning: a root is {dev:e} off the unit circle");
        return Ok(false);
    }
    Ok(true)
}

fn scan(file: &Path, edge: Option<u32>, from: f64, to: f64, steps: usize, common: &Common) -> Result<bool> {
    if !(0.0..=MAX_COUPLING).contains(&from) || !(0.0..=MAX_COUPLING).contains(&to) || from > to {
        bail!("sweep range must satisfy 0 <= from <= to <= {MAX_COUPLING}");
    }
    if steps == 0 {
        bail!("need at least one step");
    }
    let doc = read_doc(file)?;
    let base = doc.base_graph()?;
    let field = doc.field(&base)?;
    let couplings = doc.float_couplings(&base);
    let edges: Vec<EdgeId> = match edge {
        Some(e) => {
            let id = EdgeId(e);
            base.edge(id).with_context(|| format!("edge {e} is not in {}", file.display()))?;
            vec![id]
        }
        None => base.edges().iter().map(|e| e.id).collect(),
    };
    let mut text = String::from("edge,J,alpha1\n");
    for id in edges {
        let pos = base.edge_position(id).expect("checked above");
        for i in 0..=steps {
            let j = from + (to - from) * i as f64 / steps as f64;
            let mut c = couplings.clone();
            c[pos] = j;
            let alpha = alpha1_of(&partition_polynomial(&base, &c, &field)?)?;
            text.push_str(&format!("{id},{},{}\n", fmt_f64(j), fmt_f64(alpha)));
        }
    }
    emit(&common.out, &text)?;
    Ok(true)
}

fn explore(common: &Common) -> Result<bool> {
    let report = principal_zero_explorer(
        common.seed,
        common.count.unwrap_or(200),
        common.max_vertices.unwrap_or(6).min(8),
    );
    let mut text = String::new();
    for f in &report.findings {
        text.push_str(&serde_json::to_string(&serde_json::json!({ "finding": f }))?);
        text.push('\n');
    }
    text.push_str(&serde_json::to_string(&serde_json::json!({
        "summary": {
            "seed": common.seed,
            "instances": report.instances,
            "findings": report.findings.len(),
            "errors": report.errors,
        }
    }))?);
    text.push('\n');
    emit(&common.out, &text)?;
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.verb {
        Verb::Verify { common } => verify(common),
        Verb::Rgraph { file, list, common } => rgraph(file, *list, common),
        Verb::Ursell { file, edge, common } => ursell_verb(file, *edge, common),
        Verb::Oracle { file, common } => oracle(file.as_deref(), common),
        Verb::Zeros { file, j, common } => zeros(file, *j, common),
        Verb::Scan {
            file,
            edge,
            from,
            to,
            steps,
            common,
        } => scan(file, *edge, *from, *to, *steps, common),
        Verb::Explore { common } => explore(common),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
