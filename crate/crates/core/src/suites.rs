//! The verification suites behind `ursell-lab verify` and the acceptance tests.
//!
//! Each suite returns a [`SuiteReport`] whose checks count instances and
//! violations; nothing here panics on a failed identity.

use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::One;
use rand::Rng;

use crate::corpus::{
    corpus_rng, random_current_instance, random_graph, random_multigraph, random_separate_restrictions,
    random_unit_rational, CorpusRng,
};
use crate::error::Result;
use crate::graph::{BaseGraph, Current, Edge, EdgeId, MultiGraph, VertexId, VertexSet};
use crate::ising::{
    correlation, correlation_boltzmann, correlation_oracle, cumulant, cumulant_from_ursell, gadget_split,
    monotonicity_harness, reduction_check, ursell_central_difference, ursell_derivative, Couplings,
};
use crate::lee_yang::{
    alpha1_monotonicity_harness, alpha1_of, partition_polynomial, random_field_instance, roots, two_spin_alpha1,
    WeightedField,
};
use crate::partition::{
    contract_pair, contractible_pairs, enumerate_partitions, i_p, make_special, n_l, partition_sum, r_current,
    r_graph, reduce_self_loop, sign_scan, RestrictionMode, RestrictionSet, SpecialFamily, SpecialGraphSpec,
};
use crate::rational::{format_rational, rat, signed_by_order, to_f64, Rational};
use crate::report::{Check, SuiteReport};
use crate::series::lemma_u2krcr;

/// Knobs shared by every suite. `None` keeps the suite's own default, which
/// is the size the acceptance criteria call for.
#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    pub seed: u64,
    pub count: Option<usize>,
    pub max_vertices: Option<usize>,
    pub max_edges: Option<usize>,
    pub max_current: Option<u32>,
    pub tolerance: Option<f64>,
}

impl SuiteConfig {
    pub fn with_seed(seed: u64) -> Self {
        SuiteConfig {
            seed,
            ..Default::default()
        }
    }

    fn count(&self, default: usize) -> usize {
        self.count.unwrap_or(default)
    }

    /// A per-suite stream so suites stay independent of each other.
    fn rng(&self, stream: u64) -> CorpusRng {
        corpus_rng(self.seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

pub const DEFAULT_SEED: u64 = 42;

pub type SuiteFn = fn(&SuiteConfig) -> SuiteReport;

/// Every suite run by `verify`, in order.
pub const ALL: &[SuiteFn] = &[
    special_values,
    listed_partitions,
    oracle_equivalence,
    reduction_laws,
    switching_exhaustive,
    series_oracle,
    ursell_signs,
    derivative_differences,
    lee_yang_circle,
    first_zero_monotonicity,
    ising_identities,
];

pub fn run_all(config: &SuiteConfig) -> Vec<SuiteReport> {
    ALL.iter().map(|f| f(config)).collect()
}

fn timed(criterion: Option<u32>, name: &str, body: impl FnOnce(&mut SuiteReport)) -> SuiteReport {
    let start = Instant::now();
    let mut report = SuiteReport::new(criterion, name);
    body(&mut report);
    report.seconds = start.elapsed().as_secs_f64();
    report
}

fn special(family: SpecialFamily, k: usize, l: usize) -> MultiGraph {
    make_special(SpecialGraphSpec::new(family, k, l)).expect("valid special graph")
}

fn r(g: &MultiGraph) -> Result<i128> {
    r_graph(g, &RestrictionSet::new())
}

fn describe(g: &MultiGraph) -> String {
    let edges: Vec<String> = g.edges().iter().map(|e| format!("{}:{}-{}", e.id, e.u, e.v)).collect();
    let sources: Vec<String> = g.sources().iter().map(|v| v.to_string()).collect();
    let (u0, v0) = g.marked();
    format!(
        "edges [{}] marked ({u0},{v0}) sources [{}]",
        edges.join(" "),
        sources.join(" ")
    )
}

fn exact_check(check: &mut Check, got: Result<i128>, want: i128, what: &str) {
    match got {
        Ok(v) => check.record(v == want, || format!("{what} = {v}, expected {want}")),
        Err(e) => check.record(false, || format!("{what}: {e}")),
    }
}

/// Signed partition counts of the special graphs and `I_p`.
pub fn special_values(_: &SuiteConfig) -> SuiteReport {
    use SpecialFamily::*;
    timed(Some(1), "special graph values", |rep| {
        let mut c = Check::new("R of H_k, K^I_k, K^II_k");
        exact_check(&mut c, r(&special(H, 2, 0)), -2, "R(H_2)");
        exact_check(&mut c, r(&special(H, 3, 0)), 0, "R(H_3)");
        exact_check(&mut c, r(&special(KI, 1, 0)), 1, "R(K^I_1)");
        exact_check(&mut c, r(&special(KII, 1, 0)), 1, "R(K^II_1)");
        for p in [2, 3] {
            exact_check(&mut c, r(&special(KI, p, 0)), 0, &format!("R(K^I_{p})"));
            exact_check(&mut c, r(&special(KII, p, 0)), 0, &format!("R(K^II_{p})"));
        }
        rep.checks.push(c);
        let mut c = Check::new("I_p");
        for (p, want) in [(1, 1), (2, 0), (3, 0), (4, 0)] {
            exact_check(&mut c, i_p(p), want, &format!("I_{p}"));
        }
        rep.checks.push(c);
    })
}

type Listing = BTreeSet<Vec<Vec<u32>>>;

fn listing(g: &MultiGraph, rs: &RestrictionSet) -> Result<Listing> {
    Ok(enumerate_partitions(g, rs)?
        .into_iter()
        .map(|p| {
            p.subgraphs
                .iter()
                .map(|s| {
                    let mut s: Vec<u32> = s.iter().map(|e| e.0).collect();
                    s.sort();
                    s
                })
                .collect()
        })
        .collect())
}

fn expect_listing(check: &mut Check, got: Result<Listing>, want: &[[&[u32]; 3]], what: &str) {
    let want: Listing = want
        .iter()
        .map(|row| row.iter().map(|s| s.to_vec()).collect())
        .collect();
    match got {
        Ok(l) => check.record(l == want, || format!("{what}: got {l:?}")),
        Err(e) => check.record(false, || format!("{what}: {e}")),
    }
}

/// Partition lists and restricted values for the small worked examples.
pub fn listed_partitions(_: &SuiteConfig) -> SuiteReport {
    timed(Some(2), "listed partitions", |rep| {
        // labels on H_2: 0 = j1j2, 1 = j1j3, 2 = j4v0
        let h2 = special(SpecialFamily::H, 2, 0);
        let mut c = Check::new("partitions of H_2");
        expect_listing(
            &mut c,
            listing(&h2, &RestrictionSet::new()),
            &[
                [&[0, 1, 2], &[], &[]],
                [&[0], &[1, 2], &[]],
                [&[1], &[0, 2], &[]],
                [&[0, 1], &[2], &[]],
            ],
            "H_2",
        );
        rep.checks.push(c);

        // K^I_2 labels: 0 = j2v0, 1 = j3j4, then the loop j1j1
        let (k2, lp) = special(SpecialFamily::KI, 2, 0)
            .with_edge(VertexId(1), VertexId(1))
            .expect("loop on j1");
        let rs = RestrictionSet::new()
            .separate(lp.0, 0)
            .and_then(|r| r.separate(lp.0, 1))
            .expect("distinct labels");
        let mut c = Check::new("restricted partitions of looped K^I_2");
        let l = lp.0;
        expect_listing(
            &mut c,
            listing(&k2, &rs),
            &[[&[0, 1], &[l], &[]], [&[0, 1], &[], &[l]], [&[1], &[0], &[l]]],
            "looped K^I_2",
        );
        exact_check(&mut c, r_graph(&k2, &rs).map(|v| signed_by_order(2, v)), -1, "(-1)^(k-1) R");
        rep.checks.push(c);

        // H_{2,1}: 3, 4 are the two u0v0 edges
        let h21 = special(SpecialFamily::H, 2, 1);
        let rs = RestrictionSet::new()
            .separate(3, 0)
            .and_then(|r| r.separate(4, 1))
            .expect("distinct labels");
        let mut c = Check::new("restricted H_{2,1}");
        expect_listing(&mut c, listing(&h21, &rs), &[[&[0, 1, 2], &[], &[3, 4]]], "H_{2,1}");
        exact_check(&mut c, r_graph(&h21, &rs).map(|v| signed_by_order(2, v)), -1, "(-1)^(k-1) R");
        rep.checks.push(c);

        let rs = RestrictionSet::new()
            .separate(0, 1)
            .and_then(|r| r.together(0, 2))
            .expect("distinct labels");
        let mut c = Check::new("H_2 with separate and together pairs");
        expect_listing(&mut c, listing(&h2, &rs), &[[&[1], &[0, 2], &[]]], "H_2 mixed");
        exact_check(&mut c, r_graph(&h2, &rs).map(|v| signed_by_order(2, v)), 1, "(-1)^(k-1) R");
        rep.checks.push(c);
    })
}

/// `R` by multigraph partitions against `R` by current tuples.
pub fn oracle_equivalence(config: &SuiteConfig) -> SuiteReport {
    let count = config.count(120);
    let max_v = config.max_vertices.unwrap_or(7);
    let max_e = config.max_edges.unwrap_or(6);
    let max_m = config.max_current.unwrap_or(7).min(7);
    timed(Some(3), "partition oracle equivalence", |rep| {
        let mut rng = config.rng(3);
        let mut c = Check::new("R_graph = R_current");
        let mut ks = [0usize; 4];
        for i in 0..count {
            // Equal shares of k = 1, 2, 3; a random current rarely has many sources.
            let want = 1 + i % 3;
            let inst = loop {
                let inst = random_current_instance(&mut rng, max_v, max_e, max_m, 3);
                if inst.k() == want || max_v < 2 * want + 1 || max_m < want as u32 {
                    break inst;
                }
            };
            ks[inst.k()] += 1;
            let m = inst.current();
            let g = inst.multigraph();
            match (r(&g), r_current(&m, &inst.sources, inst.marked)) {
                (Ok(a), Ok(b)) => c.record(a == b, || format!("{}: graph {a}, current {b}", describe(&g))),
                (Err(e), _) | (_, Err(e)) => c.record(false, || e.to_string()),
            }
        }
        rep.notes.push(format!("k = 1, 2, 3 counts: {} {} {}", ks[1], ks[2], ks[3]));
        rep.checks.push(c);
    })
}

/// Host whose shared vertex has degree three, on which the contraction
/// identity fails: `R(g) = 0` while the right side is `2 + 0`.
pub fn contraction_counterexample() -> (MultiGraph, EdgeId, EdgeId, VertexId) {
    let g = MultiGraph::new(
        (0..3).map(VertexId),
        vec![Edge::new(0, 2, 0), Edge::new(1, 2, 0), Edge::new(2, 1, 2)],
        (VertexId(0), VertexId(1)),
        vec![VertexId(0), VertexId(2)],
    )
    .expect("admissible");
    (g, EdgeId(0), EdgeId(1), VertexId(2))
}

fn without_labels(rs: &RestrictionSet, labels: &[EdgeId]) -> RestrictionSet {
    let mut out = RestrictionSet::new();
    for item in rs.items() {
        if !labels.contains(&item.a) && !labels.contains(&item.b) {
            out.push(item.a, item.b, item.mode).expect("already distinct");
        }
    }
    out
}

fn with_pair(rs: &RestrictionSet, a: EdgeId, b: EdgeId, mode: RestrictionMode) -> RestrictionSet {
    let mut out = rs.clone();
    out.push(a, b, mode).expect("distinct labels");
    out
}

/// Outcome of one contraction at `(e1, e2, v)` under `rs`:
/// `(R(g; rs), R(g; rs, [e1,e2]), R(g; rs, {e1,e2}), R(g̃; rs))`.
fn contraction_terms(
    g: &MultiGraph,
    rs: &RestrictionSet,
    e1: EdgeId,
    e2: EdgeId,
    v: VertexId,
) -> Result<(i128, i128, i128, i128)> {
    let (contracted, _) = contract_pair(g, e1, e2, v)?;
    Ok((
        r_graph(g, rs)?,
        r_graph(g, &with_pair(rs, e1, e2, RestrictionMode::Together))?,
        r_graph(g, &with_pair(rs, e1, e2, RestrictionMode::Separate))?,
        r_graph(&contracted, rs)?,
    ))
}

/// Self-loop factor, the contraction decomposition, the empty stream when
/// every incident pair is separated, and the `N(L)` law for special graphs.
pub fn reduction_laws(config: &SuiteConfig) -> SuiteReport {
    let count = config.count(150);
    let max_v = config.max_vertices.unwrap_or(6);
    let max_e = config.max_edges.unwrap_or(7);
    timed(Some(4), "reduction laws", |rep| {
        let mut rng = config.rng(4);
        let mut corpus: Vec<MultiGraph> = vec![contraction_counterexample().0];
        corpus.extend((0..count).map(|_| random_multigraph(&mut rng, max_v, max_e, 3, true)));

        let mut looped = Check::new("self-loop factor k+1");
        let mut split = Check::new("R = R(together) + R(separate)");
        let mut deg2 = Check::new("contraction identity, shared vertex of degree 2");
        let mut deg3 = Check::new("contraction identity, shared vertex of degree >= 3");
        let mut claim = Check::new("all incident pairs separated gives no partition");

        let mut loop_hosts = vec![];
        for (f, k) in [(SpecialFamily::KI, 2), (SpecialFamily::KII, 2), (SpecialFamily::H, 2), (SpecialFamily::KI, 1)] {
            let g = special(f, k, 0);
            for &v in g.vertices() {
                loop_hosts.push(g.with_edge(v, v).expect("loop").0);
            }
        }
        loop_hosts.extend(corpus.iter().cloned());

        for g in &loop_hosts {
            for e in g.edges().iter().filter(|e| e.is_loop()) {
                let run = || -> Result<(i128, i128)> { Ok((r(g)?, r(&reduce_self_loop(g, e.id)?)?)) };
                match run() {
                    Ok((a, b)) => looped.record(a == (g.k() as i128 + 1) * b, || {
                        format!("{} loop {}: R = {a}, reduced {b}", describe(g), e.id)
                    }),
                    Err(err) => looped.record(false, || err.to_string()),
                }
            }
        }

        for g in &corpus {
            let rs = random_separate_restrictions(&mut rng, g, 2);
            for (e1, e2, v) in contractible_pairs(g) {
                for rs in [RestrictionSet::new(), without_labels(&rs, &[e1, e2])] {
                    match contraction_terms(g, &rs, e1, e2, v) {
                        Ok((whole, together, separate, contracted)) => {
                            split.record(whole == together + separate, || {
                                format!("{}: {whole} != {together} + {separate}", describe(g))
                            });
                            let target = if g.degree(v) == 2 { &mut deg2 } else { &mut deg3 };
                            target.record(whole == contracted + separate, || {
                                format!(
                                    "{} contracting {e1},{e2} at {v}: R = {whole}, R(contracted) = {contracted}, \
                                     R(separate) = {separate}, R(together) = {together}",
                                    describe(g)
                                )
                            });
                        }
                        Err(err) => split.record(false, || err.to_string()),
                    }
                }
            }
            let (u0, v0) = g.marked();
            for &v in g.vertices() {
                let incident: Vec<&Edge> = g.edges().iter().filter(|e| e.touches(v)).collect();
                let plain = incident.iter().filter(|e| !e.is_loop()).count();
                if v == u0 || v == v0 || plain < 2 {
                    continue;
                }
                let mut rs = RestrictionSet::new();
                for i in 0..incident.len() {
                    for j in i + 1..incident.len() {
                        rs.push(incident[i].id, incident[j].id, RestrictionMode::Separate)
                            .expect("distinct labels");
                    }
                }
                match partition_sum(g, &rs) {
                    Ok(s) => claim.record(s.count == 0, || format!("{} at {v}: {} partitions", describe(g), s.count)),
                    Err(err) => claim.record(false, || err.to_string()),
                }
            }
        }

        let mut nl = Check::new("R(G_{k,L}) = N(L) R(G_k)");
        for (f, ks) in [
            (SpecialFamily::H, 2..=3),
            (SpecialFamily::KI, 1..=3),
            (SpecialFamily::KII, 1..=3),
        ] {
            for k in ks {
                for l in 0..=2u32 {
                    let run = || -> Result<(i128, i128)> { Ok((r(&special(f, k, l as usize))?, r(&special(f, k, 0))?)) };
                    match run() {
                        Ok((a, b)) => {
                            let factor = n_l(l, k as u32 - 1) as i128;
                            nl.record(a == factor * b, || {
                                format!("{f:?} k={k} L={l}: R = {a}, N(L) = {factor}, R(L=0) = {b}")
                            });
                        }
                        Err(err) => nl.record(false, || err.to_string()),
                    }
                }
            }
        }

        match sign_scan(corpus.iter().map(|g| (g.clone(), RestrictionSet::new()))) {
            Ok(s) => rep.notes.push(format!(
                "unrestricted sign (-1)^(k-1) R >= 0 on the same corpus: {} checked, {} violations",
                s.checked,
                s.violations.len()
            )),
            Err(e) => rep.notes.push(format!("sign scan failed: {e}")),
        }
        rep.checks.extend([looped, split, deg2, deg3, claim, nl]);
    })
}

/// All multigraphs on `n` vertices with `0..=max_edges` edges, one per
/// isomorphism class, as sorted pair lists.
pub fn multigraphs_up_to_iso(n: u32, max_edges: usize) -> Vec<Vec<(u32, u32)>> {
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let perms = permutations(n as usize);
    let canon = |edges: &[(u32, u32)]| -> Vec<(u32, u32)> {
        perms
            .iter()
            .map(|p| {
                let mut e: Vec<(u32, u32)> = edges
                    .iter()
                    .map(|&(a, b)| {
                        let (x, y) = (p[a as usize], p[b as usize]);
                        (x.min(y), x.max(y))
                    })
                    .collect();
                e.sort();
                e
            })
            .min()
            .unwrap_or_default()
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<(u32, u32)>)> = vec![(0, vec![])];
    while let Some((from, edges)) = stack.pop() {
        if seen.insert(canon(&edges)) {
            out.push(edges.clone());
        }
        if edges.len() == max_edges {
            continue;
        }
        for (i, &p) in pairs.iter().enumerate().skip(from) {
            let mut next = edges.clone();
            next.push(p);
            stack.push((i, next));
        }
    }
    out.sort();
    out
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, (n - 1) as u32);
            out.push(q);
        }
    }
    out
}

/// Per-current switching identity, exhaustively over small graphs.
pub fn switching_exhaustive(config: &SuiteConfig) -> SuiteReport {
    let max_v = config.max_vertices.unwrap_or(4).min(4) as u32;
    let max_e = config.max_edges.unwrap_or(5).min(5);
    let max_m = config.max_current.unwrap_or(6).min(6);
    timed(Some(5), "finite switching lemma", |rep| {
        let mut c = Check::new("switching identity for every m, A, u, v");
        let mut graphs = 0;
        for n in 2..=max_v {
            for pairs in multigraphs_up_to_iso(n, max_e) {
                graphs += 1;
                let base = BaseGraph::from_pairs(n, &pairs).expect("well formed");
                for m in crate::graph::currents_up_to(&base, max_m) {
                    let dm = m.boundary();
                    for u in 0..n {
                        for v in u + 1..n {
                            let (u, v) = (VertexId(u), VertexId(v));
                            let uv: VertexSet = [u, v].into_iter().collect();
                            let a = crate::graph::symmetric_difference(&dm, &uv);
                            c.record(m.switching_check(&a, u, v), || {
                                format!("graph {pairs:?} m {:?} u {u} v {v}", m.values())
                            });
                        }
                    }
                }
            }
        }
        rep.notes.push(format!(
            "{graphs} graphs up to isomorphism on 2..={max_v} vertices with <= {max_e} edges, |m| <= {max_m}"
        ));
        rep.checks.push(c);
    })
}

/// The simple graph carrying a special family member, with the marked edge
/// appended when missing. Returns the graph and the marked edge label.
fn realization_base(g: &MultiGraph) -> (BaseGraph, EdgeId) {
    let (u0, v0) = g.marked();
    let mut edges: Vec<Edge> = g.edges().iter().filter(|e| !e.joins(u0, v0)).copied().collect();
    let e0 = g.fresh_label();
    edges.push(Edge { id: e0, u: u0, v: v0 });
    (
        BaseGraph::new(g.vertices().iter().copied(), edges).expect("loop-free"),
        e0,
    )
}

fn lemma_record(check: &mut Check, base: &BaseGraph, sources: &[VertexId], e0: EdgeId, marked: (VertexId, VertexId), m: &Current<'_>) {
    match lemma_u2krcr(base, sources, e0, marked, m) {
        Ok(o) => check.record(o.holds(), || {
            format!(
                "edges {:?} m {:?}: series {} vs R/m! {}",
                base.edges().iter().map(|e| (e.u.0, e.v.0)).collect::<Vec<_>>(),
                m.values(),
                format_rational(&o.series_coefficient),
                format_rational(&o.partition_side)
            )
        }),
        Err(e) => check.record(false, || e.to_string()),
    }
}

/// Taylor coefficients of the Ursell derivative against `R(m)/m!`.
pub fn series_oracle(config: &SuiteConfig) -> SuiteReport {
    let count = config.count(30);
    let max_m = config.max_current.unwrap_or(5).min(5);
    timed(Some(6), "series oracle", |rep| {
        let mut c = Check::new("special realizations, every admissible m");
        for (f, ks) in [
            (SpecialFamily::KI, 1..=3),
            (SpecialFamily::KII, 1..=2),
            (SpecialFamily::H, 2..=3),
        ] {
            for k in ks {
                let g = special(f, k, 0);
                let (base, e0) = realization_base(&g);
                let (u0, v0) = g.marked();
                let mut want: VertexSet = g.sources().iter().copied().collect();
                want = crate::graph::symmetric_difference(&want, &[u0, v0].into_iter().collect());
                for m in crate::graph::currents_up_to(&base, max_m) {
                    if m.boundary() == want {
                        lemma_record(&mut c, &base, g.sources(), e0, (u0, v0), &m);
                    }
                }
            }
        }
        rep.checks.push(c);

        let mut c = Check::new("random current instances");
        let mut rng = config.rng(6);
        for _ in 0..count {
            let inst = random_current_instance(&mut rng, 5, 5, max_m, 3);
            let (u0, v0) = inst.marked;
            let (base, values, e0) = match inst.base.edges().iter().find(|e| e.joins(u0, v0)) {
                Some(e) => (inst.base.clone(), inst.values.clone(), e.id),
                None => {
                    let id = inst.base.fresh_edge_id();
                    let mut edges = inst.base.edges().to_vec();
                    edges.push(Edge { id, u: u0, v: v0 });
                    let mut values = inst.values.clone();
                    values.push(0);
                    (
                        BaseGraph::new(inst.base.vertices().iter().copied(), edges).expect("loop-free"),
                        values,
                        id,
                    )
                }
            };
            let m = Current::new(&base, values).expect("one value per edge");
            lemma_record(&mut c, &base, &inst.sources, e0, inst.marked, &m);
        }
        rep.checks.push(c);
    })
}

/// Signs of `u_2k` and of its coupling derivative, and chain monotonicity.
pub fn ursell_signs(config: &SuiteConfig) -> SuiteReport {
    let count = config.count(500);
    let max_v = config.max_vertices.unwrap_or(7).min(7);
    timed(Some(7), "Ursell sign and monotonicity", |rep| {
        let r = monotonicity_harness(config.seed ^ 7, count, max_v);
        let detail = |v: &[usize]| {
            v.first()
                .map(|i| format!("first failure: instance {i}"))
                .unwrap_or_default()
        };
        let lines = [
            ("(-1)^(k-1) du_2k/dJ >= 0", &r.derivative_violations),
            ("(-1)^(k-1) u_2k >= 0", &r.value_violations),
            ("(-1)^(k-1) u_2k non-decreasing along t <= t'", &r.chain_violations),
            ("u_2k = 0 at zero coupling for distinct spins", &r.zero_coupling_violations),
        ];
        for (name, v) in lines {
            rep.checks.push(Check {
                name: name.into(),
                instances: r.instances,
                violations: v.len(),
                detail: detail(v),
            });
        }
        let mut errors = Check::new("instances evaluated");
        for _ in 0..r.instances - r.errors.len() {
            errors.record(true, String::new);
        }
        for e in &r.errors {
            errors.record(false, || e.clone());
        }
        rep.checks.push(errors);
        rep.notes.push("spin shapes cycle through distinct, repeated, one endpoint, both endpoints".into());
    })
}

/// Exact derivative against a central difference of float Ursell values.
pub fn derivative_differences(config: &SuiteConfig) -> SuiteReport {
    let count = config.count(50);
    let tol = config.tolerance.unwrap_or(1e-7);
    let h = 1e-5;
    timed(Some(8), "derivative against finite differences", |rep| {
        let mut rng = config.rng(8);
        let mut c = Check::new(format!("|exact - central difference| <= {tol:e}, h = {h:e}"));
        let mut worst = 0.0f64;
        for _ in 0..count {
            let n = rng.random_range(2..=6);
            let extra = rng.random_range(0..=3);
            let g = random_graph(&mut rng, n, n - 1 + extra, true);
            let t: Vec<Rational> = (0..g.num_edges())
                .map(|_| random_unit_rational(&mut rng, 8) * rat(9, 10))
                .collect();
            let k = rng.random_range(1..=3);
            let spins: Vec<VertexId> = (0..2 * k).map(|_| VertexId(rng.random_range(0..n as u32))).collect();
            let e0 = g.edges()[rng.random_range(0..g.num_edges())].id;
            let j: Vec<f64> = t.iter().map(|x| to_f64(x).atanh()).collect();
            let run = || -> Result<(f64, f64)> {
                let exact = ursell_derivative(&g, &Couplings::new(&g, t.clone())?, &spins, e0)?;
                Ok((to_f64(&exact), ursell_central_difference(&g, &j, &spins, e0, h)?))
            };
            match run() {
                Ok((a, b)) => {
                    worst = worst.max((a - b).abs());
                    c.record((a - b).abs() <= tol, || format!("exact {a:e} vs difference {b:e}"));
                }
                Err(e) => c.record(false, || e.to_string()),
            }
        }
        rep.notes.push(format!("largest deviation {worst:e}"));
        rep.checks.push(c);
    })
}

/// Unit-circle property of field polynomial zeros.
pub fn lee_yang_circle(config: &SuiteConfig) -> SuiteReport {
    let count = config.count(500);
    let max_v = config.max_vertices.unwrap_or(8).min(8);
    let tol = 1e-9;
    timed(Some(9), "Lee-Yang circle", |rep| {
        let mut rng = config.rng(9);
        let mut circle = Check::new(format!("||z| - 1| <= {tol:e} for every root"));
        let mut palin = Check::new("palindromic coefficients");
        let mut agree = Check::new("scan and roots agree on the first zero to 1e-9");
        let mut worst = 0.0f64;
        for _ in 0..count {
            let inst = random_field_instance(&mut rng, max_v);
            let g = inst.graph();
            let field = inst.field();
            let run = || -> Result<(bool, f64, f64)> {
                let p = partition_polynomial(&g, &inst.upper, &field)?;
                let s = roots(&p)?;
                Ok((p.is_palindromic(), s.max_circle_deviation(), (alpha1_of(&p)? - s.alpha1()).abs()))
            };
            match run() {
                Ok((pal, dev, dis)) => {
                    worst = worst.max(dev);
                    circle.record(dev <= tol, || format!("{inst:?}: deviation {dev:e}"));
                    palin.record(pal, || format!("{inst:?}"));
                    agree.record(dis <= 1e-9, || format!("{inst:?}: {dis:e}"));
                }
                Err(e) => circle.record(false, || e.to_string()),
            }
        }
        rep.notes.push(format!("largest circle deviation {worst:e}"));
        rep.checks.extend([circle, palin, agree]);
    })
}

/// First zero non-increasing in the couplings, plus the two-spin closed form.
pub fn first_zero_monotonicity(config: &SuiteConfig) -> SuiteReport {
    let count = config.count(500);
    let max_v = config.max_vertices.unwrap_or(8).min(8);
    let tol = config.tolerance.unwrap_or(1e-9);
    timed(Some(10), "first zero monotonicity", |rep| {
        let r = alpha1_monotonicity_harness(config.seed ^ 10, count, max_v, tol);
        let mut c = Check::new(format!("alpha1(J) >= alpha1(J') - {tol:e}"));
        for i in 0..r.instances {
            let bad = r.violations.iter().find(|v| v.index == i);
            c.record(bad.is_none(), || format!("{bad:?}"));
        }
        for e in &r.errors {
            c.record(false, || e.clone());
        }
        rep.checks.push(c);

        let two = BaseGraph::from_pairs(2, &[(0, 1)]).expect("edge");
        let field = WeightedField::uniform(&two, Rational::one());
        let mut c = Check::new("two-spin closed form to 1e-12");
        let mut dec = Check::new("two-spin first zero strictly decreasing in J");
        let mut previous: Option<f64> = None;
        for i in 0..=30 {
            let j = i as f64 * 0.1;
            let closed = two_spin_alpha1(j);
            match partition_polynomial(&two, &[j], &field).and_then(|p| Ok((alpha1_of(&p)?, roots(&p)?.alpha1()))) {
                Ok((scan, root)) => {
                    c.record((scan - closed).abs() <= 1e-12 && (root - closed).abs() <= 1e-12, || {
                        format!("J = {j}: closed {closed}, scan {scan}, roots {root}")
                    });
                    if let Some(prev) = previous {
                        dec.record(scan < prev, || format!("J = {j}: {scan} after {prev}"));
                    }
                    previous = Some(scan);
                }
                Err(e) => c.record(false, || e.to_string()),
            }
        }
        rep.checks.extend([c, dec]);
        rep.notes.push(format!(
            "largest scan/roots disagreement {:e}, largest circle deviation {:e}",
            r.max_disagreement, r.max_circle_deviation
        ));
    })
}

/// Correlation oracle, cumulant identity, reduction formula and gadget.
pub fn ising_identities(config: &SuiteConfig) -> SuiteReport {
    let count = config.count(100);
    timed(None, "Ising identities", |rep| {
        let mut rng = config.rng(11);
        let mut corr = Check::new("even-subgraph correlation = spin enumeration");
        let mut cum = Check::new("cumulant = weighted Ursell tuple sum");
        let mut red = Check::new("Ursell reduction formula for a repeated spin");
        let mut gad = Check::new("gadget preserves correlations to 1e-10");
        for i in 0..count {
            let n = rng.random_range(2..=6usize);
            let extra = rng.random_range(0..=4);
            let connected = rng.random_bool(0.7);
            let g = random_graph(&mut rng, n, n - 1 + extra, connected);
            let t: Vec<Rational> = (0..g.num_edges()).map(|_| random_unit_rational(&mut rng, 7)).collect();
            let Ok(tc) = Couplings::new(&g, t.clone()) else { continue };
            let a: VertexSet = g.vertices().iter().copied().filter(|_| rng.random_bool(0.5)).collect();
            match (correlation(&g, &tc, &a), correlation_oracle(&g, &tc, &a)) {
                (Ok(x), Ok(y)) => corr.record(x == y, || format!("{x} vs {y}")),
                (Err(e), _) | (_, Err(e)) => corr.record(false, || e.to_string()),
            }

            if n <= 4 {
                let lambda = WeightedField::new(
                    g.vertices()
                        .iter()
                        .map(|&v| (v, rat(rng.random_range(0..=3), rng.random_range(1..=2)))),
                )
                .expect("nonnegative");
                for order in 1..=4 {
                    match (cumulant(&g, &tc, &lambda, order), cumulant_from_ursell(&g, &tc, &lambda, order)) {
                        (Ok(x), Ok(y)) => cum.record(x == y, || format!("order {order}: {x} vs {y}")),
                        (Err(e), _) | (_, Err(e)) => cum.record(false, || e.to_string()),
                    }
                }
            }

            let k = 2 + i % 2;
            let mut spins: Vec<VertexId> = (0..2 * k).map(|_| VertexId(rng.random_range(0..n as u32))).collect();
            spins[1] = spins[0];
            match reduction_check(&g, &tc, &spins) {
                Ok(ok) => red.record(ok, || format!("spins {spins:?}")),
                Err(e) => red.record(false, || e.to_string()),
            }

            let e0 = g.edges()[rng.random_range(0..g.num_edges())];
            let j: Vec<f64> = (0..g.num_edges()).map(|_| rng.random_range(0.0..1.5)).collect();
            let beta = j[g.edge_position(e0.id).expect("edge")];
            let run = || -> Result<f64> {
                let gadget = gadget_split(&g, e0.id, beta)?;
                let jhat = gadget.couplings(&g, &j);
                let mut worst = 0.0f64;
                for mask in 0u32..(1 << n) {
                    let a: VertexSet = (0..n as u32).filter(|b| mask >> b & 1 == 1).map(VertexId).collect();
                    let x = correlation_boltzmann(&g, &j, &a)?;
                    let y = correlation_boltzmann(&gadget.graph, &jhat, &a)?;
                    worst = worst.max((x - y).abs());
                }
                Ok(worst)
            };
            match run() {
                Ok(w) => gad.record(w <= 1e-10, || format!("deviation {w:e}")),
                Err(e) => gad.record(false, || e.to_string()),
            }
        }
        rep.checks.extend([corr, cum, red, gad]);
    })
}
