//! Line-oriented text format for graphs, multigraphs and their decorations.
//!
//! ```text
//! # comment
//! v 1 2 3 4 5          vertex ids (optional; inferred from the other lines)
//! source 1 2 3 4
//! marked 1 5           u0 v0
//! e 0 1 2              edge label and endpoints
//! c 0 1                current value on edge 0
//! t 0 1/3              tanh of the coupling on edge 0
//! J 0 0.25             float coupling on edge 0
//! lambda 3 1/2         field weight on vertex 3
//! spins 1 1 2 4        spin multiset, in order
//! separate 0 2         restriction pair
//! together 1 2
//! ```
//!
//! Every line may be repeated; `v`, `source` and `spins` accumulate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{BaseGraph, Current, Edge, EdgeId, MultiGraph, VertexId};
use crate::ising::Couplings;
use crate::lee_yang::WeightedField;
use crate::partition::{RestrictionMode, RestrictionSet};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Document {
    /// Declared vertices; empty means "infer".
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    pub sources: Vec<VertexId>,
    pub marked: Option<(VertexId, VertexId)>,
    pub current: BTreeMap<EdgeId, u32>,
    pub t: BTreeMap<EdgeId, Rational>,
    pub j: BTreeMap<EdgeId, f64>,
    pub lambda: BTreeMap<VertexId, Rational>,
    pub spins: Vec<VertexId>,
    pub restrictions: Vec<(EdgeId, EdgeId, RestrictionMode)>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

struct Fields<'a> {
    line: usize,
    keyword: &'a str,
    rest: std::str::SplitWhitespace<'a>,
}

impl<'a> Fields<'a> {
    fn next(&mut self, what: &str) -> Result<&'a str> {
        self.rest
            .next()
            .ok_or_else(|| parse_err(self.line, format!("`{}` expects {what}", self.keyword)))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        let s = self.next(what)?;
        s.parse()
            .map_err(|_| parse_err(self.line, format!("`{s}` is not a nonnegative integer")))
    }

    fn rational(&mut self, what: &str) -> Result<Rational> {
        let s = self.next(what)?;
        parse_rational(s).ok_or_else(|| parse_err(self.line, format!("`{s}` is not a rational p/q")))
    }

    fn float(&mut self, what: &str) -> Result<f64> {
        let s = self.next(what)?;
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(parse_err(self.line, format!("`{s}` is not a finite number"))),
        }
    }

    fn rest_u32(&mut self) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        for s in self.rest.by_ref() {
            out.push(
                s.parse()
                    .map_err(|_| parse_err(self.line, format!("`{s}` is not a nonnegative integer")))?,
            );
        }
        Ok(out)
    }

    fn done(&mut self) -> Result<()> {
        match self.rest.next() {
            None => Ok(()),
            Some(s) => Err(parse_err(self.line, format!("unexpected trailing `{s}`"))),
        }
    }
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = Document::default();
        // line of first mention, for reference checks after the whole file is read
        let mut vertex_refs: Vec<(usize, VertexId)> = Vec::new();
        let mut label_refs: Vec<(usize, EdgeId)> = Vec::new();
        let mut edge_lines: BTreeMap<EdgeId, usize> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut rest = body.split_whitespace();
            let keyword = rest.next().unwrap();
            let mut f = Fields { line, keyword, rest };
            match keyword {
                "v" => {
                    let ids = f.rest_u32()?;
                    for id in ids {
                        if doc.vertices.contains(&VertexId(id)) {
                            return Err(parse_err(line, format!("vertex {id} declared twice")));
                        }
                        doc.vertices.push(VertexId(id));
                    }
                }
                "source" => {
                    for id in f.rest_u32()? {
                        vertex_refs.push((line, VertexId(id)));
                        doc.sources.push(VertexId(id));
                    }
                }
                "marked" => {
                    let u = VertexId(f.u32("two vertices")?);
                    let v = VertexId(f.u32("two vertices")?);
                    f.done()?;
                    if doc.marked.is_some() {
                        return Err(parse_err(line, "`marked` given twice"));
                    }
                    vertex_refs.extend([(line, u), (line, v)]);
                    doc.marked = Some((u, v));
                }
                "e" => {
                    let id = f.u32("a label and two endpoints")?;
                    let u = f.u32("a label and two endpoints")?;
                    let v = f.u32("a label and two endpoints")?;
                    f.done()?;
                    if edge_lines.insert(EdgeId(id), line).is_some() {
                        return Err(parse_err(line, format!("edge label {id} used twice")));
                    }
                    vertex_refs.extend([(line, VertexId(u)), (line, VertexId(v))]);
                    doc.edges.push(Edge::new(id, u, v));
                }
                "c" => {
                    let id = EdgeId(f.u32("a label and a value")?);
                    let value = f.u32("a label and a value")?;
                    f.done()?;
                    label_refs.push((line, id));
                    if doc.current.insert(id, value).is_some() {
                        return Err(parse_err(line, format!("current on edge {id} given twice")));
                    }
                }
                "t" => {
                    let id = EdgeId(f.u32("a label and p/q")?);
                    let value = f.rational("a label and p/q")?;
                    f.done()?;
                    if value < Rational::zero() || value >= Rational::from_integer(1.into()) {
                        return Err(parse_err(line, format!("t = {value} is outside [0, 1)")));
                    }
                    label_refs.push((line, id));
                    if doc.t.insert(id, value).is_some() {
                        return Err(parse_err(line, format!("t on edge {id} given twice")));
                    }
                }
                "J" => {
                    let id = EdgeId(f.u32("a label and a coupling")?);
                    let value = f.float("a label and a coupling")?;
                    f.done()?;
                    if value < 0.0 {
                        return Err(parse_err(line, format!("coupling {value} is negative")));
                    }
                    label_refs.push((line, id));
                    if doc.j.insert(id, value).is_some() {
                        return Err(parse_err(line, format!("J on edge {id} given twice")));
                    }
                }
                "lambda" => {
                    let v = VertexId(f.u32("a vertex and p/q")?);
                    let value = f.rational("a vertex and p/q")?;
                    f.done()?;
                    if value < Rational::zero() {
                        return Err(parse_err(line, format!("field weight {value} is negative")));
                    }
                    vertex_refs.push((line, v));
                    if doc.lambda.insert(v, value).is_some() {
                        return Err(parse_err(line, format!("lambda on vertex {v} given twice")));
                    }
                }
                "spins" => {
                    for id in f.rest_u32()? {
                        vertex_refs.push((line, VertexId(id)));
                        doc.spins.push(VertexId(id));
                    }
                }
                "separate" | "together" => {
                    let a = EdgeId(f.u32("two edge labels")?);
                    let b = EdgeId(f.u32("two edge labels")?);
                    f.done()?;
                    if a == b {
                        return Err(parse_err(line, format!("restriction pairs edge {a} with itself")));
                    }
                    label_refs.extend([(line, a), (line, b)]);
                    let mode = if keyword == "separate" {
                        RestrictionMode::Separate
                    } else {
                        RestrictionMode::Together
                    };
                    doc.restrictions.push((a, b, mode));
                }
                other => return Err(parse_err(line, format!("unknown keyword `{other}`"))),
            }
        }
        if !doc.vertices.is_empty() {
            let declared: BTreeSet<VertexId> = doc.vertices.iter().copied().collect();
            if let Some((line, v)) = vertex_refs.iter().find(|(_, v)| !declared.contains(v)) {
                return Err(parse_err(*line, format!("vertex {v} is not declared")));
            }
        }
        if let Some((line, e)) = label_refs.iter().find(|(_, e)| !edge_lines.contains_key(e)) {
            return Err(parse_err(*line, format!("edge {e} is not defined")));
        }
        Ok(doc)
    }

    /// Declared vertices, or every vertex mentioned anywhere, sorted.
    pub fn vertex_list(&self) -> Vec<VertexId> {
        if !self.vertices.is_empty() {
            return self.vertices.clone();
        }
        let mut set: BTreeSet<VertexId> = BTreeSet::new();
        set.extend(self.edges.iter().flat_map(|e| [e.u, e.v]));
        set.extend(self.sources.iter().copied());
        set.extend(self.marked.iter().flat_map(|&(u, v)| [u, v]));
        set.extend(self.lambda.keys().copied());
        set.extend(self.spins.iter().copied());
        set.into_iter().collect()
    }

    pub fn base_graph(&self) -> Result<BaseGraph> {
        BaseGraph::new(self.vertex_list(), self.edges.iter().copied())
    }

    /// The labelled multigraph; a `marked` line is required.
    pub fn multigraph(&self) -> Result<MultiGraph> {
        let marked = self
            .marked
            .ok_or_else(|| Error::Invalid("no `marked` line".into()))?;
        MultiGraph::new(self.vertex_list(), self.edges.clone(), marked, self.sources.clone())
    }

    /// Current from `c` lines; unlisted edges carry 0.
    pub fn current<'g>(&self, base: &'g BaseGraph) -> Result<Current<'g>> {
        let entries: Vec<(EdgeId, u32)> = self.current.iter().map(|(&e, &n)| (e, n)).collect();
        Current::from_labels(base, &entries)
    }

    /// Couplings from `t` lines; unlisted edges get `t = 0`.
    pub fn couplings(&self, base: &BaseGraph) -> Result<Couplings> {
        let entries: Vec<(EdgeId, Rational)> = self.t.iter().map(|(&e, x)| (e, x.clone())).collect();
        Couplings::from_labels(base, &entries)
    }

    /// Float couplings in edge order: `J` lines first, then `atanh t`, else 0.
    pub fn float_couplings(&self, base: &BaseGraph) -> Vec<f64> {
        base.edges()
            .iter()
            .map(|e| match (self.j.get(&e.id), self.t.get(&e.id)) {
                (Some(&j), _) => j,
                (None, Some(t)) => crate::rational::to_f64(t).atanh(),
                (None, None) => 0.0,
            })
            .collect()
    }

    /// Field weights; `λ ≡ 1` when no `lambda` line is present, else unlisted
    /// vertices get 0.
    pub fn field(&self, base: &BaseGraph) -> Result<WeightedField> {
        if self.lambda.is_empty() {
            return Ok(WeightedField::uniform(base, Rational::from_integer(1.into())));
        }
        WeightedField::new(self.lambda.iter().map(|(&v, x)| (v, x.clone())))
    }

    pub fn restriction_set(&self) -> Result<RestrictionSet> {
        let mut rs = RestrictionSet::new();
        for &(a, b, mode) in &self.restrictions {
            rs.push(a, b, mode)?;
        }
        Ok(rs)
    }

    pub fn from_multigraph(g: &MultiGraph) -> Self {
        Document {
            vertices: g.vertices().to_vec(),
            edges: g.edges().to_vec(),
            sources: g.sources().to_vec(),
            marked: Some(g.marked()),
            ..Default::default()
        }
    }

    pub fn from_base(base: &BaseGraph) -> Self {
        Document {
            vertices: base.vertices().to_vec(),
            edges: base.edges().to_vec(),
            ..Default::default()
        }
    }

    /// Canonical text; parsing it back gives an equal document.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let join = |ids: &[VertexId]| ids.iter().map(|v| v.0.to_string()).collect::<Vec<_>>().join(" ");
        if !self.vertices.is_empty() {
            let _ = writeln!(out, "v {}", join(&self.vertices));
        }
        if !self.sources.is_empty() {
            let _ = writeln!(out, "source {}", join(&self.sources));
        }
        if let Some((u, v)) = self.marked {
            let _ = writeln!(out, "marked {u} {v}");
        }
        for e in &self.edges {
            let _ = writeln!(out, "e {} {} {}", e.id, e.u, e.v);
        }
        for (e, n) in &self.current {
            let _ = writeln!(out, "c {e} {n}");
        }
        for (e, x) in &self.t {
            let _ = writeln!(out, "t {e} {}", format_rational(x));
        }
        for (e, x) in &self.j {
            let _ = writeln!(out, "J {e} {x:?}");
        }
        for (v, x) in &self.lambda {
            let _ = writeln!(out, "lambda {v} {}", format_rational(x));
        }
        if !self.spins.is_empty() {
            let _ = writeln!(out, "spins {}", join(&self.spins));
        }
        for (a, b, mode) in &self.restrictions {
            let word = match mode {
                RestrictionMode::Separate => "separate",
                RestrictionMode::Together => "together",
            };
            let _ = writeln!(out, "{word} {a} {b}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::r_graph;
    use crate::rational::rat;

    const H2: &str = "\
# four sources, u0 = j1
v 1 2 3 4 5
source 1 2 3 4
marked 1 5
e 0 1 2
e 1 1 3
e 2 4 5
";

    #[test]
    fn parses_multigraph() {
        let doc = Document::parse(H2).unwrap();
        let g = doc.multigraph().unwrap();
        assert!(g.is_admissible());
        assert_eq!(r_graph(&g, &RestrictionSet::new()).unwrap(), -2);
    }

    #[test]
    fn round_trip() {
        let text = format!("{H2}c 0 2\nt 1 1/3\nJ 2 0.5\nlambda 3 1/2\nspins 1 1 2 4\nseparate 0 1\ntogether 0 2\n");
        let doc = Document::parse(&text).unwrap();
        assert_eq!(Document::parse(&doc.to_text()).unwrap(), doc);
        assert_eq!(doc.t[&EdgeId(1)], rat(1, 3));
        assert_eq!(doc.restriction_set().unwrap().items().len(), 2);
        let base = BaseGraph::new(doc.vertex_list(), doc.edges.clone()).unwrap();
        assert_eq!(doc.current(&base).unwrap().values(), &[2, 0, 0]);
        assert_eq!(doc.float_couplings(&base)[2], 0.5);
    }

    #[test]
    fn infers_vertices() {
        let doc = Document::parse("e 0 0 1\ne 1 1 2\n").unwrap();
        assert_eq!(doc.vertex_list(), vec![VertexId(0), VertexId(1), VertexId(2)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("v 1 2\ne 0 1 3\n", 2),
            ("e 0 1 2\ne 0 2 3\n", 2),
            ("e 0 1 2\n\nc 4 1\n", 3),
            ("bogus 1\n", 1),
            ("e 0 1\n", 1),
            ("e 0 1 2\nt 0 3/2\n", 2),
            ("e 0 1 2\nseparate 0 0\n", 2),
            ("marked 1 2 3\n", 1),
            ("e 0 1 2\nc 0 x\n", 2),
        ];
        for (text, line) in cases {
            match Document::parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }
}
