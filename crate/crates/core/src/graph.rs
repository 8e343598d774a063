//! Base graphs, labelled multigraphs and integer currents.
//!
//! Vertex sets cross the public API as ordered sets; internally every graph
//! keeps a sorted vertex table so that a vertex set is also a `u64` bitmask.
//! That caps graphs at 64 vertices, far above anything enumeration can reach.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::rational::{binomial, Rational};
use num_traits::{One, Pow};

pub const MAX_VERTICES: usize = 64;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type VertexSet = BTreeSet<VertexId>;

pub fn vertex_set<I: IntoIterator<Item = u32>>(ids: I) -> VertexSet {
    ids.into_iter().map(VertexId).collect()
}

pub fn symmetric_difference(a: &VertexSet, b: &VertexSet) -> VertexSet {
    a.symmetric_difference(b).copied().collect()
}

/// An unordered edge with an opaque label. `u == v` is a self-loop.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn new(id: u32, u: u32, v: u32) -> Self {
        Edge {
            id: EdgeId(id),
            u: VertexId(u),
            v: VertexId(v),
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite `x`; `x` itself for a loop at `x`.
    pub fn opposite(&self, x: VertexId) -> Option<VertexId> {
        if self.u == x {
            Some(self.v)
        } else if self.v == x {
            Some(self.u)
        } else {
            None
        }
    }

    pub fn joins(&self, a: VertexId, b: VertexId) -> bool {
        (self.u == a && self.v == b) || (self.u == b && self.v == a)
    }
}

/// Sorted vertex table mapping ids to bit positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct VertexIndex {
    ids: Vec<VertexId>,
}

impl VertexIndex {
    pub(crate) fn new<I: IntoIterator<Item = VertexId>>(ids: I) -> Result<Self> {
        let mut ids: Vec<VertexId> = ids.into_iter().collect();
        ids.sort();
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0]));
            }
        }
        check_cap("vertex count", ids.len(), MAX_VERTICES)?;
        Ok(VertexIndex { ids })
    }

    pub(crate) fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub(crate) fn len(&self) -> usize {
        self.ids.len()
    }

    pub(crate) fn position(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    pub(crate) fn bit(&self, v: VertexId) -> Result<u64> {
        self.position(v)
            .map(|i| 1u64 << i)
            .ok_or(Error::UnknownVertex(v))
    }

    pub(crate) fn mask<'a, I: IntoIterator<Item = &'a VertexId>>(&self, vs: I) -> Result<u64> {
        vs.into_iter()
            .try_fold(0u64, |acc, &v| self.bit(v).map(|b| acc ^ b))
    }

    pub(crate) fn set(&self, mut mask: u64) -> VertexSet {
        let mut out = VertexSet::new();
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            out.insert(self.ids[i]);
            mask &= mask - 1;
        }
        out
    }

    /// Parity contribution of one copy of `e`.
    pub(crate) fn edge_mask(&self, e: &Edge) -> u64 {
        if e.is_loop() {
            0
        } else {
            self.bit(e.u).unwrap_or(0) ^ self.bit(e.v).unwrap_or(0)
        }
    }
}

/// Disjoint-set forest over vertex positions.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// A finite graph `G = (V, E)`. Parallel edges are allowed, self-loops are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseGraph {
    index: VertexIndex,
    edges: Vec<Edge>,
}

impl BaseGraph {
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = Edge>,
    {
        let index = VertexIndex::new(vertices)?;
        let edges: Vec<Edge> = edges.into_iter().collect();
        let mut seen = BTreeSet::new();
        for e in &edges {
            if !seen.insert(e.id) {
                return Err(Error::DuplicateEdge(e.id));
            }
            index.bit(e.u)?;
            index.bit(e.v)?;
            if e.is_loop() {
                return Err(Error::SelfLoop(e.id));
            }
        }
        Ok(BaseGraph { index, edges })
    }

    /// Vertices `0..n`, edge `i` joining `pairs[i]`.
    pub fn from_pairs(n: u32, pairs: &[(u32, u32)]) -> Result<Self> {
        BaseGraph::new(
            (0..n).map(VertexId),
            pairs
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| Edge::new(i as u32, u, v)),
        )
    }

    pub fn vertices(&self) -> &[VertexId] {
        self.index.ids()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.index.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn edge_position(&self, id: EdgeId) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.index.position(v).is_some()
    }

    pub(crate) fn index(&self) -> &VertexIndex {
        &self.index
    }

    pub(crate) fn mask(&self, set: &VertexSet) -> Result<u64> {
        self.index.mask(set)
    }

    pub fn fresh_edge_id(&self) -> EdgeId {
        EdgeId(self.edges.iter().map(|e| e.id.0 + 1).max().unwrap_or(0))
    }

    pub fn fresh_vertex_id(&self) -> VertexId {
        VertexId(self.index.ids().iter().map(|v| v.0 + 1).max().unwrap_or(0))
    }

    /// Boundary (odd-degree vertices) of an edge subset given by positions.
    pub fn boundary_of(&self, positions: &[usize]) -> VertexSet {
        let mask = positions
            .iter()
            .fold(0u64, |acc, &i| acc ^ self.index.edge_mask(&self.edges[i]));
        self.index.set(mask)
    }

    /// Connectivity through the edge positions listed.
    pub fn connected_by(&self, positions: &[usize], u: VertexId, v: VertexId) -> bool {
        if u == v {
            return true;
        }
        let (Some(a), Some(b)) = (self.index.position(u), self.index.position(v)) else {
            return false;
        };
        let mut uf = UnionFind::new(self.index.len());
        for &i in positions {
            let e = &self.edges[i];
            uf.union(
                self.index.position(e.u).unwrap(),
                self.index.position(e.v).unwrap(),
            );
        }
        uf.find(a) == uf.find(b)
    }
}

/// A current on a base graph: one nonnegative integer per edge, stored in
/// edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Current<'g> {
    base: &'g BaseGraph,
    values: Vec<u32>,
}

impl<'g> Current<'g> {
    pub fn new(base: &'g BaseGraph, values: Vec<u32>) -> Result<Self> {
        if values.len() != base.num_edges() {
            return Err(Error::Invalid(format!(
                "current has {} values for {} edges",
                values.len(),
                base.num_edges()
            )));
        }
        Ok(Current { base, values })
    }

    pub fn zero(base: &'g BaseGraph) -> Self {
        Current {
            base,
            values: vec![0; base.num_edges()],
        }
    }

    /// Builds a current from `(label, value)` pairs; unlisted edges carry 0.
    pub fn from_labels(base: &'g BaseGraph, entries: &[(EdgeId, u32)]) -> Result<Self> {
        let mut values = vec![0; base.num_edges()];
        for &(id, value) in entries {
            let i = base.edge_position(id).ok_or(Error::UnknownEdge(id))?;
            values[i] = value;
        }
        Ok(Current { base, values })
    }

    pub fn base(&self) -> &'g BaseGraph {
        self.base
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn value(&self, id: EdgeId) -> Option<u32> {
        self.base.edge_position(id).map(|i| self.values[i])
    }

    /// `|m|`, the total current.
    pub fn total(&self) -> u64 {
        self.values.iter().map(|&v| v as u64).sum()
    }

    pub(crate) fn boundary_mask(&self) -> u64 {
        self.base
            .edges
            .iter()
            .zip(&self.values)
            .filter(|(_, &n)| n % 2 == 1)
            .fold(0, |acc, (e, _)| acc ^ self.base.index.edge_mask(e))
    }

    /// Sources: vertices with odd incident current.
    pub fn boundary(&self) -> VertexSet {
        self.base.index.set(self.boundary_mask())
    }

    /// `u <-> v` through edges of strictly positive current.
    pub fn connects(&self, u: VertexId, v: VertexId) -> bool {
        let support: Vec<usize> = (0..self.values.len())
            .filter(|&i| self.values[i] > 0)
            .collect();
        self.base.connected_by(&support, u, v)
    }

    /// `w(n) = prod_e J_e^{n_e} / n_e!` with couplings given in edge order.
    pub fn weight(&self, couplings: &[Rational]) -> Rational {
        assert_eq!(couplings.len(), self.values.len(), "one coupling per edge");
        couplings
            .iter()
            .zip(&self.values)
            .fold(Rational::one(), |acc, (j, &n)| {
                let fact: Rational = Rational::from_integer(crate::rational::factorial(n));
                acc * Pow::pow(j, n) / fact
            })
    }

    pub fn plus(&self, other: &Current<'g>) -> Current<'g> {
        assert!(std::ptr::eq(self.base, other.base), "currents on different graphs");
        Current {
            base: self.base,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Every `n <= m` with boundary `a`, paired with `prod_e C(m_e, n_e)`.
    pub fn sub_currents(&self, a: &VertexSet) -> SubCurrents<'_, 'g> {
        let target = self.base.mask(a).ok();
        SubCurrents {
            outer: self,
            target,
            state: vec![0; self.values.len()],
            done: target.is_none(),
        }
    }

    /// Finite switching identity at fixed total current `m`:
    /// `sum_{n<=m, dn=A} C(m,n) = 1[u <-> v in m] * sum_{n<=m, dn=A^{u,v}} C(m,n)`.
    ///
    /// Vacuously true when `dm != A ^ {u,v}`.
    pub fn switching_check(&self, a: &VertexSet, u: VertexId, v: VertexId) -> bool {
        let Ok(amask) = self.base.mask(a) else {
            return true;
        };
        let (Ok(bu), Ok(bv)) = (self.base.index.bit(u), self.base.index.bit(v)) else {
            return true;
        };
        let uv = bu ^ bv;
        if self.boundary_mask() != amask ^ uv {
            return true;
        }
        let lhs: u128 = self.sub_currents(a).map(|(_, w)| w as u128).sum();
        let rhs: u128 = if self.connects(u, v) {
            let switched = self.base.index.set(amask ^ uv);
            self.sub_currents(&switched).map(|(_, w)| w as u128).sum()
        } else {
            0
        };
        lhs == rhs
    }
}

/// Stream produced by [`Current::sub_currents`].
pub struct SubCurrents<'a, 'g> {
    outer: &'a Current<'g>,
    target: Option<u64>,
    state: Vec<u32>,
    done: bool,
}

impl<'a, 'g> Iterator for SubCurrents<'a, 'g> {
    type Item = (Current<'g>, u64);

    fn next(&mut self) -> Option<Self::Item> {
        let target = self.target?;
        let base = self.outer.base;
        while !self.done {
            let mask = base
                .edges
                .iter()
                .zip(&self.state)
                .filter(|(_, &n)| n % 2 == 1)
                .fold(0, |acc, (e, _)| acc ^ base.index.edge_mask(e));
            let hit = (mask == target).then(|| {
                let w = self
                    .state
                    .iter()
                    .zip(&self.outer.values)
                    .map(|(&n, &m)| binomial(m, n))
                    .product();
                (
                    Current {
                        base,
                        values: self.state.clone(),
                    },
                    w,
                )
            });
            // odometer step
            let mut i = 0;
            loop {
                if i == self.state.len() {
                    self.done = true;
                    break;
                }
                if self.state[i] < self.outer.values[i] {
                    self.state[i] += 1;
                    break;
                }
                self.state[i] = 0;
                i += 1;
            }
            if hit.is_some() {
                return hit;
            }
        }
        None
    }
}

/// All currents on `base` with `|m| <= max_total`, in odometer order.
pub fn currents_up_to(base: &BaseGraph, max_total: u32) -> Vec<Current<'_>> {
    let mut out = Vec::new();
    let mut values = vec![0u32; base.num_edges()];
    fn rec<'g>(
        base: &'g BaseGraph,
        pos: usize,
        left: u32,
        values: &mut Vec<u32>,
        out: &mut Vec<Current<'g>>,
    ) {
        if pos == values.len() {
            out.push(Current {
                base,
                values: values.clone(),
            });
            return;
        }
        for x in 0..=left {
            values[pos] = x;
            rec(base, pos + 1, left - x, values, out);
        }
        values[pos] = 0;
    }
    rec(base, 0, max_total, &mut values, &mut out);
    out
}

/// A labelled multigraph with a marked pair `(u0, v0)` and a source list.
///
/// The instance is *admissible* when its boundary equals `sources ^ {u0, v0}`;
/// non-admissible instances are legal and simply have no partitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    index: VertexIndex,
    edges: Vec<Edge>,
    marked: (VertexId, VertexId),
    sources: Vec<VertexId>,
    admissible: bool,
}

impl MultiGraph {
    pub fn new<V>(
        vertices: V,
        edges: Vec<Edge>,
        marked: (VertexId, VertexId),
        sources: Vec<VertexId>,
    ) -> Result<Self>
    where
        V: IntoIterator<Item = VertexId>,
    {
        let index = VertexIndex::new(vertices)?;
        let mut seen = BTreeSet::new();
        for e in &edges {
            if !seen.insert(e.id) {
                return Err(Error::DuplicateEdge(e.id));
            }
            index.bit(e.u)?;
            index.bit(e.v)?;
        }
        let (u0, v0) = marked;
        index.bit(u0)?;
        index.bit(v0)?;
        if u0 == v0 {
            return Err(Error::Invalid(format!("marked pair repeats vertex {u0}")));
        }
        if sources.len() % 2 == 1 {
            return Err(Error::OddSourceSet(sources.len()));
        }
        let mut distinct = BTreeSet::new();
        for &s in &sources {
            index.bit(s)?;
            if !distinct.insert(s) {
                return Err(Error::Invalid(format!("source {s} listed twice")));
            }
        }
        if distinct.contains(&v0) {
            return Err(Error::Invalid(format!("v0 = {v0} is a source")));
        }
        let boundary = edges.iter().fold(0u64, |acc, e| acc ^ index.edge_mask(e));
        let expected = index.mask(&sources)? ^ index.bit(u0)? ^ index.bit(v0)?;
        Ok(MultiGraph {
            admissible: boundary == expected,
            index,
            edges,
            marked,
            sources,
        })
    }

    /// The multigraph associated with a current: `m_e` labelled copies of
    /// each edge, labels assigned `0, 1, ...` in edge order.
    pub fn from_current(
        m: &Current<'_>,
        sources: &[VertexId],
        marked: (VertexId, VertexId),
    ) -> Result<Self> {
        let mut edges = Vec::new();
        for (e, &n) in m.base.edges.iter().zip(&m.values) {
            for _ in 0..n {
                edges.push(Edge {
                    id: EdgeId(edges.len() as u32),
                    u: e.u,
                    v: e.v,
                });
            }
        }
        MultiGraph::new(
            m.base.vertices().iter().copied(),
            edges,
            marked,
            sources.to_vec(),
        )
    }

    pub fn vertices(&self) -> &[VertexId] {
        self.index.ids()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, label: EdgeId) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == label)
    }

    pub fn edge_position(&self, label: EdgeId) -> Option<usize> {
        self.edges.iter().position(|e| e.id == label)
    }

    pub fn marked(&self) -> (VertexId, VertexId) {
        self.marked
    }

    pub fn sources(&self) -> &[VertexId] {
        &self.sources
    }

    pub fn k(&self) -> usize {
        self.sources.len() / 2
    }

    pub fn is_admissible(&self) -> bool {
        self.admissible
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.u == v) + usize::from(e.v == v))
            .sum()
    }

    pub fn boundary(&self) -> VertexSet {
        self.index
            .set(self.edges.iter().fold(0, |acc, e| acc ^ self.index.edge_mask(e)))
    }

    pub(crate) fn index(&self) -> &VertexIndex {
        &self.index
    }

    pub fn fresh_label(&self) -> EdgeId {
        EdgeId(self.edges.iter().map(|e| e.id.0 + 1).max().unwrap_or(0))
    }

    /// Same multigraph with one more edge under a fresh label.
    pub fn with_edge(&self, u: VertexId, v: VertexId) -> Result<(MultiGraph, EdgeId)> {
        let id = self.fresh_label();
        let mut edges = self.edges.clone();
        edges.push(Edge { id, u, v });
        let g = MultiGraph::new(
            self.vertices().iter().copied(),
            edges,
            self.marked,
            self.sources.clone(),
        )?;
        Ok((g, id))
    }

    pub fn without_edge(&self, label: EdgeId) -> Result<MultiGraph> {
        let pos = self.edge_position(label).ok_or(Error::UnknownEdge(label))?;
        let mut edges = self.edges.clone();
        edges.remove(pos);
        MultiGraph::new(
            self.vertices().iter().copied(),
            edges,
            self.marked,
            self.sources.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num_traits::Zero;

    fn path() -> BaseGraph {
        // j1 = 0, u0 = 1, v0 = 2
        BaseGraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn boundary_examples() {
        let g = path();
        assert!(Current::zero(&g).boundary().is_empty());
        let single = BaseGraph::from_pairs(2, &[(0, 1)]).unwrap();
        let c = Current::new(&single, vec![1]).unwrap();
        assert_eq!(c.boundary(), vertex_set([0, 1]));
        let c = Current::new(&g, vec![1, 1]).unwrap();
        assert_eq!(c.boundary(), vertex_set([0, 2]));
    }

    #[test]
    fn connectivity_examples() {
        let g = path();
        let zero = Current::zero(&g);
        assert!(zero.connects(VertexId(1), VertexId(1)));
        assert!(!zero.connects(VertexId(0), VertexId(2)));
        let c = Current::new(&g, vec![1, 1]).unwrap();
        assert!(c.connects(VertexId(0), VertexId(2)));
        let c = Current::new(&g, vec![1, 0]).unwrap();
        assert!(!c.connects(VertexId(0), VertexId(2)));
    }

    #[test]
    fn weight_examples() {
        let g = BaseGraph::from_pairs(2, &[(0, 1)]).unwrap();
        assert_eq!(Current::zero(&g).weight(&[rat(1, 2)]), rat(1, 1));
        let c = Current::new(&g, vec![2]).unwrap();
        assert_eq!(c.weight(&[rat(1, 2)]), rat(1, 8));
        assert!(c.weight(&[rat(0, 1)]).is_zero());
    }

    #[test]
    fn sub_current_examples() {
        let g = BaseGraph::from_pairs(2, &[(0, 1)]).unwrap();
        let zero = Current::zero(&g);
        let items: Vec<_> = zero.sub_currents(&VertexSet::new()).collect();
        assert_eq!(items.len(), 1);
        assert_eq!(items[0].1, 1);

        let one = Current::new(&g, vec![1]).unwrap();
        let items: Vec<_> = one.sub_currents(&vertex_set([0, 1])).collect();
        assert_eq!(items.len(), 1);
        assert_eq!(items[0].0, one);

        let two = Current::new(&g, vec![2]).unwrap();
        let items: Vec<_> = two.sub_currents(&VertexSet::new()).collect();
        assert_eq!(
            items.iter().map(|(n, w)| (n.values()[0], *w)).collect::<Vec<_>>(),
            vec![(0, 1), (2, 1)]
        );
    }

    #[test]
    fn switching_examples() {
        let g = BaseGraph::from_pairs(2, &[(0, 1)]).unwrap();
        let m = Current::new(&g, vec![1]).unwrap();
        assert!(m.switching_check(&VertexSet::new(), VertexId(0), VertexId(1)));

        // u and v in different components of m
        let g = BaseGraph::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        let m = Current::new(&g, vec![2, 0]).unwrap();
        assert!(m.switching_check(&VertexSet::new(), VertexId(0), VertexId(3)));
    }

    #[test]
    fn base_graph_rejects_bad_input() {
        assert_eq!(
            BaseGraph::from_pairs(2, &[(0, 0)]),
            Err(Error::SelfLoop(EdgeId(0)))
        );
        assert_eq!(
            BaseGraph::from_pairs(2, &[(0, 5)]),
            Err(Error::UnknownVertex(VertexId(5)))
        );
    }

    #[test]
    fn multigraph_admissibility() {
        // H_2: j1..j4 = 1..4, v0 = 5, u0 = j1
        let edges = vec![Edge::new(0, 1, 2), Edge::new(1, 1, 3), Edge::new(2, 4, 5)];
        let g = MultiGraph::new(
            (1..=5).map(VertexId),
            edges.clone(),
            (VertexId(1), VertexId(5)),
            (1..=4).map(VertexId).collect(),
        )
        .unwrap();
        assert!(g.is_admissible());
        assert_eq!(g.k(), 2);
        let g = g.without_edge(EdgeId(2)).unwrap();
        assert!(!g.is_admissible());

        let err = MultiGraph::new(
            (1..=5).map(VertexId),
            edges,
            (VertexId(1), VertexId(5)),
            vec![VertexId(5), VertexId(2)],
        );
        assert!(err.is_err());
    }
}
