//! Seeded instance generators shared by the harnesses.
//!
//! All randomness flows through [`CorpusRng`] (ChaCha8, seeded from a `u64`),
//! so a seed pins every corpus byte for byte.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{BaseGraph, Current, Edge, MultiGraph, VertexId};
use crate::partition::{contractible_pairs, RestrictionMode, RestrictionSet};
use crate::rational::{rat, Rational};

pub type CorpusRng = ChaCha8Rng;

pub fn corpus_rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vertices `0..n`; with `connected`, a random tree on `0..n` comes first.
/// Parallel edges may occur, self-loops never.
pub fn random_graph(rng: &mut CorpusRng, n: usize, edges: usize, connected: bool) -> BaseGraph {
    assert!(n >= 2 || edges == 0);
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(edges);
    if connected {
        for v in 1..n {
            pairs.push((rng.random_range(0..v) as u32, v as u32));
        }
    }
    while pairs.len() < edges {
        let a = rng.random_range(0..n) as u32;
        let b = rng.random_range(0..n) as u32;
        if a != b {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    BaseGraph::from_pairs(n as u32, &pairs).expect("generated graph is well formed")
}

/// A rational in `[0, 1)` with denominator at most `max_den`.
pub fn random_unit_rational(rng: &mut CorpusRng, max_den: i64) -> Rational {
    let q = rng.random_range(1..=max_den);
    let p = rng.random_range(0..q);
    rat(p, q)
}

/// `t` plus a componentwise larger `t'`, both in `[0, 1)`.
pub fn random_coupling_chain(
    rng: &mut CorpusRng,
    edges: usize,
    max_den: i64,
) -> (Vec<Rational>, Vec<Rational>) {
    let lower: Vec<Rational> = (0..edges).map(|_| random_unit_rational(rng, max_den)).collect();
    let upper = lower
        .iter()
        .map(|t| {
            let s = rat(rng.random_range(0..=3), 4);
            t + (Rational::from_integer(1.into()) - t) * s * rat(3, 4)
        })
        .collect();
    (lower, upper)
}

/// A current instance: base graph, values, sources and marked pair, with
/// `∂m = sources ^ {u0, v0}` and `v0` not a source.
#[derive(Clone, Debug)]
pub struct CurrentInstance {
    pub base: BaseGraph,
    pub values: Vec<u32>,
    pub sources: Vec<VertexId>,
    pub marked: (VertexId, VertexId),
}

impl CurrentInstance {
    pub fn current(&self) -> Current<'_> {
        Current::new(&self.base, self.values.clone()).expect("values match edges")
    }

    pub fn multigraph(&self) -> MultiGraph {
        MultiGraph::from_current(&self.current(), &self.sources, self.marked)
            .expect("instance is well formed")
    }

    pub fn k(&self) -> usize {
        self.sources.len() / 2
    }
}

/// Random admissible current instances with `1 <= k <= max_k` and
/// `|m| <= max_total`. Rejection sampling over random currents.
pub fn random_current_instance(
    rng: &mut CorpusRng,
    max_vertices: usize,
    max_edges: usize,
    max_total: u32,
    max_k: usize,
) -> CurrentInstance {
    loop {
        let n = rng.random_range(2..=max_vertices);
        let e = rng.random_range(1..=max_edges);
        let base = random_graph(rng, n, e, false);
        let mut values = vec![0u32; e];
        let total = rng.random_range(1..=max_total);
        for _ in 0..total {
            values[rng.random_range(0..e)] += 1;
        }
        let m = Current::new(&base, values.clone()).unwrap();
        let boundary: Vec<VertexId> = m.boundary().into_iter().collect();
        let Some(&v0) = boundary.choose(rng) else {
            continue;
        };
        let u0 = *base.vertices().choose(rng).unwrap();
        if u0 == v0 {
            continue;
        }
        let mut sources: Vec<VertexId> = boundary.iter().copied().filter(|&x| x != v0).collect();
        if let Some(pos) = sources.iter().position(|&x| x == u0) {
            sources.remove(pos);
        } else {
            sources.push(u0);
        }
        sources.sort();
        let k = sources.len() / 2;
        if k == 0 || k > max_k {
            continue;
        }
        return CurrentInstance {
            base,
            values,
            sources,
            marked: (u0, v0),
        };
    }
}

/// Random admissible labelled multigraph, possibly with self-loops, with
/// `1 <= k <= max_k` and at most `max_edges` edges.
pub fn random_multigraph(
    rng: &mut CorpusRng,
    max_vertices: usize,
    max_edges: usize,
    max_k: usize,
    loops: bool,
) -> MultiGraph {
    loop {
        let n = rng.random_range(3..=max_vertices) as u32;
        let e = rng.random_range(1..=max_edges);
        let edges: Vec<Edge> = (0..e)
            .map(|i| {
                let a = rng.random_range(0..n);
                let b = if loops && rng.random_bool(0.15) {
                    a
                } else {
                    loop {
                        let b = rng.random_range(0..n);
                        if b != a {
                            break b;
                        }
                    }
                };
                Edge::new(i as u32, a, b)
            })
            .collect();
        let probe = MultiGraph::new((0..n).map(VertexId), edges.clone(), (VertexId(0), VertexId(1)), vec![]);
        let Ok(probe) = probe else { continue };
        let boundary: Vec<VertexId> = probe.boundary().into_iter().collect();
        let Some(&v0) = boundary.choose(rng) else {
            continue;
        };
        let u0 = VertexId(rng.random_range(0..n));
        if u0 == v0 {
            continue;
        }
        let mut sources: Vec<VertexId> = boundary.iter().copied().filter(|&x| x != v0).collect();
        if let Some(pos) = sources.iter().position(|&x| x == u0) {
            sources.remove(pos);
        } else {
            sources.push(u0);
        }
        sources.sort();
        let k = sources.len() / 2;
        if k == 0 || k > max_k {
            continue;
        }
        return MultiGraph::new((0..n).map(VertexId), edges, (u0, v0), sources)
            .expect("admissible by construction");
    }
}

/// Up to `pairs` random SEPARATE restrictions between distinct edges that are
/// neither self-loops nor `u0v0` edges.
pub fn random_separate_restrictions(rng: &mut CorpusRng, g: &MultiGraph, pairs: usize) -> RestrictionSet {
    let (u0, v0) = g.marked();
    let eligible: Vec<_> = g
        .edges()
        .iter()
        .filter(|e| !e.is_loop() && !e.joins(u0, v0))
        .map(|e| e.id)
        .collect();
    let mut rs = RestrictionSet::new();
    if eligible.len() < 2 {
        return rs;
    }
    for _ in 0..pairs {
        let a = *eligible.choose(rng).unwrap();
        let b = *eligible.choose(rng).unwrap();
        if a != b {
            rs.push(a, b, RestrictionMode::Separate).unwrap();
        }
    }
    rs
}

/// A contractible pair chosen uniformly, if any.
pub fn random_contractible_pair(
    rng: &mut CorpusRng,
    g: &MultiGraph,
) -> Option<(crate::graph::EdgeId, crate::graph::EdgeId, VertexId)> {
    contractible_pairs(g).choose(rng).copied()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_reproduce() {
        let a = random_graph(&mut corpus_rng(7), 5, 7, true);
        let b = random_graph(&mut corpus_rng(7), 5, 7, true);
        assert_eq!(a, b);
    }

    #[test]
    fn current_instances_are_admissible() {
        let mut rng = corpus_rng(1);
        for _ in 0..50 {
            let inst = random_current_instance(&mut rng, 5, 5, 6, 3);
            assert!(inst.multigraph().is_admissible());
            assert!(!inst.sources.contains(&inst.marked.1));
        }
    }

    #[test]
    fn multigraphs_are_admissible() {
        let mut rng = corpus_rng(2);
        for _ in 0..50 {
            let g = random_multigraph(&mut rng, 6, 7, 3, true);
            assert!(g.is_admissible());
            assert!((1..=3).contains(&g.k()));
        }
    }
}
