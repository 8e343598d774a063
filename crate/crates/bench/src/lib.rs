//! Shared fixtures for the benchmarks.

use ursell_core::ising::Couplings;
use ursell_core::lee_yang::WeightedField;
use ursell_core::partition::{make_special, SpecialFamily, SpecialGraphSpec};
use ursell_core::rational::rat;
use ursell_core::{BaseGraph, MultiGraph};

pub fn special(family: SpecialFamily, k: usize, l: usize) -> MultiGraph {
    make_special(SpecialGraphSpec::new(family, k, l)).expect("valid special graph")
}

/// `n`-cycle with two chords.
pub fn ring(n: u32) -> BaseGraph {
    let mut pairs: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    pairs.push((0, n / 2));
    pairs.push((1, n / 2 + 1));
    BaseGraph::from_pairs(n, &pairs).expect("ring is well formed")
}

pub fn ring_couplings(g: &BaseGraph) -> Couplings {
    let t = (0..g.num_edges()).map(|i| rat(1 + i as i64 % 3, 5)).collect();
    Couplings::new(g, t).expect("couplings in range")
}

pub fn ring_j(g: &BaseGraph) -> Vec<f64> {
    (0..g.num_edges()).map(|i| 0.2 + 0.15 * (i % 4) as f64).collect()
}

pub fn unit_field(g: &BaseGraph) -> WeightedField {
    WeightedField::uniform(g, rat(1, 1))
}
