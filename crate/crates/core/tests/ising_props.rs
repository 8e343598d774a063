use proptest::prelude::*;

use ursell_core::corpus::{corpus_rng, random_coupling_chain, random_graph};
use ursell_core::graph::vertex_set;
use ursell_core::ising::{
    correlation, correlation_oracle, cumulant, cumulant_from_ursell, reduction_check, ursell, Couplings,
};
use ursell_core::lee_yang::WeightedField;
use ursell_core::rational::rat;
use ursell_core::{BaseGraph, VertexId};

/// Random base graph with exact couplings; the generator stream is fixed by `seed`.
fn instance(seed: u64, max_v: usize) -> (BaseGraph, Couplings) {
    use rand::Rng;
    let mut rng = corpus_rng(seed);
    let n = rng.random_range(2..=max_v);
    let extra = rng.random_range(0..=n);
    let g = random_graph(&mut rng, n, n - 1 + extra, false);
    let (t, _) = random_coupling_chain(&mut rng, g.num_edges(), 5);
    let t = Couplings::new(&g, t).unwrap();
    (g, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn correlation_routes_agree(seed in any::<u64>(), mask in any::<u16>()) {
        let (g, t) = instance(seed, 6);
        let a = vertex_set(g.vertices().iter().map(|v| v.0).filter(|&v| mask >> v & 1 == 1));
        prop_assert_eq!(correlation(&g, &t, &a).unwrap(), correlation_oracle(&g, &t, &a).unwrap());
    }

    #[test]
    fn odd_ursell_functions_vanish(seed in any::<u64>(), picks in prop::collection::vec(0u32..6, 1..=5)) {
        let (g, t) = instance(seed, 6);
        let n = g.num_vertices() as u32;
        let spins: Vec<VertexId> = picks.iter().map(|&p| VertexId(p % n)).collect();
        let u = ursell(&g, &t, &spins).unwrap();
        if spins.len() % 2 == 1 {
            prop_assert_eq!(u.value, rat(0, 1));
        }
    }

    #[test]
    fn cumulant_is_weighted_ursell_sum(seed in any::<u64>(), r in 1usize..=4, w in prop::collection::vec(0i64..3, 4)) {
        let (g, t) = instance(seed, 4);
        let lambda = WeightedField::new(g.vertices().iter().map(|&v| (v, rat(w[v.0 as usize], 2)))).unwrap();
        prop_assert_eq!(cumulant(&g, &t, &lambda, r).unwrap(), cumulant_from_ursell(&g, &t, &lambda, r).unwrap());
        if r % 2 == 1 {
            prop_assert_eq!(cumulant(&g, &t, &lambda, r).unwrap(), rat(0, 1));
        }
    }

    #[test]
    fn repeated_spin_reduction(seed in any::<u64>(), picks in prop::collection::vec(0u32..5, 3..=5)) {
        let (g, t) = instance(seed, 5);
        let n = g.num_vertices() as u32;
        let mut spins: Vec<VertexId> = vec![VertexId(picks[0] % n)];
        spins.extend(picks.iter().map(|&p| VertexId(p % n)));
        if spins.len() % 2 == 1 {
            spins.pop();
        }
        prop_assert!(reduction_check(&g, &t, &spins).unwrap(), "spins {:?}", spins);
    }
}

#[test]
fn single_spin_cumulants_match_log_cosh() {
    let g = BaseGraph::new([VertexId(0)], []).unwrap();
    let t = Couplings::new(&g, vec![]).unwrap();
    let one = WeightedField::uniform(&g, rat(1, 1));
    assert_eq!(cumulant(&g, &t, &one, 2).unwrap(), rat(1, 1));
    assert_eq!(cumulant(&g, &t, &one, 4).unwrap(), rat(-2, 1));
    assert_eq!(cumulant(&g, &t, &one, 6).unwrap(), rat(16, 1));
}
