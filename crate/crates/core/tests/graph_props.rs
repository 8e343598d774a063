use proptest::prelude::*;

use ursell_core::graph::{symmetric_difference, BaseGraph, Current, VertexId, VertexSet};

/// Loop-free base graph on `2..=max_v` vertices with `1..=max_e` edges.
fn base_graph(max_v: u32, max_e: usize) -> impl Strategy<Value = BaseGraph> {
    (2..=max_v).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 1..n), 1..=max_e).prop_map(move |raw| {
            let pairs: Vec<(u32, u32)> = raw.iter().map(|&(a, d)| (a, (a + d) % n)).collect();
            BaseGraph::from_pairs(n, &pairs).unwrap()
        })
    })
}

fn graph_and_values(max_v: u32, max_e: usize, max_val: u32) -> impl Strategy<Value = (BaseGraph, Vec<u32>, Vec<u32>)> {
    base_graph(max_v, max_e).prop_flat_map(move |g| {
        let e = g.num_edges();
        (
            Just(g),
            prop::collection::vec(0..=max_val, e),
            prop::collection::vec(0..=max_val, e),
        )
    })
}

fn even_subsets(vs: &[VertexId]) -> Vec<VertexSet> {
    (0u32..1 << vs.len())
        .filter(|s| s.count_ones() % 2 == 0)
        .map(|s| (0..vs.len()).filter(|i| s >> i & 1 == 1).map(|i| vs[i]).collect())
        .collect()
}

proptest! {
    #[test]
    fn boundary_is_additive((g, a, b) in graph_and_values(6, 6, 3)) {
        let m = Current::new(&g, a).unwrap();
        let n = Current::new(&g, b).unwrap();
        prop_assert_eq!(m.plus(&n).boundary(), symmetric_difference(&m.boundary(), &n.boundary()));
    }

    #[test]
    fn sub_current_weights_sum_to_two_to_the_total((g, a, _) in graph_and_values(5, 4, 3)) {
        let m = Current::new(&g, a).unwrap();
        let sum: u64 = even_subsets(g.vertices())
            .iter()
            .map(|s| m.sub_currents(s).map(|(_, w)| w).sum::<u64>())
            .sum();
        prop_assert_eq!(sum, 1u64 << m.total());
    }

    #[test]
    fn connectivity_is_an_equivalence((g, a, _) in graph_and_values(6, 6, 2)) {
        let m = Current::new(&g, a).unwrap();
        let vs = g.vertices();
        for &x in vs {
            prop_assert!(m.connects(x, x));
            for &y in vs {
                prop_assert_eq!(m.connects(x, y), m.connects(y, x));
                for &z in vs {
                    if m.connects(x, y) && m.connects(y, z) {
                        prop_assert!(m.connects(x, z));
                    }
                }
            }
        }
    }

    #[test]
    fn switching_holds_for_every_compatible_source_set((g, a, _) in graph_and_values(5, 5, 2)) {
        let m = Current::new(&g, a).unwrap();
        let vs = g.vertices();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                let uv: VertexSet = [u, v].into_iter().collect();
                let target = symmetric_difference(&m.boundary(), &uv);
                prop_assert!(m.switching_check(&target, u, v), "u={} v={} m={:?}", u, v, m.values());
            }
        }
    }
}
