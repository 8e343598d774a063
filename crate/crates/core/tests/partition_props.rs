use proptest::prelude::*;

use ursell_core::corpus::{corpus_rng, random_current_instance, random_multigraph, random_separate_restrictions};
use ursell_core::partition::{
    contractible_pairs, make_special, n_l, partition_sum, r_current, r_graph, reduce_self_loop, sign_scan,
    RestrictionMode, RestrictionSet, SpecialFamily, SpecialGraphSpec,
};
use ursell_core::rational::signed_by_order;
use ursell_core::{Edge, EdgeId, MultiGraph, VertexId};

fn none() -> RestrictionSet {
    RestrictionSet::new()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_and_current_routes_agree(seed in any::<u64>()) {
        let inst = random_current_instance(&mut corpus_rng(seed), 6, 5, 7, 3);
        let g = inst.multigraph();
        prop_assert_eq!(
            r_graph(&g, &none()).unwrap(),
            r_current(&inst.current(), &inst.sources, inst.marked).unwrap()
        );
    }

    #[test]
    fn self_loop_scales_by_k_plus_one(seed in any::<u64>()) {
        let g = random_multigraph(&mut corpus_rng(seed), 5, 6, 2, true);
        for e in g.edges().iter().filter(|e| e.is_loop()) {
            let reduced = reduce_self_loop(&g, e.id).unwrap();
            prop_assert_eq!(
                r_graph(&g, &none()).unwrap(),
                (g.k() as i128 + 1) * r_graph(&reduced, &none()).unwrap()
            );
        }
    }

    #[test]
    fn together_and_separate_split_the_count(seed in any::<u64>()) {
        let g = random_multigraph(&mut corpus_rng(seed), 5, 6, 2, false);
        let labels: Vec<EdgeId> = g.edges().iter().map(|e| e.id).collect();
        for (i, &a) in labels.iter().enumerate() {
            for &b in &labels[i + 1..] {
                let mut sep = none();
                sep.push(a, b, RestrictionMode::Separate).unwrap();
                let mut tog = none();
                tog.push(a, b, RestrictionMode::Together).unwrap();
                prop_assert_eq!(
                    r_graph(&g, &none()).unwrap(),
                    r_graph(&g, &sep).unwrap() + r_graph(&g, &tog).unwrap()
                );
            }
        }
    }

    #[test]
    fn unrestricted_sign_alternates_with_k(seed in any::<u64>()) {
        let g = random_multigraph(&mut corpus_rng(seed), 6, 7, 3, false);
        let r = r_graph(&g, &none()).unwrap();
        prop_assert!(signed_by_order(g.k(), r) >= 0, "k={} R={}", g.k(), r);
    }

    #[test]
    fn fully_separated_vertex_admits_no_partition(seed in any::<u64>()) {
        let g = random_multigraph(&mut corpus_rng(seed), 5, 6, 2, false);
        let (u0, v0) = g.marked();
        for &v in g.vertices() {
            let incident: Vec<EdgeId> = g.edges().iter().filter(|e| e.touches(v)).map(|e| e.id).collect();
            if v == u0 || v == v0 || incident.len() < 2 {
                continue;
            }
            let mut rs = none();
            for (i, &a) in incident.iter().enumerate() {
                for &b in &incident[i + 1..] {
                    rs.push(a, b, RestrictionMode::Separate).unwrap();
                }
            }
            prop_assert_eq!(partition_sum(&g, &rs).unwrap().count, 0);
        }
    }

    #[test]
    fn degree_two_contraction_identity(seed in any::<u64>()) {
        let mut rng = corpus_rng(seed);
        let g = random_multigraph(&mut rng, 5, 6, 2, false);
        let extra = random_separate_restrictions(&mut rng, &g, 1);
        for (e1, e2, at) in contractible_pairs(&g) {
            if g.degree(at) != 2 {
                continue;
            }
            let mut rs = none();
            for item in extra.items() {
                if ![e1, e2].contains(&item.a) && ![e1, e2].contains(&item.b) {
                    rs.push(item.a, item.b, item.mode).unwrap();
                }
            }
            let (merged, _) = ursell_core::partition::contract_pair(&g, e1, e2, at).unwrap();
            let mut sep = rs.clone();
            sep.push(e1, e2, RestrictionMode::Separate).unwrap();
            prop_assert_eq!(
                r_graph(&g, &rs).unwrap(),
                r_graph(&merged, &rs).unwrap() + r_graph(&g, &sep).unwrap()
            );
        }
    }
}

#[test]
fn doubled_marked_edges_multiply_by_box_count() {
    for family in [SpecialFamily::H, SpecialFamily::KI, SpecialFamily::KII] {
        let lowest = if family == SpecialFamily::H { 2 } else { 1 };
        for k in lowest..=3 {
            let plain = r_graph(&make_special(SpecialGraphSpec::new(family, k, 0)).unwrap(), &none()).unwrap();
            for l in 1..=2 {
                let g = make_special(SpecialGraphSpec::new(family, k, l)).unwrap();
                let factor = n_l(l as u32, k as u32 - 1) as i128;
                assert_eq!(r_graph(&g, &none()).unwrap(), factor * plain, "{family:?} k={k} L={l}");
            }
        }
    }
}

/// A vertex of degree three makes the contraction drop an attachment that
/// decides the marked connectivity, so the identity fails there.
#[test]
fn contraction_identity_fails_at_degree_three() {
    let g = MultiGraph::new(
        (0..3).map(VertexId),
        vec![Edge::new(0, 2, 0), Edge::new(1, 2, 0), Edge::new(2, 1, 2)],
        (VertexId(0), VertexId(1)),
        vec![VertexId(0), VertexId(2)],
    )
    .unwrap();
    let (merged, _) = ursell_core::partition::contract_pair(&g, EdgeId(0), EdgeId(1), VertexId(2)).unwrap();
    let sep = none().separate(0, 1).unwrap();
    assert_eq!(r_graph(&g, &none()).unwrap(), 0);
    assert_eq!(r_graph(&merged, &none()).unwrap(), 2);
    assert_eq!(r_graph(&g, &sep).unwrap(), 0);
}

/// Loop-free, separations avoid the marked edge and loops, yet the signed
/// restricted count is negative.
#[test]
fn restricted_sign_can_fail_without_loops() {
    let g = MultiGraph::new(
        (0..5).map(VertexId),
        vec![
            Edge::new(0, 3, 0),
            Edge::new(1, 3, 4),
            Edge::new(2, 0, 1),
            Edge::new(3, 3, 1),
            Edge::new(4, 2, 1),
        ],
        (VertexId(0), VertexId(1)),
        vec![VertexId(0), VertexId(2), VertexId(3), VertexId(4)],
    )
    .unwrap();
    let rs = none().separate(1, 3).unwrap().separate(0, 4).unwrap();
    assert!(ursell_core::partition::restrictions_in_scope(&g, &rs));
    let report = sign_scan([(g.clone(), rs.clone())]).unwrap();
    assert_eq!(report.violations.len(), 1);
    assert_eq!(partition_sum(&g, &rs).unwrap().count, 1);
    assert_eq!(signed_by_order(g.k(), r_graph(&g, &rs).unwrap()), -1);
    assert_eq!(r_graph(&g, &none()).unwrap(), -4);
}
