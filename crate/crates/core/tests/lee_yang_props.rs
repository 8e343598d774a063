use proptest::prelude::*;

use ursell_core::corpus::corpus_rng;
use ursell_core::lee_yang::{
    alpha1_of, alpha1_scan, cumulant_radius_diagnostic, partition_polynomial, random_field_instance, roots,
    two_spin_alpha1, WeightedField,
};
use ursell_core::ising::Couplings;
use ursell_core::rational::rat;
use ursell_core::{BaseGraph, VertexId};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zeros_sit_on_the_unit_circle(seed in any::<u64>()) {
        let inst = random_field_instance(&mut corpus_rng(seed), 7);
        let (g, field) = (inst.graph(), inst.field());
        let p = partition_polynomial(&g, &inst.lower, &field).unwrap();
        prop_assert!(p.is_palindromic());
        let spectrum = roots(&p).unwrap();
        prop_assert!(spectrum.max_circle_deviation() <= 1e-9);
        let scan = alpha1_scan(&g, &inst.lower, &field).unwrap();
        prop_assert!((scan - spectrum.alpha1()).abs() <= 1e-9, "scan {} roots {}", scan, spectrum.alpha1());
    }

    #[test]
    fn first_zero_does_not_grow_with_coupling(seed in any::<u64>()) {
        let inst = random_field_instance(&mut corpus_rng(seed), 6);
        let (g, field) = (inst.graph(), inst.field());
        let lo = alpha1_of(&partition_polynomial(&g, &inst.lower, &field).unwrap()).unwrap();
        let hi = alpha1_of(&partition_polynomial(&g, &inst.upper, &field).unwrap()).unwrap();
        prop_assert!(lo >= hi - 1e-9, "{} < {}", lo, hi);
    }

    #[test]
    fn two_spin_closed_form(j in 0.0f64..=3.0) {
        let g = BaseGraph::from_pairs(2, &[(0, 1)]).unwrap();
        let field = WeightedField::uniform(&g, rat(1, 1));
        let a = alpha1_of(&partition_polynomial(&g, &[j], &field).unwrap()).unwrap();
        prop_assert!((a - two_spin_alpha1(j)).abs() <= 1e-12);
    }
}

#[test]
fn free_spin_radius_sequence_straddles() {
    let g = BaseGraph::new([VertexId(0)], []).unwrap();
    let t = Couplings::new(&g, vec![]).unwrap();
    let d = cumulant_radius_diagnostic(&g, &t, &WeightedField::uniform(&g, rat(1, 1)), 4).unwrap();
    assert!((d.roots[0].1 - 0.5f64.sqrt()).abs() < 1e-12);
    assert!((d.roots[1].1 - (2.0f64 / 24.0).powf(0.25)).abs() < 1e-12);
    assert!((d.inverse_alpha1 - 2.0 / std::f64::consts::PI).abs() < 1e-9);
}
