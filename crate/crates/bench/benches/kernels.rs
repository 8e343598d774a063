use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use ursell_bench::{ring, ring_couplings, ring_j, special, unit_field};
use ursell_core::graph::{currents_up_to, symmetric_difference, VertexSet};
use ursell_core::ising::{ursell, CorrelationTable};
use ursell_core::lee_yang::{alpha1_of, partition_polynomial, roots};
use ursell_core::partition::{r_graph, RestrictionSet, SpecialFamily};
use ursell_core::{BaseGraph, VertexId};

fn partitions(c: &mut Criterion) {
    let none = RestrictionSet::new();
    for (name, g) in [
        ("H_3", special(SpecialFamily::H, 3, 0)),
        ("KI_3", special(SpecialFamily::KI, 3, 0)),
        ("KII_3_L1", special(SpecialFamily::KII, 3, 1)),
    ] {
        c.bench_function(&format!("r_graph {name}"), |b| b.iter(|| r_graph(black_box(&g), &none).unwrap()));
    }
}

fn switching(c: &mut Criterion) {
    let g = BaseGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
    c.bench_function("switching |m| <= 4 on K4 minus an edge", |b| {
        b.iter(|| {
            let mut ok = true;
            for m in currents_up_to(&g, 4) {
                for &u in g.vertices() {
                    for &v in g.vertices().iter().filter(|&&v| v > u) {
                        let uv: VertexSet = [u, v].into_iter().collect();
                        ok &= m.switching_check(&symmetric_difference(&m.boundary(), &uv), u, v);
                    }
                }
            }
            ok
        })
    });
}

fn ising(c: &mut Criterion) {
    let g = ring(8);
    let t = ring_couplings(&g);
    c.bench_function("exact correlation table, 8 spins", |b| {
        b.iter(|| CorrelationTable::exact(black_box(&g), &t).unwrap())
    });
    let spins: Vec<VertexId> = (0..6).map(VertexId).collect();
    c.bench_function("exact u_6, 8 spins", |b| b.iter(|| ursell(&g, &t, black_box(&spins)).unwrap()));
}

fn zeros(c: &mut Criterion) {
    let g = ring(8);
    let j = ring_j(&g);
    let field = unit_field(&g);
    let p = partition_polynomial(&g, &j, &field).unwrap();
    c.bench_function("field polynomial, 8 spins", |b| {
        b.iter(|| partition_polynomial(black_box(&g), &j, &field).unwrap())
    });
    c.bench_function("roots, degree 8", |b| b.iter(|| roots(black_box(&p)).unwrap()));
    c.bench_function("first zero scan, degree 8", |b| b.iter(|| alpha1_of(black_box(&p)).unwrap()));
}

criterion_group!(benches, partitions, switching, ising, zeros);
criterion_main!(benches);
