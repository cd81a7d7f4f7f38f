use criterion::{black_box, criterion_group, criterion_main, Criterion};

use costbeta_bench::{cycle, f2_graph};
use costbeta_core::generate;
use costbeta_core::homology::{elek_cell, nabla, rips_complex, ElekOptions};
use costbeta_core::lipschitz::{lip_cost_exact, lip_cost_heuristic, ExactCaps, HeuristicOptions};
use costbeta_core::spectral::{characteristic_polynomial, CHARPOLY_CAP};
use costbeta_core::FiberedComplex;

fn lipschitz(c: &mut Criterion) {
    let c8 = cycle(8);
    c.bench_function("lip_cost_exact C8 L=4", |b| {
        b.iter(|| lip_cost_exact(black_box(&c8), 4, ExactCaps::default()).unwrap())
    });
    let g = f2_graph(200, 0);
    c.bench_function("lip_cost_heuristic F2(200) L=3", |b| {
        b.iter(|| lip_cost_heuristic(black_box(&g), 3, HeuristicOptions::default()).unwrap())
    });
}

fn homology(c: &mut Criterion) {
    let g = f2_graph(60, 0);
    c.bench_function("rips F2(60) q=2", |b| b.iter(|| rips_complex(black_box(&g), 2, 2).unwrap()));
    let sub = FiberedComplex::new(vec![rips_complex(&g, 1, 2).unwrap()]).unwrap();
    let sup = FiberedComplex::new(vec![rips_complex(&g, 2, 2).unwrap()]).unwrap();
    c.bench_function("nabla F2(60) q=1 -> 2", |b| b.iter(|| nabla(black_box(&sub), &sup, 1).unwrap()));
    let big = f2_graph(200, 0);
    let opts = ElekOptions::default();
    c.bench_function("elek F2(200) q=5", |b| b.iter(|| elek_cell(0, black_box(&big), 5, &opts)));
}

fn spectral(c: &mut Criterion) {
    let x = generate::random_sym_matrix(20, 3, 0);
    c.bench_function("charpoly k=20", |b| {
        b.iter(|| characteristic_polynomial(black_box(&x), CHARPOLY_CAP).unwrap())
    });
}

criterion_group!(benches, lipschitz, homology, spectral);
criterion_main!(benches);
