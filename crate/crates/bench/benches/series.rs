use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wedgelab::{eta_quotient, unary_theta, DirichletCharacter, EtaSpec};

fn eta(c: &mut Criterion) {
    let mut g = c.benchmark_group("eta_quotient");
    g.sample_size(10);
    for (name, factors) in [("delta", vec![(1, 24)]), ("eta11", vec![(1, 2), (11, 2)]), ("eta4_6", vec![(4, 6)])] {
        let spec = EtaSpec::new(factors).unwrap();
        for prec in [1_000u64, 20_000] {
            g.bench_with_input(BenchmarkId::new(name, prec), &prec, |b, &prec| {
                b.iter(|| eta_quotient(black_box(&spec), prec).unwrap())
            });
        }
    }
    g.finish();
}

fn series_arith(c: &mut Criterion) {
    let spec = EtaSpec::new(vec![(1, 2), (11, 2)]).unwrap();
    let f = eta_quotient(&spec, 2_000).unwrap().normalize_integral().unwrap();
    c.bench_function("qseries_mul_2000", |b| b.iter(|| black_box(&f).mul(&f)));
    let psi = DirichletCharacter::kronecker_character(-4).unwrap();
    c.bench_function("unary_theta_1e6", |b| b.iter(|| unary_theta(&psi, 1, 1, black_box(1_000_000)).unwrap()));
}

criterion_group!(benches, eta, series_arith);
criterion_main!(benches);
