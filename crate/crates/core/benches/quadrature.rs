use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use greenball::almost_periodic::{almost_period_defect, LatticeBox};
use greenball::distributional::{mollify, Mollifier};
use greenball::fields::TrigPolynomial;
use greenball::par;
use greenball::representation::{eval_u_ball, lemma_lim_volume, RepresentationConfig};
use greenball::Dimension;

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", true), ("sequential", false)]
}

fn bench(c: &mut Criterion) {
    let n = Dimension::new(3).unwrap();
    let f = TrigPolynomial::cosine(n, 1.0, &[1.0, 0.5, 0.0]).unwrap();
    let u = f.exact_poisson_inverse().unwrap();
    let cfg = RepresentationConfig::default();
    let bx = LatticeBox::new(n, 10.0, 61).unwrap();
    let smoothed = mollify(&u, &Mollifier::new(n, 0.1).unwrap(), 8).unwrap();

    let mut group = c.benchmark_group("greenball");
    group.sample_size(10);
    for (name, on) in modes() {
        par::set_parallel(on);
        group.bench_with_input(BenchmarkId::new("eval_u_ball", name), &on, |b, _| {
            b.iter(|| eval_u_ball(&u, &f, black_box(&[0.3, -0.2, 0.1]), &cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("lemma_lim_volume", name), &on, |b, _| {
            b.iter(|| lemma_lim_volume(black_box(0.0625), 0, n, 8).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("mollify", name), &on, |b, _| {
            b.iter(|| smoothed.eval_parallel(black_box(&[0.4, 1.0, -2.0])))
        });
        group.bench_with_input(BenchmarkId::new("lattice_defect", name), &on, |b, _| {
            b.iter(|| almost_period_defect(&u, black_box(&[6.3, 0.0, 0.0]), &bx).unwrap())
        });
    }
    par::set_parallel(true);
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
