use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use matrod::kron::{kron_explicit, kron_recurrence, Recurrence};
use matrod::moments::moments_from_pearson_data;
use matrod::pearson::FormChoice;
use matrod::rodrigues::{build_q, verify_family, VerifyConfig};
use matrod_bench::family;

fn kron(c: &mut Criterion) {
    let phi = family("ball").original().phi().clone();
    let mut g = c.benchmark_group("kron_power");
    for n in [4u32, 8, 12] {
        g.bench_with_input(BenchmarkId::new("explicit", n), &n, |b, &n| {
            b.iter(|| kron_explicit(black_box(&phi), n))
        });
        g.bench_with_input(BenchmarkId::new("recurrence_i", n), &n, |b, &n| {
            b.iter(|| kron_recurrence(black_box(&phi), n, Recurrence::I))
        });
        g.bench_with_input(BenchmarkId::new("recurrence_ii", n), &n, |b, &n| {
            b.iter(|| kron_recurrence(black_box(&phi), n, Recurrence::II))
        });
    }
    g.finish();
}

fn rodrigues(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_q");
    for name in ["krall-sheffer-intriguing", "ball", "simplex"] {
        let f = family(name);
        g.bench_function(BenchmarkId::new(name, 6), |b| {
            b.iter(|| build_q(black_box(&f), 6, FormChoice::Auto))
        });
    }
    g.finish();
}

fn moments(c: &mut Criterion) {
    let f = family("simplex");
    let d = f.original();
    c.bench_function("moments_from_pearson/simplex/cap16", |b| {
        b.iter(|| moments_from_pearson_data(black_box(d.phi()), d.psi(), 16))
    });
}

fn verify(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_family");
    g.sample_size(10);
    for name in ["krall-sheffer-intriguing", "tensor-hermite-hermite"] {
        let f = family(name);
        g.bench_function(BenchmarkId::new(name, 4), |b| {
            b.iter(|| verify_family(black_box(&f), &VerifyConfig::new(4)))
        });
    }
    g.finish();
}

criterion_group!(benches, kron, rodrigues, moments, verify);
criterion_main!(benches);
