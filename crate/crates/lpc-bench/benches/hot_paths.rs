//! Benchmarks for the numeric hot paths: interval series evaluation,
//! membership classification, winding counts, and exact Sturm counting.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use lpc_core::certificates::{rho, winding_zero_count};
use lpc_core::membership::classify;
use lpc_core::realroot::{count_real_roots, RatPoly};
use lpc_core::series::SeriesEvaluator;
use lpc_core::{QuotientSpec, RigorousValue};
use num_bigint::BigInt;
use num_rational::BigRational;

fn spec45() -> QuotientSpec {
    QuotientSpec::from_f64(4.0, 5.0).unwrap()
}

fn bench_eval_phi(c: &mut Criterion) {
    let spec = spec45();
    let x_rat = BigRational::new(BigInt::from(5), BigInt::from(2));
    for prec in [128u32, 256] {
        let ev = SeriesEvaluator::new(&spec, prec).unwrap();
        let x = RigorousValue::from_rational_bounds(&x_rat, &x_rat, prec);
        c.bench_function(&format!("eval_phi/{prec}"), |b| {
            b.iter(|| ev.eval_phi(black_box(&x)).unwrap());
        });
    }
}

fn bench_classify(c: &mut Criterion) {
    let member = spec45();
    // Rejected by the exact linear gate before any interval work happens.
    let gated = QuotientSpec::from_f64(2.5, 3.5).unwrap();
    c.bench_function("classify/member_4_5", |b| {
        b.iter(|| classify(black_box(&member), &[128], 256).unwrap());
    });
    c.bench_function("classify/gated_2.5_3.5", |b| {
        b.iter(|| classify(black_box(&gated), &[128], 256).unwrap());
    });
}

fn bench_winding(c: &mut Criterion) {
    let spec = spec45();
    let radius = rho(&spec, 2, 128).unwrap();
    c.bench_function("winding/j2", |b| {
        b.iter(|| winding_zero_count(black_box(&spec), &radius, 128, 1 << 14).unwrap());
    });
}

fn bench_sturm(c: &mut Criterion) {
    let mut p = RatPoly::from_i64(&[1]);
    for k in 1..=10i64 {
        p = p.mul(&RatPoly::from_i64(&[-k, 1]));
    }
    c.bench_function("sturm/deg10_all_real", |b| {
        b.iter(|| count_real_roots(black_box(&p)).unwrap());
    });
}

criterion_group! {
    name = fast;
    config = Criterion::default();
    targets = bench_eval_phi, bench_sturm
}

criterion_group! {
    name = heavy;
    config = Criterion::default().sample_size(20);
    targets = bench_classify, bench_winding
}

criterion_main!(fast, heavy);
