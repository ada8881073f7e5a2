use std::hint::black_box;

use criterion::{BenchmarkId, Criterion, Throughput};
use recur_core::{
    cross_check, lr_constant_estimate, max_fractional_power, occurrences, rate_series, rotation_source, CfExpansion,
    GeneratedWord, Preset, QuadraticReal, RotationSpec, WindowPolicy,
};

fn occurrence_scan(c: &mut Criterion) {
    let x = Preset::Fibonacci.generate(1_000_000).unwrap().prefix;
    let mut group = c.benchmark_group("occurrences");
    group.throughput(Throughput::Bytes(x.len() as u64));
    for len in [1usize, 10, 100, 1_000] {
        group.bench_with_input(BenchmarkId::from_parameter(len), &len, |b, &len| {
            b.iter(|| occurrences(black_box(&x[..len]), black_box(&x)).unwrap().positions.len())
        });
    }
    group.finish();
}

fn rates(c: &mut Criterion) {
    let mut group = c.benchmark_group("rate_series");
    group.sample_size(10);
    for p in [Preset::Fibonacci, Preset::ThueMorse] {
        let x = p.generate(100_000).unwrap();
        group.bench_function(p.name(), |b| {
            b.iter(|| rate_series(black_box(&x), 200, &WindowPolicy::default()).unwrap())
        });
    }
    group.finish();
}

fn powers(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_fractional_power");
    group.sample_size(10);
    for window in [512usize, 1_024, 4_096] {
        let x = Preset::ThueMorse.generate(window).unwrap().prefix;
        group.bench_with_input(BenchmarkId::from_parameter(window), &x, |b, x| {
            b.iter(|| max_fractional_power(black_box(x)))
        });
    }
    group.finish();
}

fn lr(c: &mut Criterion) {
    let x = Preset::Fibonacci.generate(20_000).unwrap();
    let mut group = c.benchmark_group("lr_constant_estimate");
    group.sample_size(10);
    group.bench_function("fibonacci L=50", |b| {
        b.iter(|| lr_constant_estimate(black_box(&x), 50, 20_000).unwrap())
    });
    group.finish();
}

fn geometry(c: &mut Criterion) {
    let mut group = c.benchmark_group("cross_check");
    group.sample_size(10);
    for cf in [CfExpansion::golden(), CfExpansion::silver()] {
        let spec = RotationSpec::from_cf(&cf).unwrap();
        let x = GeneratedWord::from_source(rotation_source(&cf, QuadraticReal::zero()).unwrap(), 100_000).unwrap();
        group.bench_function(cf.to_string(), |b| {
            b.iter(|| cross_check(&spec, black_box(&x), 100, &WindowPolicy::default()).unwrap())
        });
    }
    group.finish();
}

pub fn benchmarks(c: &mut Criterion) {
    occurrence_scan(c);
    rates(c);
    powers(c);
    lr(c);
    geometry(c);
}
