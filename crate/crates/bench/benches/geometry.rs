use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fhgeom::tensor::metric_tensor_graph_oracle;
use fhgeom::{forward_ball_volume, metric_tensor, ricci, DiffScheme, MetricKind, VolumeMethod};
use fhgeom_bench::{bodies, origin, probe};
use std::hint::black_box;

fn chord(c: &mut Criterion) {
    let mut group = c.benchmark_group("chord");
    for (name, body) in bodies() {
        let tv = probe(&body);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| body.chord(black_box(&tv.x), black_box(&tv.v)).unwrap())
        });
    }
    group.finish();
}

fn tensor(c: &mut Criterion) {
    let mut group = c.benchmark_group("tensor");
    let scheme = DiffScheme::default();
    for (name, body) in bodies() {
        let tv = probe(&body);
        group.bench_function(BenchmarkId::new("vertical", name), |b| {
            b.iter(|| metric_tensor(MetricKind::Funk, &body, black_box(&tv), &scheme).unwrap())
        });
        group.bench_function(BenchmarkId::new("graph", name), |b| {
            b.iter(|| metric_tensor_graph_oracle(MetricKind::Funk, &body, black_box(&tv)).unwrap())
        });
    }
    group.finish();
}

fn curvature(c: &mut Criterion) {
    let mut group = c.benchmark_group("ricci");
    let scheme = DiffScheme::default();
    for (name, body) in bodies() {
        let tv = probe(&body);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| ricci(MetricKind::Hilbert, &body, black_box(&tv), &scheme).unwrap())
        });
    }
    group.finish();
}

fn volume(c: &mut Criterion) {
    let mut group = c.benchmark_group("ball_volume");
    group.sample_size(10);
    for (name, body) in bodies().into_iter().filter(|(_, b)| b.dim() == 2) {
        let x = origin(&body);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                forward_ball_volume(
                    MetricKind::Funk,
                    &body,
                    &x,
                    1.0,
                    VolumeMethod::MonteCarlo,
                    20_000,
                    1,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, chord, tensor, curvature, volume);
criterion_main!(benches);
