//! Parallel vs sequential sweep throughput.
//!
//! Run with `cargo bench -p redlin-core`; disable the rayon path entirely with
//! `--no-default-features` to confirm the fallback compiles to the same rows.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use redlin_core::bath::BathParams;
use redlin_core::integrals::QuadratureConfig;
use redlin_core::kernels::Model;
use redlin_core::sweep::{run_sweep, run_sweep_seq, SweepRequest};

fn request(points: usize) -> SweepRequest {
    SweepRequest {
        omega0_values: SweepRequest::linear_grid(1.0, 40.0, points),
        models: vec![Model::Redfield, Model::Lindblad],
        f1: 1.0,
        f2: 1.0,
        bath: BathParams::new(1.0, 1.0, 100.0, 10.0).unwrap(),
        quadrature: QuadratureConfig::default(),
    }
}

fn bench_sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("steady_state_sweep");
    group.sample_size(10);
    for points in [8, 32] {
        let req = request(points);
        group.bench_with_input(BenchmarkId::new("sequential", points), &req, |b, req| {
            b.iter(|| black_box(run_sweep_seq(req)))
        });
        group.bench_with_input(BenchmarkId::new("default", points), &req, |b, req| {
            b.iter(|| black_box(run_sweep(req)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sweeps);
criterion_main!(benches);
