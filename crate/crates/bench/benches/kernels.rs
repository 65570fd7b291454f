//! Microbenchmarks for the numerical kernels on the optimizer's hot path.

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use trispin_core::grape::propagate_pulse;
use trispin_core::hamiltonian::{drift_for, NuclearConfig};
use trispin_core::linalg::{hermitian_eigensystem, propagator, CMat};
use trispin_core::placement::{exchange_distribution, Axis, ExchangeModelParams};
use trispin_core::scheduler::{greedy_parallel_sets, OverlapGraph};
use trispin_core::{DeviceParams, HermitianOperator, PulseSequence};

fn seeded_hermitian(dim: usize, seed: u64) -> HermitianOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = CMat::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    HermitianOperator::new((&raw + raw.adjoint()) * Complex64::new(0.5, 0.0)).unwrap()
}

fn gate_drift() -> HermitianOperator {
    let params = DeviceParams::default().with_exchange(20.0, 5.0);
    drift_for(&params, &NuclearConfig::post_swap()).unwrap()
}

fn seeded_pulse(n_carriers: usize, n_segments: usize, seed: u64) -> PulseSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = |hi: f64| {
        (0..n_carriers)
            .map(|_| (0..n_segments).map(|_| rng.random_range(0.0..hi)).collect())
            .collect()
    };
    let amplitudes = sample(5.0);
    let phases = sample(std::f64::consts::TAU);
    let carriers_mhz = (0..n_carriers).map(|k| 30.0 + 10.0 * k as f64).collect();
    PulseSequence { carriers_mhz, segment_duration_us: 0.02, amplitudes, phases }
}

fn bench_eigensystem(c: &mut Criterion) {
    let h = seeded_hermitian(8, 1);
    c.bench_function("hermitian_eigensystem_8x8", |b| {
        b.iter(|| hermitian_eigensystem(black_box(&h)))
    });
}

fn bench_propagator(c: &mut Criterion) {
    let drift = gate_drift();
    c.bench_function("propagator_8x8", |b| b.iter(|| propagator(black_box(&drift), 1.0).unwrap()));
}

fn bench_pulse_propagation(c: &mut Criterion) {
    let drift = gate_drift();
    let pulse = seeded_pulse(13, 100, 2);
    c.bench_function("propagate_pulse_13x100x20", |b| {
        b.iter(|| propagate_pulse(black_box(&pulse), &drift, 20).unwrap())
    });
}

fn bench_exchange_distribution(c: &mut Criterion) {
    let model = ExchangeModelParams::strained(Axis::Axis100);
    c.bench_function("exchange_distribution_15", |b| {
        b.iter(|| exchange_distribution(black_box(14.0), &model).unwrap())
    });
}

fn bench_greedy_schedule(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut graph = OverlapGraph::empty(225);
    for i in 0..225 {
        for j in (i + 1)..225 {
            if rng.random_bool(0.3) {
                graph.add_edge(i, j).unwrap();
            }
        }
    }
    c.bench_function("greedy_parallel_sets_225", |b| {
        b.iter(|| greedy_parallel_sets(black_box(&graph), 7))
    });
}

criterion_group!(
    benches,
    bench_eigensystem,
    bench_propagator,
    bench_pulse_propagation,
    bench_exchange_distribution,
    bench_greedy_schedule
);
criterion_main!(benches);
