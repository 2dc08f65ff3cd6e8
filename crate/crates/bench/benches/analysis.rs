//! Closed-form layer: stationary solve and the capacity solver.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use memchan_core::capacity::{
    dmc_capacity_blahut_arimoto, mixture_classical_dmc, DmcMatrix, BA_DEFAULT_TOLERANCE,
};
use memchan_core::markov::{power_iteration, stationary_distribution, Mod3Chain};

fn bench_stationary(c: &mut Criterion) {
    let chain = Mod3Chain::for_channel_b(0.91, 0.26).unwrap();
    c.bench_function("stationary_solve", |b| {
        b.iter(|| black_box(stationary_distribution(&chain).pi0))
    });
    c.bench_function("power_iteration_1k", |b| {
        b.iter(|| black_box(power_iteration(&chain, [1.0, 0.0, 0.0], 1_000)))
    });
}

fn bench_capacity(c: &mut Criterion) {
    let chain = Mod3Chain::for_mixture(0.5, 0.5, 0.91, 0.26).unwrap();
    let pi = stationary_distribution(&chain);
    let mixture = mixture_classical_dmc(0.5, &pi, 0.91, 0.26).unwrap();
    c.bench_function("blahut_arimoto_mixture", |b| {
        b.iter(|| {
            black_box(
                dmc_capacity_blahut_arimoto(&mixture, BA_DEFAULT_TOLERANCE)
                    .unwrap()
                    .bits,
            )
        })
    });

    // asymmetric channel: the solver has to move the input distribution
    let z = DmcMatrix::new(
        vec!["0".into(), "1".into()],
        vec![vec![1.0, 0.0], vec![0.5, 0.5]],
    )
    .unwrap();
    c.bench_function("blahut_arimoto_z_channel", |b| {
        b.iter(|| black_box(dmc_capacity_blahut_arimoto(&z, 1e-10).unwrap().bits))
    });
}

criterion_group!(benches, bench_stationary, bench_capacity);
criterion_main!(benches);
