//! Acceptance suite: the eight exit criteria, one test (and one printed
//! pass/fail line) per criterion. Run with `--nocapture` to see the lines.
//!
//! The full-scale ensembles (n = 1e5 uses, N = 1e4 trials, fixed seed) are
//! computed once and shared across criteria; expect a couple of minutes of
//! compute on a laptop.

use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use memchan_core::capacity::{
    apply_degrading, bsc_capacity, degrading_coefficient, dmc_capacity_blahut_arimoto,
    erasure_private_capacity, erasure_quantum_capacity, mixture_classical_dmc, PortDistribution,
    BA_DEFAULT_TOLERANCE,
};
use memchan_core::markov::{
    block_delivery_bound, drift, hoeffding_exceedance_bound, l1_distance, power_iteration,
    stationary_distribution, success_probability, Mod3Chain,
};
use memchan_core::montecarlo::{run_ensemble, trajectory_seed, SimulationConfig};
use memchan_core::{AggregateStats, ChannelKind, ChannelSpec};

const USES: u64 = 100_000;
const TRIALS: u64 = 10_000;
const EXPERIMENT_SEED: u64 = 42;

/// Reference parameters: p_b = 0.9 + eps, p_c = 0.25 + eps, eps = 0.01.
const P_B: f64 = 0.91;
const P_C: f64 = 0.26;

fn role_seed(role: u64) -> u64 {
    // same derivation the CLI applies to its experiment seed
    trajectory_seed(EXPERIMENT_SEED, role)
}

fn ensemble(spec: ChannelSpec, uses: u64, base_seed: u64) -> AggregateStats {
    let config = SimulationConfig::new(spec, uses, TRIALS, base_seed);
    run_ensemble(&config).unwrap().stats
}

/// The three full-scale ensembles, computed once.
fn shared() -> &'static [AggregateStats; 3] {
    static SHARED: OnceLock<[AggregateStats; 3]> = OnceLock::new();
    SHARED.get_or_init(|| {
        [
            ensemble(ChannelSpec::new(ChannelKind::A), USES, role_seed(0)),
            ensemble(ChannelSpec::new(ChannelKind::B), USES, role_seed(1)),
            ensemble(ChannelSpec::new(ChannelKind::CLambda), USES, role_seed(2)),
        ]
    })
}

fn chain_b() -> Mod3Chain {
    Mod3Chain::for_channel_b(P_B, P_C).unwrap()
}

fn chain_c() -> Mod3Chain {
    Mod3Chain::for_mixture(0.5, 0.5, P_B, P_C).unwrap()
}

#[test]
fn criterion_1_stationary_distributions() {
    let start = Instant::now();

    let pi_b = stationary_distribution(&chain_b());
    assert!(
        (pi_b.pi0 - 0.38261).abs() <= 1e-4,
        "pi0 of the gated chain: {}",
        pi_b.pi0
    );
    let pi_c = stationary_distribution(&chain_c());
    assert!(
        (pi_c.pi0 - 0.3451).abs() <= 1e-3,
        "pi0 of the mixture chain: {}",
        pi_c.pi0
    );

    // independent oracle: long power iteration from every vertex
    for (chain, pi) in [(chain_b(), pi_b), (chain_c(), pi_c)] {
        for vertex in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
            let iterated = power_iteration(&chain, vertex, 100_000);
            let dist = l1_distance(&iterated, &pi.as_array()).unwrap();
            assert!(dist <= 1e-8, "power iteration disagrees by {dist}");
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 2.0, "analytic layer too slow: {elapsed:?}");
    println!(
        "criterion 1 (stationary distributions, solver vs power iteration): PASS \
         [pi0_b = {:.5}, pi0_c = {:.5}, {elapsed:?}]",
        pi_b.pi0, pi_c.pi0
    );
}

#[test]
fn criterion_2_success_probabilities_and_drifts() {
    let pi_b = stationary_distribution(&chain_b());
    let p_b = success_probability(&pi_b, &chain_b());
    let walk_b = drift(p_b);
    assert!((p_b - 0.49131).abs() <= 1e-5, "p_b = {p_b}");
    assert!((walk_b.alpha - 0.00869).abs() <= 1e-5, "alpha_b = {}", walk_b.alpha);
    // the published walk bias, rounded to one digit, matches this alpha
    assert!((walk_b.alpha - 0.009).abs() <= 5e-4);

    let pi_c = stationary_distribution(&chain_c());
    let p_c = success_probability(&pi_c, &chain_c());
    let walk_c = drift(p_c);
    assert!((p_c - 0.50785).abs() <= 1e-5, "p_c = {p_c}");
    assert!((walk_c.alpha - 0.0078).abs() <= 5e-4, "alpha_c = {}", walk_c.alpha);

    let [stats_a, stats_b, stats_c] = shared();
    for (label, stats, analytic) in [
        ("a", stats_a, 0.0),
        ("b", stats_b, walk_b.drift_per_step),
        ("c", stats_c, walk_c.drift_per_step),
    ] {
        let diff = (stats.empirical_drift_per_step - analytic).abs();
        assert!(
            diff <= 3.0 * stats.drift_stderr,
            "role {label}: drift {} vs analytic {analytic} (3 se = {})",
            stats.empirical_drift_per_step,
            3.0 * stats.drift_stderr
        );
    }
    println!(
        "criterion 2 (success probabilities and drifts, analytic and Monte Carlo): PASS \
         [p_b = {p_b:.5}, p_c = {p_c:.5}, mc drifts ({:+.6}, {:+.6}, {:+.6})]",
        stats_a.empirical_drift_per_step,
        stats_b.empirical_drift_per_step,
        stats_c.empirical_drift_per_step
    );
}

#[test]
fn criterion_3_parrondo_reversal() {
    let [stats_a, stats_b, stats_c] = shared();
    let verdict =
        memchan_core::montecarlo::parrondo_verdict(stats_a, stats_b, stats_c).unwrap();
    assert!(
        verdict.drift_a.estimate.abs() <= 3.0 * verdict.drift_a.stderr,
        "fair channel drifts: {:?}",
        verdict.drift_a
    );
    assert!(
        verdict.drift_b.estimate + 3.0 * verdict.drift_b.stderr < 0.0,
        "gated channel does not lose: {:?}",
        verdict.drift_b
    );
    assert!(
        verdict.drift_c.estimate - 3.0 * verdict.drift_c.stderr > 0.0,
        "mixture does not win: {:?}",
        verdict.drift_c
    );
    assert!(verdict.individually_useless && verdict.jointly_winning);
    println!("criterion 3 (drift reversal 0/-/+ at 3 se): PASS [{verdict:?}]");
}

#[test]
fn criterion_4_bound_validity() {
    let pi = stationary_distribution(&chain_b());
    let alpha = drift(success_probability(&pi, &chain_b())).alpha;

    for n in [1_000u64, 10_000, 100_000] {
        for m0 in [10i64, 100] {
            let stats = if n == USES && m0 == 100 {
                shared()[1].clone()
            } else {
                let mut spec = ChannelSpec::new(ChannelKind::B);
                spec.m0 = m0;
                ensemble(spec, n, role_seed(1))
            };

            let bound = hoeffding_exceedance_bound(n, m0, alpha);
            let rate = stats.exceedance_rate;
            let se = (rate * (1.0 - rate) / TRIALS as f64).sqrt();
            assert!(
                rate <= bound + 3.0 * se,
                "exceedance at (n = {n}, m0 = {m0}): {rate} > bound {bound}"
            );

            let last = *stats.delivered_by_position.last().unwrap() as f64 / TRIALS as f64;
            let last_se = (last * (1.0 - last) / TRIALS as f64).sqrt();
            let block = block_delivery_bound(n, alpha);
            assert!(
                last <= block + 3.0 * last_se,
                "block delivery at (n = {n}, m0 = {m0}): {last} > bound {block}"
            );
        }
    }
    println!(
        "criterion 4 (tail and block bounds hold on the (n, m0) grid at 3 se): PASS"
    );
}

#[test]
fn criterion_5_degrading_map_identity() {
    // 501-point grid over the anti-degradable regime
    for i in 0..=500u32 {
        let r = i as f64 / 1000.0;
        let t = degrading_coefficient(r).unwrap();
        let eve = PortDistribution::new(1.0 - r).unwrap();
        let degraded = apply_degrading(eve, t);
        assert!(
            (degraded.delivered - r).abs() <= 1e-12,
            "degrading identity broke at r = {r}: {}",
            degraded.delivered
        );
    }
    // and it must not exist anywhere above one half
    for i in 1..=500u32 {
        let r = 0.5 + i as f64 / 1000.0;
        assert!(
            degrading_coefficient(r).is_err(),
            "degrading map should not exist at r = {r}"
        );
    }
    assert!(degrading_coefficient(0.5 + 1e-12).is_err());
    println!("criterion 5 (degrading map identity to 1e-12; fails exactly for r > 0.5): PASS");
}

#[test]
fn criterion_6_effective_capacities() {
    let [_, stats_b, stats_c] = shared();

    let late_c = stats_c.delivery_rate_by_window.last().unwrap();
    let s = 1.0 - late_c.rate;
    assert!(
        s > 0.49 && s < 0.495,
        "late-window effective erasure of the mixture: {s}"
    );
    let quantum = erasure_quantum_capacity(s);
    let private = erasure_private_capacity(s);
    assert!((quantum - 0.0157).abs() <= 0.003, "quantum capacity {quantum}");
    assert_eq!(quantum, private);

    // the mixture's late delivery also respects its analytic lower bound
    let pi_c = stationary_distribution(&chain_c());
    let walk_c = drift(success_probability(&pi_c, &chain_c()));
    let lower = memchan_core::markov::mixture_delivery_lower_bound(
        late_c.start,
        100,
        walk_c.alpha,
        walk_c.p_success,
    );
    assert!(
        late_c.rate >= lower - 3.0 * late_c.stderr,
        "mixture late delivery {} under its lower bound {lower}",
        late_c.rate
    );

    // the gated channel's late delivery sits under a bound that vanishes
    let pi = stationary_distribution(&chain_b());
    let alpha = drift(success_probability(&pi, &chain_b())).alpha;
    let late_b = stats_b.delivery_rate_by_window.last().unwrap();
    let bound = block_delivery_bound(late_b.start, alpha);
    assert!(
        late_b.rate < bound,
        "gated late delivery {} vs vanishing bound {bound}",
        late_b.rate
    );
    println!(
        "criterion 6 (effective capacities): PASS \
         [s_c = {s:.5}, Q = P = {quantum:.5}; gated late delivery {} < {bound:.3e}]",
        late_b.rate
    );
}

#[test]
fn criterion_7_classical_track() {
    assert_eq!(bsc_capacity(0.5), 0.0, "fair bit flip must have capacity exactly 0");

    let pi = stationary_distribution(&chain_c());
    let dmc = mixture_classical_dmc(0.5, &pi, P_B, P_C).unwrap();
    let estimate = dmc_capacity_blahut_arimoto(&dmc, BA_DEFAULT_TOLERANCE).unwrap();
    assert!(estimate.bits > 0.0);

    // independent oracle: uniform-input mutual information from entropies,
    // valid by the flip symmetry of the rows
    let h = |x: f64| if x == 0.0 { 0.0 } else { -x * x.log2() };
    let row = &dmc.rows[0];
    let (same, flip, erase) = (row[0], row[1], row[2]);
    let y = (same + flip) / 2.0;
    let closed_form = (2.0 * h(y) + h(erase)) - (h(same) + h(flip) + h(erase));

    assert!(
        (estimate.bits - closed_form).abs() <= 1e-6,
        "solver {} vs uniform-input closed form {closed_form}",
        estimate.bits
    );
    assert!((estimate.bits - 0.064566439640795).abs() <= 1e-6);
    println!(
        "criterion 7 (classical track: flat at 0.5, solver positive and certified): PASS \
         [capacity = {:.6} bits]",
        estimate.bits
    );
}

#[test]
fn criterion_8_reproducibility() {
    let base = std::env::temp_dir().join(format!("memchan-acceptance-{}", std::process::id()));
    let run = |dir: &PathBuf, threads: &str| {
        if dir.exists() {
            fs::remove_dir_all(dir).unwrap();
        }
        let output = Command::new(env!("CARGO_BIN_EXE_memchan"))
            .args([
                "simulate",
                "--trials",
                "50",
                "--uses",
                "200",
                "--seed",
                "7",
                "--record",
                "--out",
                dir.to_str().unwrap(),
            ])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .expect("binary runs");
        assert!(output.status.success(), "{output:?}");
        let mut artifacts = Vec::new();
        for role in ["a", "b", "c"] {
            artifacts.push(fs::read(dir.join(format!("stats_{role}.json"))).unwrap());
            artifacts.push(fs::read(dir.join(format!("trajectories_{role}.csv"))).unwrap());
        }
        artifacts
    };

    let first = run(&base.join("run1"), "1");
    let second = run(&base.join("run2"), "1");
    let third = run(&base.join("run3"), "2");
    let fourth = run(&base.join("run4"), "4");
    assert_eq!(first, second, "reruns differ");
    assert_eq!(first, third, "worker count changed the outputs");
    assert_eq!(first, fourth, "worker count changed the outputs");
    println!(
        "criterion 8 (byte-identical outputs across reruns and worker counts): PASS"
    );
}
