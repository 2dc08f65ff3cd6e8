//! Property tests for the step functions, the analytic layer, and the
//! capacity solver.

use memchan_core::capacity::{
    apply_degrading, degrading_coefficient, dmc_capacity_blahut_arimoto, mutual_information,
    DmcMatrix, PortDistribution,
};
use memchan_core::channel::{
    channel_a_step, channel_b_step, channel_c_step, channel_p_step, channel_t_gate,
    classical_a_step, classical_b_step, classical_c_step, erasure_step, MemoryRegister,
    PortOutcome,
};
use memchan_core::markov::{
    drift, hoeffding_exceedance_bound, l1_distance, mixture_delivery_lower_bound,
    mixture_success_probs, stationary_distribution, tv_distance, Mod3Chain,
};
use proptest::prelude::*;

fn prob() -> impl Strategy<Value = f64> {
    0.0f64..=1.0
}

fn draw() -> impl Strategy<Value = f64> {
    0.0f64..1.0
}

fn mem_value() -> impl Strategy<Value = i64> {
    -1_000_000i64..=1_000_000
}

proptest! {
    #[test]
    fn erasure_step_follows_the_threshold_convention(p in prob(), u in draw()) {
        let outcome = erasure_step(p, u).unwrap();
        prop_assert_eq!(outcome == PortOutcome::Erased, u < p);
    }

    #[test]
    fn memory_moves_by_exactly_one(
        m in mem_value(),
        m0 in -50i64..=50,
        lambda in prob(),
        u in draw(),
        u2 in draw(),
    ) {
        let mem = MemoryRegister::new(m);
        for delta in [
            channel_a_step(mem, 0.5, u).memory_after.value() - m,
            channel_p_step(mem, 0.91, 0.26, u).memory_after.value() - m,
            channel_b_step(mem, m0, 0.91, 0.26, u).memory_after.value() - m,
            channel_c_step(mem, m0, lambda, 0.5, 0.91, 0.26, u, u2).memory_after.value() - m,
            classical_a_step(0, mem, 0.5, u).memory_after.value() - m,
            classical_b_step(1, mem, m0, 0.91, 0.26, u).memory_after.value() - m,
            classical_c_step(0, mem, m0, lambda, 0.5, 0.91, 0.26, u, u2).memory_after.value() - m,
        ] {
            prop_assert_eq!(delta.abs(), 1);
        }
    }

    #[test]
    fn gate_never_touches_memory_and_is_absorbing(
        m in mem_value(),
        m0 in -100i64..=100,
    ) {
        let mem = MemoryRegister::new(m);
        let through = channel_t_gate(mem, m0, PortOutcome::Delivered);
        prop_assert_eq!(through == PortOutcome::Delivered, m > m0);
        prop_assert_eq!(channel_t_gate(mem, m0, PortOutcome::Erased), PortOutcome::Erased);
    }

    #[test]
    fn degenerate_mixture_matches_pure_channels(
        m in mem_value(),
        m0 in -50i64..=50,
        u_route in draw(),
        u in draw(),
    ) {
        let mem = MemoryRegister::new(m);
        let pure_a = channel_a_step(mem, 0.5, u);
        let as_mixture = channel_c_step(mem, m0, 1.0, 0.5, 0.91, 0.26, u_route, u);
        prop_assert_eq!(pure_a.outcome, as_mixture.outcome);
        prop_assert_eq!(pure_a.memory_after, as_mixture.memory_after);

        let pure_b = channel_b_step(mem, m0, 0.91, 0.26, u);
        let as_mixture = channel_c_step(mem, m0, 0.0, 0.5, 0.91, 0.26, u_route, u);
        prop_assert_eq!(pure_b.outcome, as_mixture.outcome);
        prop_assert_eq!(pure_b.memory_after, as_mixture.memory_after);
        prop_assert_eq!(pure_b.gate_open, as_mixture.gate_open);
    }

    #[test]
    fn classical_steps_are_oblivious_to_the_bit(
        m in mem_value(),
        m0 in -50i64..=50,
        lambda in prob(),
        u_route in draw(),
        u in draw(),
    ) {
        let mem = MemoryRegister::new(m);
        let r0 = classical_c_step(0, mem, m0, lambda, 0.5, 0.91, 0.26, u_route, u);
        let r1 = classical_c_step(1, mem, m0, lambda, 0.5, 0.91, 0.26, u_route, u);
        prop_assert_eq!(r0.memory_after, r1.memory_after);
        prop_assert_eq!(r0.branch_taken, r1.branch_taken);
        prop_assert_eq!(r0.outcome.is_erased(), r1.outcome.is_erased());
    }

    #[test]
    fn drift_is_antisymmetric(p in prob()) {
        let w = drift(p);
        let m = drift(1.0 - p);
        prop_assert!((w.drift_per_step + m.drift_per_step).abs() < 1e-15);
        prop_assert!((w.alpha - m.alpha).abs() < 1e-15);
        prop_assert!((w.drift_per_step - (2.0 * p - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn bounds_stay_in_the_unit_interval(
        n in 1u64..=1_000_000,
        m0 in 0i64..=10_000,
        alpha in 0.0f64..=0.5,
        p in prob(),
    ) {
        let h = hoeffding_exceedance_bound(n, m0, alpha);
        prop_assert!((0.0..=1.0).contains(&h));
        let lower = mixture_delivery_lower_bound(n, m0, alpha, p);
        prop_assert!((0.0..=1.0).contains(&lower));
        prop_assert!(lower <= p + 1e-15);
    }

    #[test]
    fn stationary_solve_is_a_normalized_fixed_point(s0 in prob(), s in prob()) {
        let chain = Mod3Chain::new(s0, s).unwrap();
        let pi = stationary_distribution(&chain);
        let arr = pi.as_array();
        prop_assert!(arr.iter().all(|&p| (0.0..=1.0).contains(&p)));
        prop_assert!((arr.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let stepped = chain.step(&arr);
        prop_assert!(l1_distance(&stepped, &arr).unwrap() < 1e-10);
    }

    #[test]
    fn mixture_success_probs_interpolate(lambda in prob(), pa in prob(), pb in prob(), pc in prob()) {
        let (r_b, r_c) = mixture_success_probs(lambda, pa, pb, pc).unwrap();
        prop_assert!((0.0..=1.0).contains(&r_b));
        prop_assert!((0.0..=1.0).contains(&r_c));
        // both routes share the fair component, so the spread comes from p_b vs p_c
        prop_assert!((r_c - r_b - (1.0 - lambda) * (pb - pc)).abs() < 1e-12);
    }

    #[test]
    fn distances_are_metrics_on_distributions(
        a in proptest::collection::vec(0.0f64..=1.0, 3),
        b in proptest::collection::vec(0.0f64..=1.0, 3),
    ) {
        let l1 = l1_distance(&a, &b).unwrap();
        prop_assert!(l1 >= 0.0);
        prop_assert!((tv_distance(&a, &b).unwrap() - l1 / 2.0).abs() < 1e-15);
        prop_assert!((l1_distance(&b, &a).unwrap() - l1).abs() < 1e-15);
        prop_assert_eq!(l1_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn degrading_identity_holds_below_one_half(r in 0.0f64..=0.5) {
        let t = degrading_coefficient(r).unwrap();
        prop_assert!((0.0..=1.0).contains(&t));
        let eve = PortDistribution::new(1.0 - r).unwrap();
        let degraded = apply_degrading(eve, t);
        prop_assert!((degraded.delivered - r).abs() < 1e-12);
        prop_assert!((degraded.delivered + degraded.erased - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degrading_map_does_not_exist_above_one_half(r in 0.5f64..=1.0) {
        prop_assume!(r > 0.5);
        prop_assert!(degrading_coefficient(r).is_err());
    }

    #[test]
    fn capacity_vanishes_exactly_in_the_antidegradable_regime(s in prob()) {
        use memchan_core::capacity::{
            coherent_information_effective_erasure, erasure_quantum_capacity,
        };
        let zero_capacity = erasure_quantum_capacity(s) == 0.0;
        let antidegradable = degrading_coefficient(1.0 - s).is_ok();
        let nonpositive_info = coherent_information_effective_erasure(s, 1.0) <= 0.0;
        prop_assert_eq!(zero_capacity, antidegradable);
        prop_assert_eq!(zero_capacity, nonpositive_info);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ensemble_stats_invariants(
        kind_idx in 0usize..4,
        uses in 0u64..120,
        trials in 1u64..12,
        seed in any::<u64>(),
        m0 in -20i64..=20,
    ) {
        use memchan_core::channel::{ChannelKind, ChannelSpec};
        use memchan_core::montecarlo::{run_ensemble, SimulationConfig};

        let kinds = [
            ChannelKind::A,
            ChannelKind::B,
            ChannelKind::CLambda,
            ChannelKind::ClassicalC,
        ];
        let mut spec = ChannelSpec::new(kinds[kind_idx]);
        spec.m0 = m0;
        let stats = run_ensemble(&SimulationConfig::new(spec, uses, trials, seed))
            .unwrap()
            .stats;

        prop_assert!((stats.residue_occupancy.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        for k in 0..3 {
            prop_assert!((0.0..=1.0).contains(&stats.residue_occupancy[k]));
            prop_assert!(stats.residue_occupancy_stderr[k] >= 0.0);
        }
        prop_assert!((0.0..=1.0).contains(&stats.overall_delivery_rate));
        prop_assert!((0.0..=1.0).contains(&stats.exceedance_rate));
        prop_assert!(stats.final_memory_stderr >= 0.0);
        prop_assert!(stats.drift_stderr >= 0.0);
        prop_assert!(stats.empirical_drift_per_step.abs() <= 1.0);
        let mut covered = 0;
        for w in &stats.delivery_rate_by_window {
            prop_assert!((0.0..=1.0).contains(&w.rate));
            prop_assert!(w.stderr >= 0.0);
            covered += w.end - w.start;
        }
        prop_assert_eq!(covered, uses);
    }
}

fn stochastic_row(len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.01f64..=1.0, len).prop_map(|mut row| {
        let sum: f64 = row.iter().sum();
        for v in &mut row {
            *v /= sum;
        }
        // push the rounding residue into the first entry
        let residue: f64 = 1.0 - row.iter().sum::<f64>();
        row[0] += residue;
        row
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_bracket_is_certified(
        rows in proptest::collection::vec(stochastic_row(3), 2..=3),
    ) {
        let labels = vec!["0".to_string(), "1".to_string(), "e".to_string()];
        let matrix = match DmcMatrix::new(labels, rows) {
            Ok(m) => m,
            Err(_) => return Ok(()), // rounding pushed a row off stochastic
        };
        let est = dmc_capacity_blahut_arimoto(&matrix, 1e-8).unwrap();
        prop_assert!(est.lower <= est.upper + 1e-15);
        prop_assert!(est.upper - est.lower <= 1e-8);
        prop_assert!(est.bits >= 0.0);
        prop_assert!(est.bits <= (matrix.rows.len() as f64).log2() + 1e-12);
        // achievability: no fixed input beats the certified upper bound
        for q in [[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]] {
            if matrix.rows.len() == 2 {
                let mi = mutual_information(&q, &matrix).unwrap();
                prop_assert!(mi <= est.upper + 1e-9);
            }
        }
    }
}
