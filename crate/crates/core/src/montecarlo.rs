//! Deterministic Monte Carlo ensembles over any channel spec.
//!
//! A trajectory is a pure function of `(spec, seed)`. Ensembles derive each
//! trajectory seed from `(base_seed, trial_index)` with a fixed published
//! hash and aggregate only integer sufficient statistics, merged
//! commutatively, so results are bit-identical across runs and across any
//! number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelSpec, ChannelState, PortOutcome, Route};
use crate::error::{Error, Result};

/// Number of equal position windows reported per ensemble.
pub const REPORT_WINDOWS: u64 = 10;

/// SplitMix64 finalizer, the published mixing function behind
/// [`trajectory_seed`].
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trajectory seed: `splitmix64(splitmix64(base) ^ splitmix64(trial ^ C))`
/// with the constant `C = 0xA0761D6478BD642F`. Trials can therefore run under
/// any parallel schedule without changing their streams.
pub fn trajectory_seed(base_seed: u64, trial_index: u64) -> u64 {
    splitmix64(splitmix64(base_seed) ^ splitmix64(trial_index ^ 0xA076_1D64_78BD_642F))
}

/// Configuration of one ensemble run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub spec: ChannelSpec,
    /// Channel uses per trajectory (n).
    pub uses: u64,
    /// Number of independent trajectories (N).
    pub trials: u64,
    pub base_seed: u64,
    #[serde(default)]
    pub record_trajectories: bool,
    /// Steps discarded before occupancy and drift statistics; defaults to
    /// `max(1000, 10 * m0)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<u64>,
}

impl SimulationConfig {
    pub fn new(spec: ChannelSpec, uses: u64, trials: u64, base_seed: u64) -> Self {
        SimulationConfig {
            spec,
            uses,
            trials,
            base_seed,
            record_trajectories: false,
            burn_in: None,
        }
    }

    /// The burn-in actually applied: the configured (or default) value, or 0
    /// when it would swallow the whole run.
    pub fn effective_burn_in(&self) -> u64 {
        let default = (self.spec.m0.max(0) as u64).saturating_mul(10).max(1000);
        let burn = self.burn_in.unwrap_or(default);
        if burn >= self.uses {
            0
        } else {
            burn
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidParameter {
                name: "trials",
                value: 0.0,
            });
        }
        Ok(())
    }
}

/// Full trace of one trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    /// Memory value at every path point, length `uses + 1`.
    pub memory_path: Vec<i64>,
    pub outcomes: Vec<PortOutcome>,
    pub branches: Vec<Option<Route>>,
    pub gates: Vec<Option<bool>>,
    pub gate_openings: u64,
}

/// Runs a single trajectory; deterministic in `(spec, uses, seed)`.
pub fn run_trajectory(spec: &ChannelSpec, uses: u64, seed: u64) -> Result<TrajectoryRecord> {
    let mut state = ChannelState::new(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = uses as usize;
    let mut record = TrajectoryRecord {
        memory_path: Vec::with_capacity(cap + 1),
        outcomes: Vec::with_capacity(cap),
        branches: Vec::with_capacity(cap),
        gates: Vec::with_capacity(cap),
        gate_openings: 0,
    };
    record.memory_path.push(state.memory().value());
    for _ in 0..uses {
        let r = state.step(&mut rng);
        record.memory_path.push(r.memory_after.value());
        record.outcomes.push(r.outcome);
        record.branches.push(r.branch_taken);
        record.gates.push(r.gate_open);
        if r.gate_open == Some(true) {
            record.gate_openings += 1;
        }
    }
    Ok(record)
}

/// Delivery rate over one position window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindowRate {
    pub start: u64,
    pub end: u64,
    pub rate: f64,
    pub stderr: f64,
}

/// Ensemble statistics. Standard errors come from per-trial totals, so they
/// stay honest under correlation within a trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AggregateStats {
    pub uses: u64,
    pub trials: u64,
    pub burn_in: u64,
    pub initial_memory: i64,
    pub m0: i64,
    /// Mean memory value at the end of a trajectory (whole run, no burn-in).
    pub mean_final_memory: f64,
    pub final_memory_stderr: f64,
    /// Mean per-step memory change over the post-burn-in span.
    pub empirical_drift_per_step: f64,
    pub drift_stderr: f64,
    /// Residue-class occupancy over post-burn-in path points.
    pub residue_occupancy: [f64; 3],
    pub residue_occupancy_stderr: [f64; 3],
    pub overall_delivery_rate: f64,
    pub delivery_rate_by_window: Vec<WindowRate>,
    /// Trials whose final memory displacement reached `m0`.
    pub exceedance_count: u64,
    pub exceedance_rate: f64,
    #[serde(skip)]
    pub delivered_by_position: Vec<u64>,
}

/// Output of [`run_ensemble`]; `trajectories` is populated only when the
/// config asks for recording.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleResult {
    pub stats: AggregateStats,
    pub trajectories: Vec<TrajectoryRecord>,
}

struct TrialAccumulator<'a> {
    config: &'a SimulationConfig,
    burn_in: u64,
    sum_s: i128,
    sum_s2: i128,
    sum_ds: i128,
    sum_ds2: i128,
    exceed: u64,
    residue: [u64; 3],
    residue_sq: [u128; 3],
    delivered_pos: Vec<u64>,
    delivered_total: u64,
    win_sum: Vec<u64>,
    win_sq: Vec<u128>,
    win_scratch: Vec<u64>,
    records: Vec<(u64, TrajectoryRecord)>,
}

impl<'a> TrialAccumulator<'a> {
    fn new(config: &'a SimulationConfig) -> Self {
        let windows = if config.uses == 0 {
            0
        } else {
            REPORT_WINDOWS as usize
        };
        TrialAccumulator {
            config,
            burn_in: config.effective_burn_in(),
            sum_s: 0,
            sum_s2: 0,
            sum_ds: 0,
            sum_ds2: 0,
            exceed: 0,
            residue: [0; 3],
            residue_sq: [0; 3],
            delivered_pos: vec![0; config.uses as usize],
            delivered_total: 0,
            win_sum: vec![0; windows],
            win_sq: vec![0; windows],
            win_scratch: vec![0; windows],
            records: Vec::new(),
        }
    }

    fn run_trial(&mut self, trial: u64) {
        let config = self.config;
        let uses = config.uses;
        let burn = self.burn_in;
        let seed = trajectory_seed(config.base_seed, trial);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = ChannelState::new(&config.spec).expect("spec validated by run_ensemble");
        let initial = state.memory().value();

        let mut record = if config.record_trajectories {
            let cap = uses as usize;
            let mut rec = TrajectoryRecord {
                memory_path: Vec::with_capacity(cap + 1),
                outcomes: Vec::with_capacity(cap),
                branches: Vec::with_capacity(cap),
                gates: Vec::with_capacity(cap),
                gate_openings: 0,
            };
            rec.memory_path.push(initial);
            Some(rec)
        } else {
            None
        };

        let mut s_at_burn: i64 = 0;
        let mut local_res = [0u64; 3];
        self.win_scratch.fill(0);

        for i in 0..uses {
            if i >= burn {
                local_res[state.memory().residue()] += 1;
            }
            let r = state.step(&mut rng);
            if r.outcome.is_delivered() {
                self.delivered_pos[i as usize] += 1;
                self.delivered_total += 1;
                self.win_scratch[((i * REPORT_WINDOWS) / uses) as usize] += 1;
            }
            if let Some(rec) = &mut record {
                rec.memory_path.push(r.memory_after.value());
                rec.outcomes.push(r.outcome);
                rec.branches.push(r.branch_taken);
                rec.gates.push(r.gate_open);
                if r.gate_open == Some(true) {
                    rec.gate_openings += 1;
                }
            }
            if i + 1 == burn {
                s_at_burn = state.memory().value() - initial;
            }
        }
        // final path point belongs to the occupancy sample
        local_res[state.memory().residue()] += 1;

        let s_final = state.memory().value() - initial;
        self.sum_s += s_final as i128;
        self.sum_s2 += (s_final as i128) * (s_final as i128);
        let ds = (s_final - s_at_burn) as i128;
        self.sum_ds += ds;
        self.sum_ds2 += ds * ds;
        if s_final >= config.spec.m0 {
            self.exceed += 1;
        }
        for ((total, total_sq), &count) in self
            .residue
            .iter_mut()
            .zip(&mut self.residue_sq)
            .zip(&local_res)
        {
            *total += count;
            *total_sq += (count as u128) * (count as u128);
        }
        for ((total, total_sq), &count) in self
            .win_sum
            .iter_mut()
            .zip(&mut self.win_sq)
            .zip(&self.win_scratch)
        {
            *total += count;
            *total_sq += (count as u128) * (count as u128);
        }
        if let Some(rec) = record {
            self.records.push((trial, rec));
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.sum_s += other.sum_s;
        self.sum_s2 += other.sum_s2;
        self.sum_ds += other.sum_ds;
        self.sum_ds2 += other.sum_ds2;
        self.exceed += other.exceed;
        for k in 0..3 {
            self.residue[k] += other.residue[k];
            self.residue_sq[k] += other.residue_sq[k];
        }
        for (a, b) in self.delivered_pos.iter_mut().zip(&other.delivered_pos) {
            *a += b;
        }
        self.delivered_total += other.delivered_total;
        for (a, b) in self.win_sum.iter_mut().zip(&other.win_sum) {
            *a += b;
        }
        for (a, b) in self.win_sq.iter_mut().zip(&other.win_sq) {
            *a += b;
        }
        self.records.extend(other.records);
        self
    }
}

/// Runs `trials` independent trajectories and aggregates them. Deterministic
/// in the config alone: the trial schedule and worker count never affect the
/// result.
pub fn run_ensemble(config: &SimulationConfig) -> Result<EnsembleResult> {
    config.validate()?;
    let acc = (0..config.trials)
        .into_par_iter()
        .fold(
            || TrialAccumulator::new(config),
            |mut acc, trial| {
                acc.run_trial(trial);
                acc
            },
        )
        .reduce(|| TrialAccumulator::new(config), TrialAccumulator::merge);
    Ok(finalize(config, acc))
}

fn sample_stats(sum: f64, sum_sq: f64, n: f64) -> (f64, f64) {
    let mean = sum / n;
    let var = if n > 1.0 {
        ((sum_sq - sum * sum / n) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    (mean, (var / n).sqrt())
}

fn finalize(config: &SimulationConfig, acc: TrialAccumulator<'_>) -> EnsembleResult {
    let n = config.trials as f64;
    let uses = config.uses;
    let burn = acc.burn_in;

    let (mean_s, stderr_s) = sample_stats(acc.sum_s as f64, acc.sum_s2 as f64, n);
    let span = uses - burn;
    let (drift, drift_stderr) = if span > 0 {
        let (mean_ds, stderr_ds) = sample_stats(acc.sum_ds as f64, acc.sum_ds2 as f64, n);
        (mean_ds / span as f64, stderr_ds / span as f64)
    } else {
        (0.0, 0.0)
    };

    let occupancy_points = (uses - burn + 1) as f64;
    let mut occupancy = [0.0f64; 3];
    let mut occupancy_stderr = [0.0f64; 3];
    for k in 0..3 {
        let (mean_c, stderr_c) =
            sample_stats(acc.residue[k] as f64, acc.residue_sq[k] as f64, n);
        occupancy[k] = mean_c / occupancy_points;
        occupancy_stderr[k] = stderr_c / occupancy_points;
    }

    let overall_delivery_rate = if uses > 0 {
        acc.delivered_total as f64 / (n * uses as f64)
    } else {
        0.0
    };

    let mut windows = Vec::new();
    for k in 0..acc.win_sum.len() as u64 {
        let start = (k * uses).div_ceil(REPORT_WINDOWS);
        let end = ((k + 1) * uses).div_ceil(REPORT_WINDOWS);
        if start >= end {
            continue;
        }
        let width = (end - start) as f64;
        let (mean_c, stderr_c) = sample_stats(
            acc.win_sum[k as usize] as f64,
            acc.win_sq[k as usize] as f64,
            n,
        );
        windows.push(WindowRate {
            start,
            end,
            rate: mean_c / width,
            stderr: stderr_c / width,
        });
    }

    let mut records = acc.records;
    records.sort_by_key(|(trial, _)| *trial);

    EnsembleResult {
        stats: AggregateStats {
            uses,
            trials: config.trials,
            burn_in: burn,
            initial_memory: config.spec.initial_memory,
            m0: config.spec.m0,
            mean_final_memory: config.spec.initial_memory as f64 + mean_s,
            final_memory_stderr: stderr_s,
            empirical_drift_per_step: drift,
            drift_stderr,
            residue_occupancy: occupancy,
            residue_occupancy_stderr: occupancy_stderr,
            overall_delivery_rate,
            delivery_rate_by_window: windows,
            exceedance_count: acc.exceed,
            exceedance_rate: acc.exceed as f64 / n,
            delivered_by_position: acc.delivered_pos,
        },
        trajectories: records.into_iter().map(|(_, rec)| rec).collect(),
    }
}

/// Empirical residue occupancy, the Monte Carlo counterpart of the analytic
/// stationary distribution.
pub fn empirical_stationary(stats: &AggregateStats) -> [f64; 3] {
    stats.residue_occupancy
}

/// Per-position delivery probability with binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PositionRate {
    pub position: u64,
    pub rate: f64,
    pub stderr: f64,
}

/// Delivery probability for each position in `window`; position `i` delivered
/// means the i-th use was not erased.
pub fn effective_erasure_profile(
    stats: &AggregateStats,
    window: std::ops::Range<u64>,
) -> Result<Vec<PositionRate>> {
    if stats.delivered_by_position.len() as u64 != stats.uses {
        return Err(Error::LengthMismatch {
            left: stats.delivered_by_position.len(),
            right: stats.uses as usize,
        });
    }
    if window.start >= window.end || window.end > stats.uses {
        return Err(Error::EmptyWindow {
            start: window.start,
            end: window.end,
            uses: stats.uses,
        });
    }
    let n = stats.trials as f64;
    Ok(window
        .map(|i| {
            let rate = stats.delivered_by_position[i as usize] as f64 / n;
            PositionRate {
                position: i,
                rate,
                stderr: (rate * (1.0 - rate) / n).sqrt(),
            }
        })
        .collect())
}

/// Drift estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DriftEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// The reversal verdict over three ensembles: the single channels must not
/// win on their own while the mixture must win, each at 3 standard errors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParrondoVerdict {
    pub drift_a: DriftEstimate,
    pub drift_b: DriftEstimate,
    pub drift_c: DriftEstimate,
    pub individually_useless: bool,
    pub jointly_winning: bool,
}

pub fn parrondo_verdict(
    stats_a: &AggregateStats,
    stats_b: &AggregateStats,
    stats_c: &AggregateStats,
) -> Result<ParrondoVerdict> {
    for (name, s) in [("b", stats_b), ("c", stats_c)] {
        if s.uses != stats_a.uses || s.trials != stats_a.trials {
            return Err(Error::MismatchedEnsembles(format!(
                "role {name} ran (uses, trials) = ({}, {}), role a ran ({}, {})",
                s.uses, s.trials, stats_a.uses, stats_a.trials
            )));
        }
    }
    let d = |s: &AggregateStats| DriftEstimate {
        estimate: s.empirical_drift_per_step,
        stderr: s.drift_stderr,
    };
    let (a, b, c) = (d(stats_a), d(stats_b), d(stats_c));
    let individually_useless = a.estimate <= 3.0 * a.stderr && b.estimate + 3.0 * b.stderr < 0.0;
    let jointly_winning = c.estimate - 3.0 * c.stderr > 0.0;
    Ok(ParrondoVerdict {
        drift_a: a,
        drift_b: b,
        drift_c: c,
        individually_useless,
        jointly_winning,
    })
}
