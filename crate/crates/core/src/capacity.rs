//! Capacity formulas and checks: erasure-channel quantum and private
//! capacity, binary-symmetric capacity, coherent information of an effective
//! erasure channel, the anti-degradability test with its explicit degrading
//! map, and an iterative capacity solver for discrete memoryless channels.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::markov::StationaryDistribution;

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "p must lie in [0, 1], got {p}");
    let term = |x: f64| if x == 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// Quantum capacity of the erasure channel with erasure probability `p`:
/// `max(0, 1 - 2p)` qubits per use. Zero for all `p >= 1/2`.
pub fn erasure_quantum_capacity(p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "p must lie in [0, 1], got {p}");
    (1.0 - 2.0 * p).max(0.0)
}

/// Private capacity of the erasure channel; identical to the quantum value.
pub fn erasure_private_capacity(p: f64) -> f64 {
    erasure_quantum_capacity(p)
}

/// Capacity of the binary symmetric channel, `1 - H(p)` bits per use.
pub fn bsc_capacity(p: f64) -> f64 {
    1.0 - binary_entropy(p)
}

/// Coherent information of an effective erasure channel with erasure
/// probability `s` at the given input entropy: `(1 - 2s) * S`. Nonpositive
/// exactly in the anti-degradable regime `s >= 1/2`.
pub fn coherent_information_effective_erasure(s: f64, input_entropy: f64) -> f64 {
    assert!((0.0..=1.0).contains(&s), "s must lie in [0, 1], got {s}");
    assert!(input_entropy >= 0.0, "input entropy must be nonnegative");
    (1.0 - 2.0 * s) * input_entropy
}

/// Coin weight `t = r / (1 - r)` of the degrading map that collapses the
/// environment port onto the receiver port. Exists only while the receiver
/// sees no more than half the symbols (`r <= 0.5`).
pub fn degrading_coefficient(r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidProbability { name: "r", value: r });
    }
    if r > 0.5 {
        return Err(Error::NotAntidegradable { r });
    }
    Ok(r / (1.0 - r))
}

/// A single port: a mixture of the payload and the erasure flag.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PortDistribution {
    pub delivered: f64,
    pub erased: f64,
}

impl PortDistribution {
    pub fn new(delivered: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delivered) {
            return Err(Error::InvalidProbability {
                name: "delivered",
                value: delivered,
            });
        }
        Ok(PortDistribution {
            delivered,
            erased: 1.0 - delivered,
        })
    }
}

/// Applies the degrading coin to a port: keep it with probability `t`,
/// replace it with the erasure flag otherwise.
pub fn apply_degrading(port: PortDistribution, t: f64) -> PortDistribution {
    assert!((0.0..=1.0).contains(&t), "t must lie in [0, 1], got {t}");
    let delivered = t * port.delivered;
    PortDistribution {
        delivered,
        erased: 1.0 - delivered,
    }
}

/// Verdict for one port of a block.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PortVerdict {
    pub position: u64,
    pub delivered_rate: f64,
    /// The degrading coefficient when the port admits one.
    pub degrading_coefficient: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AntidegradabilityReport {
    pub ports: Vec<PortVerdict>,
    /// True iff every port delivers at most half the time, so the
    /// environment can be degraded onto the receiver position by position.
    pub block_antidegradable: bool,
}

/// Checks a block of per-position delivered probabilities for
/// anti-degradability at the effective-erasure level.
pub fn antidegradability_check(profile: &[f64]) -> AntidegradabilityReport {
    let ports: Vec<PortVerdict> = profile
        .iter()
        .enumerate()
        .map(|(i, &r)| PortVerdict {
            position: i as u64,
            delivered_rate: r,
            degrading_coefficient: degrading_coefficient(r).ok(),
        })
        .collect();
    let block_antidegradable = ports.iter().all(|p| p.degrading_coefficient.is_some());
    AntidegradabilityReport {
        ports,
        block_antidegradable,
    }
}

/// A discrete memoryless channel: one row of output probabilities per input
/// symbol.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DmcMatrix {
    pub output_labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl DmcMatrix {
    pub fn new(output_labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidSpec("channel matrix has no rows".into()));
        }
        for row in &rows {
            if row.len() != output_labels.len() {
                return Err(Error::LengthMismatch {
                    left: row.len(),
                    right: output_labels.len(),
                });
            }
            if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
                return Err(Error::InvalidSpec("matrix entry outside [0, 1]".into()));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidSpec(format!(
                    "matrix row sums to {sum}, not 1"
                )));
            }
        }
        Ok(DmcMatrix {
            output_labels,
            rows,
        })
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        DmcMatrix::new(
            vec!["0".into(), "1".into()],
            vec![vec![1.0 - p, p], vec![p, 1.0 - p]],
        )
    }

    /// Binary erasure channel with erasure probability `p`.
    pub fn binary_erasure(p: f64) -> Result<Self> {
        DmcMatrix::new(
            vec!["0".into(), "1".into(), "e".into()],
            vec![vec![1.0 - p, 0.0, p], vec![0.0, 1.0 - p, p]],
        )
    }
}

/// Single-use transition law of the classical mixture in the stationary
/// regime, over outputs {0, 1, e}. The fair route flips the bit half the
/// time; the other route erases with the stationary-averaged probability
/// `pbar = pi0 * p_b + (1 - pi0) * p_c`.
pub fn mixture_classical_dmc(
    lambda: f64,
    pi: &StationaryDistribution,
    p_b: f64,
    p_c: f64,
) -> Result<DmcMatrix> {
    for (name, v) in [("lambda", lambda), ("p_b", p_b), ("p_c", p_c)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidProbability { name, value: v });
        }
    }
    let pbar = pi.pi0 * p_b + (1.0 - pi.pi0) * p_c;
    let same = lambda * 0.5 + (1.0 - lambda) * (1.0 - pbar);
    let flip = lambda * 0.5;
    let erase = (1.0 - lambda) * pbar;
    DmcMatrix::new(
        vec!["0".into(), "1".into(), "e".into()],
        vec![vec![same, flip, erase], vec![flip, same, erase]],
    )
}

/// Mutual information in bits between `input` and the channel output,
/// written as the input-weighted divergence of each row from the output
/// marginal.
pub fn mutual_information(input: &[f64], matrix: &DmcMatrix) -> Result<f64> {
    if input.len() != matrix.rows.len() {
        return Err(Error::LengthMismatch {
            left: input.len(),
            right: matrix.rows.len(),
        });
    }
    let ny = matrix.output_labels.len();
    let mut marginal = vec![0.0f64; ny];
    for (q, row) in input.iter().zip(&matrix.rows) {
        for (m, w) in marginal.iter_mut().zip(row) {
            *m += q * w;
        }
    }
    let mut info = 0.0;
    for (q, row) in input.iter().zip(&matrix.rows) {
        if *q == 0.0 {
            continue;
        }
        for (w, m) in row.iter().zip(&marginal) {
            if *w > 0.0 {
                info += q * w * (w / m).log2();
            }
        }
    }
    Ok(info)
}

pub const BA_MAX_ITERATIONS: usize = 100_000;
pub const BA_DEFAULT_TOLERANCE: f64 = 1e-9;

/// Capacity estimate with its certified bracket.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CapacityEstimate {
    /// The certified achievable value (the lower bound at termination).
    pub bits: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

/// Channel capacity of a discrete memoryless channel by alternating
/// maximization, starting from the uniform input.
///
/// Each iteration computes the per-input divergences `d(x)` of the rows from
/// the current output marginal; `sum_x q(x) d(x)` is achievable and
/// `max_x d(x)` is an upper bound, so the loop stops once the bracket closes
/// to `tolerance` bits.
pub fn dmc_capacity_blahut_arimoto(
    matrix: &DmcMatrix,
    tolerance: f64,
) -> Result<CapacityEstimate> {
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tolerance",
            value: tolerance,
        });
    }
    let rows = &matrix.rows;
    let nx = rows.len();
    let ny = matrix.output_labels.len();
    let mut q = vec![1.0 / nx as f64; nx];
    let mut divergence = vec![0.0f64; nx];
    let mut marginal = vec![0.0f64; ny];

    for iteration in 1..=BA_MAX_ITERATIONS {
        marginal.fill(0.0);
        for (qx, row) in q.iter().zip(rows) {
            for (m, w) in marginal.iter_mut().zip(row) {
                *m += qx * w;
            }
        }
        for (d, row) in divergence.iter_mut().zip(rows) {
            *d = row
                .iter()
                .zip(&marginal)
                .filter(|(w, _)| **w > 0.0)
                .map(|(w, m)| w * (w / m).log2())
                .sum();
        }
        let lower: f64 = q.iter().zip(&divergence).map(|(qx, d)| qx * d).sum();
        let upper = divergence.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if upper - lower <= tolerance {
            return Ok(CapacityEstimate {
                bits: lower.max(0.0),
                lower: lower.max(0.0),
                upper,
                iterations: iteration,
            });
        }
        for (qx, d) in q.iter_mut().zip(&divergence) {
            *qx *= d.exp2();
        }
        let norm: f64 = q.iter().sum();
        for qx in &mut q {
            *qx /= norm;
        }
    }
    Err(Error::NoConvergence {
        iterations: BA_MAX_ITERATIONS,
        gap: f64::NAN,
    })
}
