//! Closed-form analysis of the memory dynamics: the mod-3 residue chain, its
//! stationary distribution, walk drift, and the concentration bounds.
//!
//! The memory register moves +1 on a successful transmission and -1 on a
//! failure, so its residue mod 3 follows a three-state Markov chain whose
//! success probability depends only on whether the residue is 0.

use serde::Serialize;

use crate::error::{Error, Result};

/// The three-state residue chain.
///
/// From state 0 the walk moves to 1 with probability `success_state0` and to
/// 2 otherwise; from states 1 and 2 it moves up (2, 0 respectively) with
/// probability `success_state12` and down otherwise.
///
/// For the gated channel the success probabilities are `1 - p_b` (residue 0)
/// and `1 - p_c`; for the mixture they are `r_b` and `r_c` from
/// [`mixture_success_probs`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Mod3Chain {
    pub success_state0: f64,
    pub success_state12: f64,
}

impl Mod3Chain {
    pub fn new(success_state0: f64, success_state12: f64) -> Result<Self> {
        check_probability("success_state0", success_state0)?;
        check_probability("success_state12", success_state12)?;
        Ok(Mod3Chain {
            success_state0,
            success_state12,
        })
    }

    /// Residue chain of the gated channel with erasure probabilities
    /// `p_b` (residue 0) and `p_c` (otherwise).
    pub fn for_channel_b(p_b: f64, p_c: f64) -> Result<Self> {
        check_probability("p_b", p_b)?;
        check_probability("p_c", p_c)?;
        Mod3Chain::new(1.0 - p_b, 1.0 - p_c)
    }

    /// Residue chain of the shared-memory mixture.
    pub fn for_mixture(lambda: f64, p_a: f64, p_b: f64, p_c: f64) -> Result<Self> {
        let (r_b, r_c) = mixture_success_probs(lambda, p_a, p_b, p_c)?;
        Mod3Chain::new(r_b, r_c)
    }

    /// Row-stochastic transition matrix, `matrix[i][j] = Pr(i -> j)`.
    pub fn transition_matrix(&self) -> [[f64; 3]; 3] {
        let s0 = self.success_state0;
        let s = self.success_state12;
        [
            [0.0, s0, 1.0 - s0],
            [1.0 - s, 0.0, s],
            [s, 1.0 - s, 0.0],
        ]
    }

    /// One application of the chain to a distribution over residues.
    pub fn step(&self, d: &[f64; 3]) -> [f64; 3] {
        let s0 = self.success_state0;
        let s = self.success_state12;
        [
            d[1] * (1.0 - s) + d[2] * s,
            d[0] * s0 + d[2] * (1.0 - s),
            d[0] * (1.0 - s0) + d[1] * s,
        ]
    }

    /// False when a success probability sits at 0 or 1, making the chain
    /// periodic or reducible. The stationary distribution still exists and
    /// is unique, but the chain no longer forgets its start.
    pub fn is_mixing(&self) -> bool {
        let open = |p: f64| p > 0.0 && p < 1.0;
        open(self.success_state0) && open(self.success_state12)
    }
}

/// Occupancy probabilities of the three residue classes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StationaryDistribution {
    pub pi0: f64,
    pub pi1: f64,
    pub pi2: f64,
}

impl StationaryDistribution {
    pub fn as_array(&self) -> [f64; 3] {
        [self.pi0, self.pi1, self.pi2]
    }
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}

/// Solves the balance equations directly: two of them plus the normalization
/// row, by 3x3 Gaussian elimination with partial pivoting. Exact to machine
/// precision, no iteration tolerance involved.
///
/// Degenerate chains (success probabilities at 0 or 1) still have a unique
/// stationary distribution, concentrated on the surviving cycle; consult
/// [`Mod3Chain::is_mixing`] to detect them.
pub fn stationary_distribution(chain: &Mod3Chain) -> StationaryDistribution {
    let p = chain.transition_matrix();
    // rows: balance for states 0 and 1, then normalization
    let mut m = [
        [1.0 - p[0][0], -p[1][0], -p[2][0], 0.0],
        [-p[0][1], 1.0 - p[1][1], -p[2][1], 0.0],
        [1.0, 1.0, 1.0, 1.0],
    ];

    // forward elimination with partial pivoting
    for col in 0..3 {
        let pivot_row = (col..3)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        m.swap(col, pivot_row);
        let pivot = m[col][col];
        assert!(
            pivot.abs() > 1e-14,
            "residue chain has a unique stationary distribution; singular pivot {pivot}"
        );
        let pivot_row = m[col];
        for row in m.iter_mut().skip(col + 1) {
            let factor = row[col] / pivot;
            for (entry, pivot_entry) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *entry -= factor * pivot_entry;
            }
        }
    }
    // back substitution
    let mut x = [0.0f64; 3];
    for row in (0..3).rev() {
        let mut acc = m[row][3];
        for k in (row + 1)..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }

    // scrub rounding dust and renormalize
    for v in &mut x {
        *v = v.max(0.0);
    }
    let sum: f64 = x.iter().sum();
    StationaryDistribution {
        pi0: x[0] / sum,
        pi1: x[1] / sum,
        pi2: x[2] / sum,
    }
}

/// Probability of a successful transmission when the residue chain sits in
/// the given distribution: `s0*pi0 + s*(pi1 + pi2)`.
pub fn success_probability(pi: &StationaryDistribution, chain: &Mod3Chain) -> f64 {
    chain.success_state0 * pi.pi0 + chain.success_state12 * (pi.pi1 + pi.pi2)
}

/// Per-residue success probabilities `(r_b, r_c)` of the mixture: with
/// probability `lambda` the fair channel acts (success `1 - p_a`), otherwise
/// the residue-dependent one does.
pub fn mixture_success_probs(lambda: f64, p_a: f64, p_b: f64, p_c: f64) -> Result<(f64, f64)> {
    check_probability("lambda", lambda)?;
    check_probability("p_a", p_a)?;
    check_probability("p_b", p_b)?;
    check_probability("p_c", p_c)?;
    let a = lambda * (1.0 - p_a);
    Ok((
        a + (1.0 - lambda) * (1.0 - p_b),
        a + (1.0 - lambda) * (1.0 - p_c),
    ))
}

/// Parameters of the +/-1 random walk driven by a per-step success
/// probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WalkParams {
    pub p_success: f64,
    /// Expected step, `2p - 1`.
    pub drift_per_step: f64,
    /// Half the absolute drift; the walk expectation after n steps is
    /// `+/- 2*alpha*n`.
    pub alpha: f64,
}

pub fn drift(p_success: f64) -> WalkParams {
    assert!(
        (0.0..=1.0).contains(&p_success),
        "p_success must lie in [0, 1], got {p_success}"
    );
    let drift_per_step = 2.0 * p_success - 1.0;
    WalkParams {
        p_success,
        drift_per_step,
        alpha: drift_per_step.abs() / 2.0,
    }
}

/// Log of the tail bound `Pr(S_n >= m0) <= exp(-(m0 + 2*alpha*n)^2 / (2n))`
/// for a walk with drift `-2*alpha`.
pub fn hoeffding_exceedance_bound_ln(n: u64, m0: i64, alpha: f64) -> f64 {
    assert!(n >= 1, "n must be at least 1");
    assert!(m0 >= 0, "m0 must be nonnegative, got {m0}");
    assert!(alpha >= 0.0, "alpha must be nonnegative, got {alpha}");
    let n = n as f64;
    let t = m0 as f64 + 2.0 * alpha * n;
    -(t * t) / (2.0 * n)
}

/// Upper bound on the walk exceeding `m0` after `n` steps, clamped to [0, 1].
pub fn hoeffding_exceedance_bound(n: u64, m0: i64, alpha: f64) -> f64 {
    hoeffding_exceedance_bound_ln(n, m0, alpha).exp().min(1.0)
}

/// Log of the block-delivery bound `exp(-2*alpha^2*n)`.
pub fn block_delivery_bound_ln(n: u64, alpha: f64) -> f64 {
    assert!(n >= 1, "n must be at least 1");
    assert!(alpha >= 0.0, "alpha must be nonnegative, got {alpha}");
    -2.0 * alpha * alpha * (n as f64)
}

/// Upper bound on any fixed block reaching the receiver through the gated
/// channel at position n, clamped to [0, 1].
pub fn block_delivery_bound(n: u64, alpha: f64) -> f64 {
    block_delivery_bound_ln(n, alpha).exp().min(1.0)
}

/// Lower bound on the delivery probability at use `n` of the mixture, whose
/// walk drifts at `+2*alpha`: `p * (1 - exp(-(2*alpha*n - m0)^2 / (2n)))`
/// once `2*alpha*n > m0`, and the trivial bound 0 before that.
pub fn mixture_delivery_lower_bound(n: u64, m0: i64, alpha: f64, p_success: f64) -> f64 {
    assert!(n >= 1, "n must be at least 1");
    assert!(m0 >= 0, "m0 must be nonnegative, got {m0}");
    assert!(alpha >= 0.0, "alpha must be nonnegative, got {alpha}");
    assert!(
        (0.0..=1.0).contains(&p_success),
        "p_success must lie in [0, 1], got {p_success}"
    );
    let nf = n as f64;
    let t = 2.0 * alpha * nf - m0 as f64;
    if t <= 0.0 {
        return 0.0;
    }
    (p_success * (1.0 - (-(t * t) / (2.0 * nf)).exp())).clamp(0.0, 1.0)
}

/// Applies the chain `steps` times to `initial`. Serves as the independent
/// oracle for [`stationary_distribution`] and for measuring how quickly the
/// chain forgets its start.
pub fn power_iteration(chain: &Mod3Chain, initial: [f64; 3], steps: u64) -> [f64; 3] {
    debug_assert!(
        (initial.iter().sum::<f64>() - 1.0).abs() < 1e-9 && initial.iter().all(|&p| p >= 0.0),
        "initial must be a distribution"
    );
    let mut d = initial;
    for _ in 0..steps {
        d = chain.step(&d);
    }
    d
}

/// Unhalved L1 distance between two distributions.
pub fn l1_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum())
}

/// Total-variation distance, half the L1 distance.
pub fn tv_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    Ok(l1_distance(a, b)? / 2.0)
}
