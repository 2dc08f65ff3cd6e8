//! The channel family: stochastic step functions over a shared integer
//! memory register.
//!
//! Every channel here is input-oblivious: whether a use delivers, erases, or
//! flips depends only on the memory value and the random draw, never on the
//! payload. Transmissions are therefore represented symbolically
//! ([`PortOutcome`]) rather than as state vectors.
//!
//! Sampling convention: an event with probability `p` fires iff the uniform
//! draw satisfies `u < p`, with `u` in `[0, 1)`. The threshold gate passes a
//! symbol through iff the memory value strictly exceeds the threshold.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Payload alphabet of a channel: erasure-flag outcomes or classical bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Track {
    Quantum,
    Classical,
}

/// The symbol arriving at the receiver for one channel use.
///
/// Quantum-track channels emit `Delivered` or `Erased`; classical-track
/// channels emit `Bit(_)` or `Erased`. The two delivered forms never mix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PortOutcome {
    /// The payload arrived intact (quantum track).
    Delivered,
    /// A bit arrived (classical track); it may differ from the input.
    Bit(u8),
    /// The erasure flag.
    Erased,
}

impl PortOutcome {
    pub fn is_erased(self) -> bool {
        matches!(self, PortOutcome::Erased)
    }

    /// True for any non-erasure outcome, bit-carrying or not.
    pub fn is_delivered(self) -> bool {
        !self.is_erased()
    }

    pub fn bit(self) -> Option<u8> {
        match self {
            PortOutcome::Bit(b) => Some(b),
            _ => None,
        }
    }
}

impl std::fmt::Display for PortOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PortOutcome::Delivered => write!(f, "delivered"),
            PortOutcome::Bit(b) => write!(f, "bit{b}"),
            PortOutcome::Erased => write!(f, "erased"),
        }
    }
}

/// The shared classical memory register: an unbounded signed counter.
///
/// `A` and `P` steps move it by exactly one; the threshold gate never touches
/// it. Values are capped at magnitude 2^62, far beyond any feasible run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MemoryRegister(i64);

impl MemoryRegister {
    pub const MAX_MAGNITUDE: i64 = 1 << 62;

    pub fn new(value: i64) -> Self {
        assert!(
            value.abs() < Self::MAX_MAGNITUDE,
            "memory register magnitude limit exceeded: {value}"
        );
        MemoryRegister(value)
    }

    pub fn value(self) -> i64 {
        self.0
    }

    /// Residue class of the register mod 3, mapped to {0, 1, 2} for negative
    /// values as well.
    pub fn residue(self) -> usize {
        self.0.rem_euclid(3) as usize
    }

    fn shifted(self, delta: i64) -> Self {
        Self::new(self.0 + delta)
    }
}

/// Route chosen by a mixture channel for one use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    A,
    B,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Route::A => write!(f, "a"),
            Route::B => write!(f, "b"),
        }
    }
}

/// Trace record of one channel use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepResult {
    pub outcome: PortOutcome,
    pub memory_after: MemoryRegister,
    /// Which side a mixture routed to; `None` for non-mixture kinds.
    pub branch_taken: Option<Route>,
    /// Whether the threshold gate passed the symbol; `None` when no gate was
    /// consulted (kinds without a gate, or a mixture use routed to `A`).
    pub gate_open: Option<bool>,
}

/// The channel kinds of the family, quantum and classical tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    /// Fair erasure channel; memory +1 on delivery, -1 on erasure.
    A,
    /// Erasure probability switches on the memory residue mod 3.
    P,
    /// Threshold gate: passes through iff memory > threshold. Memory fixed.
    T,
    /// `P` followed by the threshold gate reading the updated memory.
    B,
    /// Convex mixture of `A` and `B` over the shared register.
    CLambda,
    /// Bit-flip analogue of `A`: faithful or flipped, never erased.
    ClassicalA,
    /// Bit-erasure analogue of `B`.
    ClassicalB,
    /// Classical mixture of `ClassicalA` and `ClassicalB`.
    ClassicalC,
}

impl ChannelKind {
    pub fn track(self) -> Track {
        match self {
            ChannelKind::A
            | ChannelKind::P
            | ChannelKind::T
            | ChannelKind::B
            | ChannelKind::CLambda => Track::Quantum,
            ChannelKind::ClassicalA | ChannelKind::ClassicalB | ChannelKind::ClassicalC => {
                Track::Classical
            }
        }
    }

    pub fn is_mixture(self) -> bool {
        matches!(self, ChannelKind::CLambda | ChannelKind::ClassicalC)
    }

    pub fn has_gate(self) -> bool {
        matches!(
            self,
            ChannelKind::T
                | ChannelKind::B
                | ChannelKind::CLambda
                | ChannelKind::ClassicalB
                | ChannelKind::ClassicalC
        )
    }
}

fn default_p_a() -> f64 {
    0.5
}
fn default_p_b() -> f64 {
    0.91
}
fn default_p_c() -> f64 {
    0.26
}
fn default_m0() -> i64 {
    100
}
fn default_lambda() -> f64 {
    0.5
}

/// Declarative description of a channel instance.
///
/// Defaults are the reference parameters: `p_a = 0.5`, `p_b = 0.91`,
/// `p_c = 0.26` (0.9 + eps and 0.25 + eps with eps = 0.01), `lambda = 0.5`,
/// threshold 100, memory starting at 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    #[serde(default = "default_p_a")]
    pub p_a: f64,
    #[serde(default = "default_p_b")]
    pub p_b: f64,
    #[serde(default = "default_p_c")]
    pub p_c: f64,
    #[serde(default = "default_m0")]
    pub m0: i64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default)]
    pub initial_memory: i64,
    /// Optional explicit track; must agree with the kind when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub track: Option<Track>,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind) -> Self {
        ChannelSpec {
            kind,
            p_a: default_p_a(),
            p_b: default_p_b(),
            p_c: default_p_c(),
            m0: default_m0(),
            lambda: default_lambda(),
            initial_memory: 0,
            track: None,
        }
    }

    pub fn track(&self) -> Track {
        self.track.unwrap_or_else(|| self.kind.track())
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("p_a", self.p_a)?;
        check_probability("p_b", self.p_b)?;
        check_probability("p_c", self.p_c)?;
        check_probability("lambda", self.lambda)?;
        if self.initial_memory.abs() >= MemoryRegister::MAX_MAGNITUDE {
            return Err(Error::InvalidSpec(format!(
                "initial_memory {} exceeds the register magnitude limit",
                self.initial_memory
            )));
        }
        if let Some(track) = self.track {
            if track != self.kind.track() {
                return Err(Error::InvalidSpec(format!(
                    "kind {:?} is on the {:?} track, not {:?}",
                    self.kind,
                    self.kind.track(),
                    track
                )));
            }
        }
        Ok(())
    }
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}

/// One use of the plain erasure channel: erase iff `u < p`.
pub fn erasure_step(p: f64, u: f64) -> Result<PortOutcome> {
    check_probability("p", p)?;
    if !(0.0..1.0).contains(&u) {
        return Err(Error::InvalidUniformDraw(u));
    }
    Ok(if u < p {
        PortOutcome::Erased
    } else {
        PortOutcome::Delivered
    })
}

/// The sampling convention: an event with probability `p` fires iff `u < p`.
#[inline]
fn fires(p: f64, u: f64) -> bool {
    debug_assert!((0.0..=1.0).contains(&p));
    debug_assert!((0.0..1.0).contains(&u));
    u < p
}

/// One use of channel `A`: erasure probability `p_a`, memory +1 on delivery
/// and -1 on erasure.
pub fn channel_a_step(mem: MemoryRegister, p_a: f64, u: f64) -> StepResult {
    if fires(p_a, u) {
        StepResult {
            outcome: PortOutcome::Erased,
            memory_after: mem.shifted(-1),
            branch_taken: None,
            gate_open: None,
        }
    } else {
        StepResult {
            outcome: PortOutcome::Delivered,
            memory_after: mem.shifted(1),
            branch_taken: None,
            gate_open: None,
        }
    }
}

/// One use of channel `P`: erasure probability `p_b` when the memory residue
/// is 0, `p_c` otherwise; memory +1 on delivery, -1 on erasure.
pub fn channel_p_step(mem: MemoryRegister, p_b: f64, p_c: f64, u: f64) -> StepResult {
    let p = if mem.residue() == 0 { p_b } else { p_c };
    if fires(p, u) {
        StepResult {
            outcome: PortOutcome::Erased,
            memory_after: mem.shifted(-1),
            branch_taken: None,
            gate_open: None,
        }
    } else {
        StepResult {
            outcome: PortOutcome::Delivered,
            memory_after: mem.shifted(1),
            branch_taken: None,
            gate_open: None,
        }
    }
}

/// The threshold gate: passes `incoming` through iff `mem > m0`, erases
/// otherwise. Never modifies the memory.
pub fn channel_t_gate(mem: MemoryRegister, m0: i64, incoming: PortOutcome) -> PortOutcome {
    if mem.value() > m0 {
        incoming
    } else {
        PortOutcome::Erased
    }
}

/// One use of channel `B`: a `P` step whose output is piped through the
/// threshold gate. The gate reads the memory value after `P`'s update.
pub fn channel_b_step(mem: MemoryRegister, m0: i64, p_b: f64, p_c: f64, u: f64) -> StepResult {
    let inner = channel_p_step(mem, p_b, p_c, u);
    let open = inner.memory_after.value() > m0;
    StepResult {
        outcome: channel_t_gate(inner.memory_after, m0, inner.outcome),
        memory_after: inner.memory_after,
        branch_taken: None,
        gate_open: Some(open),
    }
}

/// One use of the mixture: route `A` iff `u_route < lambda`, else route `B`,
/// both acting on the same shared register.
#[allow(clippy::too_many_arguments)]
pub fn channel_c_step(
    mem: MemoryRegister,
    m0: i64,
    lambda: f64,
    p_a: f64,
    p_b: f64,
    p_c: f64,
    u_route: f64,
    u_chan: f64,
) -> StepResult {
    if fires(lambda, u_route) {
        // u_route < lambda selects route A
        StepResult {
            branch_taken: Some(Route::A),
            ..channel_a_step(mem, p_a, u_chan)
        }
    } else {
        StepResult {
            branch_taken: Some(Route::B),
            ..channel_b_step(mem, m0, p_b, p_c, u_chan)
        }
    }
}

/// One use of the classical `A` analogue: the bit passes faithfully iff
/// `u < 1 - p_a` (memory +1) and is flipped otherwise (memory -1).
pub fn classical_a_step(bit: u8, mem: MemoryRegister, p_a: f64, u: f64) -> StepResult {
    debug_assert!(bit <= 1);
    if fires(1.0 - p_a, u) {
        StepResult {
            outcome: PortOutcome::Bit(bit),
            memory_after: mem.shifted(1),
            branch_taken: None,
            gate_open: None,
        }
    } else {
        StepResult {
            outcome: PortOutcome::Bit(1 - bit),
            memory_after: mem.shifted(-1),
            branch_taken: None,
            gate_open: None,
        }
    }
}

fn classical_p_step(bit: u8, mem: MemoryRegister, p_b: f64, p_c: f64, u: f64) -> StepResult {
    let inner = channel_p_step(mem, p_b, p_c, u);
    StepResult {
        outcome: match inner.outcome {
            PortOutcome::Delivered => PortOutcome::Bit(bit),
            other => other,
        },
        ..inner
    }
}

/// Classical analogue of `B`: the delivered symbol carries the input bit.
pub fn classical_b_step(
    bit: u8,
    mem: MemoryRegister,
    m0: i64,
    p_b: f64,
    p_c: f64,
    u: f64,
) -> StepResult {
    debug_assert!(bit <= 1);
    let inner = classical_p_step(bit, mem, p_b, p_c, u);
    let open = inner.memory_after.value() > m0;
    StepResult {
        outcome: channel_t_gate(inner.memory_after, m0, inner.outcome),
        memory_after: inner.memory_after,
        branch_taken: None,
        gate_open: Some(open),
    }
}

/// Classical mixture: route `A` applies the bit-flip channel, route `B` the
/// gated bit-erasure channel, over the shared register.
#[allow(clippy::too_many_arguments)]
pub fn classical_c_step(
    bit: u8,
    mem: MemoryRegister,
    m0: i64,
    lambda: f64,
    p_a: f64,
    p_b: f64,
    p_c: f64,
    u_route: f64,
    u_chan: f64,
) -> StepResult {
    if fires(lambda, u_route) {
        StepResult {
            branch_taken: Some(Route::A),
            ..classical_a_step(bit, mem, p_a, u_chan)
        }
    } else {
        StepResult {
            branch_taken: Some(Route::B),
            ..classical_b_step(bit, mem, m0, p_b, p_c, u_chan)
        }
    }
}

/// A channel instance bound to its memory register, ready to step.
///
/// Mixture kinds consume two uniform draws per use (route, then channel
/// randomness); `T` consumes none; every other kind consumes one. The draw
/// pattern is fixed per kind so trajectories are a pure function of
/// `(spec, seed)`.
#[derive(Clone, Debug)]
pub struct ChannelState {
    spec: ChannelSpec,
    memory: MemoryRegister,
}

impl ChannelState {
    pub fn new(spec: &ChannelSpec) -> Result<Self> {
        spec.validate()?;
        Ok(ChannelState {
            spec: spec.clone(),
            memory: MemoryRegister::new(spec.initial_memory),
        })
    }

    pub fn memory(&self) -> MemoryRegister {
        self.memory
    }

    pub fn spec(&self) -> &ChannelSpec {
        &self.spec
    }

    /// Steps the channel once, transmitting bit 0 on classical tracks.
    pub fn step<R: Rng>(&mut self, rng: &mut R) -> StepResult {
        self.step_with_input(0, rng)
    }

    /// Steps the channel once with an explicit input bit. Quantum-track
    /// kinds ignore the bit.
    pub fn step_with_input<R: Rng>(&mut self, bit: u8, rng: &mut R) -> StepResult {
        let spec = &self.spec;
        let mem = self.memory;
        let result = match spec.kind {
            ChannelKind::A => channel_a_step(mem, spec.p_a, rng.random()),
            ChannelKind::P => channel_p_step(mem, spec.p_b, spec.p_c, rng.random()),
            ChannelKind::T => StepResult {
                outcome: channel_t_gate(mem, spec.m0, PortOutcome::Delivered),
                memory_after: mem,
                branch_taken: None,
                gate_open: Some(mem.value() > spec.m0),
            },
            ChannelKind::B => channel_b_step(mem, spec.m0, spec.p_b, spec.p_c, rng.random()),
            ChannelKind::CLambda => {
                let u_route = rng.random();
                let u_chan = rng.random();
                channel_c_step(
                    mem, spec.m0, spec.lambda, spec.p_a, spec.p_b, spec.p_c, u_route, u_chan,
                )
            }
            ChannelKind::ClassicalA => classical_a_step(bit, mem, spec.p_a, rng.random()),
            ChannelKind::ClassicalB => {
                classical_b_step(bit, mem, spec.m0, spec.p_b, spec.p_c, rng.random())
            }
            ChannelKind::ClassicalC => {
                let u_route = rng.random();
                let u_chan = rng.random();
                classical_c_step(
                    bit, mem, spec.m0, spec.lambda, spec.p_a, spec.p_b, spec.p_c, u_route, u_chan,
                )
            }
        };
        self.memory = result.memory_after;
        result
    }
}
