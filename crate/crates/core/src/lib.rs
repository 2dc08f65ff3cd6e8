//! Simulation and analysis of erasure channels with a shared classical
//! memory register.
//!
//! The family consists of a fair erasure channel `A` that nudges the register
//! up on delivery and down on erasure, a register-dependent erasure channel
//! `P` gated behind a threshold read (`B = gate . P`), and their convex
//! mixture `C` acting on the shared register, plus bit-flip/bit-erasure
//! analogues of all three. Each single channel is useless (zero or vanishing
//! capacity) while the mixture transmits: the ratchet effect carries over
//! from alternating losing games to communication channels.
//!
//! The crate provides:
//!
//! - [`channel`]: the step functions and the serializable [`ChannelSpec`].
//! - [`markov`]: the mod-3 residue chain, its stationary distribution,
//!   walk drift, and the concentration bounds.
//! - [`montecarlo`]: deterministic, reproducible trajectory ensembles.
//! - [`capacity`]: capacity formulas, the degrading-map check, and a
//!   certified iterative solver for discrete memoryless channels.

pub mod capacity;
pub mod channel;
pub mod error;
pub mod markov;
pub mod montecarlo;

pub use capacity::{
    AntidegradabilityReport, CapacityEstimate, DmcMatrix, PortDistribution, PortVerdict,
};
pub use channel::{
    ChannelKind, ChannelSpec, ChannelState, MemoryRegister, PortOutcome, Route, StepResult, Track,
};
pub use error::{Error, Result};
pub use markov::{Mod3Chain, StationaryDistribution, WalkParams};
pub use montecarlo::{
    AggregateStats, DriftEstimate, EnsembleResult, ParrondoVerdict, PositionRate,
    SimulationConfig, TrajectoryRecord, WindowRate,
};
