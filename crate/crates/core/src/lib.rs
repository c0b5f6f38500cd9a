//! Entanglement probability densities of two-qubit mixed states.
//!
//! A state ρ is resolved into nested projections Π₁ ⊂ Π₂ ⊂ Π₃ ⊂ Π₄ with
//! weights ω_M; the density of pure-state concurrence over the unitarily
//! invariant ensemble of each subspace is computed in closed form (or, for the
//! full space, from a cached Monte Carlo curve) and combined.

#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod entdensity;
pub mod error;
pub mod haarmc;
pub mod localops;
pub mod qstate;
pub mod statelib;

pub use error::{Error, Result};
