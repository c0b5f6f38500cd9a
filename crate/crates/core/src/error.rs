use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A density matrix (or other state) violated one of its invariants.
    #[error("invalid state: {invariant} violated (residual {residual:.3e})")]
    InvalidState { invariant: &'static str, residual: f64 },

    #[error("numerical failure in {what} (residual {residual:.3e})")]
    NumericalFailure { what: &'static str, residual: f64 },

    #[error("invalid projection: {0}")]
    InvalidProjection(String),

    #[error("canonicalization failed (residual {residual:.3e})")]
    Canonicalization { residual: f64 },

    #[error("quadrature failed at E = {at}: estimated error {estimate:.3e} after {segments} segments")]
    Integration { at: f64, estimate: f64, segments: usize },

    #[error("domain error: {0}")]
    Domain(String),

    /// Reconstruction extras do not reproduce the requested marker.
    #[error("inconsistent {marker}: requested {requested}, extras give {obtained}")]
    Inconsistent { marker: &'static str, requested: f64, obtained: f64 },

    #[error("universal curve unavailable: {0}")]
    UniversalUnavailable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
