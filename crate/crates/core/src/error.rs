// Copyright 2026 The supop Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the Fock-space engine, the indicators and the scheme simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cutoff {0} is too small (need at least 2)")]
    InvalidCutoff(usize),

    #[error("truncation not converged in {context}: residual {residual:.3e}")]
    Truncation { context: &'static str, residual: f64 },

    #[error("displacement matrix not unitary on the checked block: deviation {0:.3e}")]
    Unitarity(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("trace {0:.3e} is zero; the operation annihilated the state")]
    ZeroTrace(f64),

    #[error("{name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("closed form is degenerate: normalization {0:.3e}")]
    DegenerateState(f64),

    #[error("ordering parameter F = {0} is at or beyond the singular limit")]
    OrderingSingularity(f64),

    #[error("negativity disc is undefined: {0}")]
    DegenerateDisc(&'static str),

    #[error("integration domain too small: quadrature normalization {0:.8}")]
    DomainTooSmall(f64),

    #[error("Mandel Q undefined for mean photon number {0:.3e}")]
    UndefinedQ(f64),

    #[error("mode {0} used twice in a two-mode operation")]
    ModeCollision(usize),

    #[error("heralding pattern has probability {0:.3e}")]
    ZeroProbability(f64),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("invalid scheme configuration: {0}")]
    Config(String),
}

impl Error {
    /// True for errors caused by bad inputs rather than by numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidCutoff(_)
                | Error::DimensionMismatch { .. }
                | Error::OutOfRange { .. }
                | Error::OrderingSingularity(_)
                | Error::ModeCollision(_)
                | Error::Invalid(_)
                | Error::Config(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
