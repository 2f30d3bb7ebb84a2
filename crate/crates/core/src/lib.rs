// Copyright 2026 The supop Authors
// SPDX-License-Identifier: Apache-2.0

//! Superposed photon-number operations (s·ââ† + t·â†â) on coherent and
//! thermal light, in a truncated single-mode Fock space.
//!
//! The crate is layered: [`fock`] holds states and operators, [`sup`] the
//! operation itself, [`quasiprob`] phase-space distributions, [`indicators`]
//! scalar nonclassicality measures and [`scheme`] a multimode simulation of an
//! optical setup that realizes the operation by heralding.

pub mod error;
pub mod fock;
pub mod indicators;
pub mod phase;
pub mod quasiprob;
pub mod scheme;
pub mod special;
pub mod sup;

pub use error::{Error, Result};
pub use fock::{coherent_state, thermal_state, DensityMatrix, FockVector, OperatorKind, OperatorMatrix};
pub use num_complex::Complex64;
pub use phase::{GridSpec, PhaseGrid, PhasePoint};
pub use quasiprob::OrderingParameter;
pub use sup::{apply_sup, sup_params, SupParams};
