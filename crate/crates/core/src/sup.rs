// Copyright 2026 The supop Authors
// SPDX-License-Identifier: Apache-2.0

//! The superposed product operation Â = s·ââ† + t·â†â = s + (s+t)·n̂.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{normalize, DensityMatrix, FockVector, OperatorKind, OperatorMatrix};

/// The weight pair (s, t) with s = √(1 − t²) ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupParams {
    s: f64,
    t: f64,
}

impl SupParams {
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// s + t, the weight of n̂ in Â.
    pub fn slope(&self) -> f64 {
        self.s + self.t
    }

    /// Diagonal of Â at photon number n.
    pub fn weight(&self, n: usize) -> f64 {
        self.s + self.slope() * n as f64
    }

    /// t = −1/√2, where Â = I/√2.
    pub fn identity_point() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { s: h, t: -h }
    }
}

/// Builds (s, t) on the principal branch s = √(1 − t²).
pub fn sup_params(t: f64) -> Result<SupParams> {
    if !t.is_finite() || t.abs() > 1.0 {
        return Err(Error::OutOfRange { name: "t", value: t });
    }
    Ok(SupParams { s: (1.0 - t * t).max(0.0).sqrt(), t })
}

/// diag(s + (s+t)n) on the truncated basis.
pub fn sup_operator_matrix(params: SupParams, cutoff: usize) -> Result<OperatorMatrix> {
    let elements = DMatrix::from_fn(cutoff, cutoff, |m, n| {
        if m == n { Complex64::new(params.weight(n), 0.0) } else { Complex64::new(0.0, 0.0) }
    });
    OperatorMatrix::new(elements, OperatorKind::General)
}

/// Â ρ Â / N, with N = Tr(Â ρ Â) returned alongside.
///
/// Â is diagonal, so the product is ρ(m,n)·w_m·w_n and diagonal inputs stay diagonal.
pub fn apply_sup(rho: &DensityMatrix, params: SupParams) -> Result<(DensityMatrix, f64)> {
    let d = rho.cutoff();
    let w: Vec<f64> = (0..d).map(|n| params.weight(n)).collect();
    let src = rho.elements();
    let out = DMatrix::from_fn(d, d, |m, n| src[(m, n)] * (w[m] * w[n]));
    normalize(&DensityMatrix::from_matrix_unchecked(out))
}

/// Â|ψ⟩ normalized, with ‖Â|ψ⟩‖² returned alongside.
pub fn apply_sup_pure(psi: &FockVector, params: SupParams) -> Result<(FockVector, f64)> {
    let amps = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, a)| a * params.weight(n))
        .collect();
    FockVector::normalized(amps)
}

/// N₁ = s² + (s+t)(3s+t)|α|² + (s+t)²|α|⁴ for a coherent input.
pub fn norm_socs(params: SupParams, alpha: Complex64) -> f64 {
    let (s, t) = (params.s, params.t);
    let m = alpha.norm_sqr();
    s * s + (s + t) * (3.0 * s + t) * m + (s + t).powi(2) * m * m
}

/// N₂ = s²(1+n̄)(1+2n̄) + 4st·n̄(1+n̄) + t²n̄(1+2n̄) for a thermal input.
pub fn norm_sots(params: SupParams, nbar: f64) -> f64 {
    let (s, t) = (params.s, params.t);
    s * s * (1.0 + nbar) * (1.0 + 2.0 * nbar) + 4.0 * s * t * nbar * (1.0 + nbar) + t * t * nbar * (1.0 + 2.0 * nbar)
}
