// Copyright 2026 The supop Authors
// SPDX-License-Identifier: Apache-2.0

//! Truncated single-mode Fock space.
//!
//! States live in the number basis |0⟩ … |cutoff−1⟩. Pure states are
//! [`FockVector`]s, mixed states are dense [`DensityMatrix`]es; operators are
//! dense [`OperatorMatrix`]es carrying a label for what they represent.

use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{laguerre_assoc_seq, ln_factorial};

/// Largest tail mass a constructor may drop.
pub const TAIL_TOLERANCE: f64 = 1e-12;
/// Hermiticity tolerance for density matrices.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Trace tolerance for normalized density matrices.
pub const TRACE_TOLERANCE: f64 = 1e-10;
/// Smallest trace [`normalize`] accepts.
pub const ZERO_TRACE: f64 = 1e-14;

/// Default cutoff for a state with mean photon number `mean`:
/// max(32, ⌈μ + 10√(μ+1)⌉).
pub fn default_cutoff(mean: f64) -> usize {
    let mu = mean.max(0.0);
    let policy = (mu + 10.0 * (mu + 1.0).sqrt()).ceil() as usize;
    policy.max(32)
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < 2 {
        Err(Error::InvalidCutoff(cutoff))
    } else {
        Ok(())
    }
}

/// A pure state as amplitudes in the truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    /// Wraps amplitudes whose squared norm lies in (0, 1].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_cutoff(amplitudes.len())?;
        let norm = norm_sqr(&amplitudes);
        if !norm.is_finite() || norm <= 0.0 || norm > 1.0 + 1e-10 {
            return Err(Error::OutOfRange { name: "squared norm", value: norm });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes arbitrary amplitudes and returns the squared norm they had.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<(Self, f64)> {
        check_cutoff(amplitudes.len())?;
        let norm = norm_sqr(&amplitudes);
        if !norm.is_finite() || norm <= ZERO_TRACE {
            return Err(Error::ZeroTrace(norm));
        }
        let scale = norm.sqrt().recip();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        Ok((Self { amplitudes }, norm))
    }

    /// The number state |n⟩.
    pub fn number(n: usize, cutoff: usize) -> Result<Self> {
        check_cutoff(cutoff)?;
        if n >= cutoff {
            return Err(Error::DimensionMismatch { expected: cutoff, found: n + 1 });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// ⟨self|other⟩, over the common prefix of the two bases.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨a|b⟩|² / (‖a‖²‖b‖²).
    pub fn fidelity(&self, other: &FockVector) -> f64 {
        self.inner(other).norm_sqr() / (self.norm_sqr() * other.norm_sqr())
    }

    /// |ψ⟩⟨ψ|
    pub fn to_density(&self) -> DensityMatrix {
        let d = self.cutoff();
        let elements = DMatrix::from_fn(d, d, |m, n| self.amplitudes[m] * self.amplitudes[n].conj());
        DensityMatrix { elements }
    }
}

fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

/// A mixed state ρ(m, n) = ⟨m|ρ|n⟩ in the truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    elements: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Takes a square Hermitian matrix; the trace is not required to be 1.
    pub fn from_matrix(elements: DMatrix<Complex64>) -> Result<Self> {
        if elements.nrows() != elements.ncols() {
            return Err(Error::DimensionMismatch { expected: elements.nrows(), found: elements.ncols() });
        }
        check_cutoff(elements.nrows())?;
        let rho = Self { elements };
        let dev = rho.hermiticity_deviation();
        if dev > HERMITIAN_TOLERANCE * rho.max_abs().max(1.0) {
            return Err(Error::Invalid(format!("matrix not Hermitian (deviation {dev:.3e})")));
        }
        Ok(rho)
    }

    /// Diagonal state from photon-number probabilities.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        check_cutoff(populations.len())?;
        if populations.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Invalid("populations must be finite and non-negative".into()));
        }
        let d = populations.len();
        let elements = DMatrix::from_fn(d, d, |m, n| {
            if m == n { Complex64::new(populations[m], 0.0) } else { Complex64::new(0.0, 0.0) }
        });
        Ok(Self { elements })
    }

    pub(crate) fn from_matrix_unchecked(elements: DMatrix<Complex64>) -> Self {
        Self { elements }
    }

    pub fn cutoff(&self) -> usize {
        self.elements.nrows()
    }

    pub fn elements(&self) -> &DMatrix<Complex64> {
        &self.elements
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.elements[(m, n)]
    }

    pub fn trace(&self) -> f64 {
        self.elements.diagonal().iter().map(|z| z.re).sum()
    }

    /// max |ρ(m,n) − conj(ρ(n,m))|
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.cutoff();
        let mut dev: f64 = 0.0;
        for m in 0..d {
            for n in m..d {
                dev = dev.max((self.elements[(m, n)] - self.elements[(n, m)].conj()).norm());
            }
        }
        dev
    }

    fn max_abs(&self) -> f64 {
        self.elements.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.elements + self.elements.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Hermitian to 1e−12, unit trace to 1e−10, eigenvalues ≥ −1e−10.
    pub fn is_physical(&self) -> bool {
        self.hermiticity_deviation() <= HERMITIAN_TOLERANCE
            && (self.trace() - 1.0).abs() <= TRACE_TOLERANCE
            && self.min_eigenvalue() >= -1e-10
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.cutoff();
        (0..d).all(|m| (0..d).all(|n| m == n || self.elements[(m, n)] == Complex64::new(0.0, 0.0)))
    }

    /// Number of leading basis states that carry the state: the smallest `k`
    /// with Σ_{n ≥ k} ρ(n,n) ≤ `tol`. Off-diagonal entries beyond it are
    /// bounded by √(ρ(m,m)ρ(n,n)) ≤ `tol`.
    pub fn support(&self, tol: f64) -> usize {
        let mut tail = 0.0;
        let d = self.cutoff();
        for k in (0..d).rev() {
            tail += self.elements[(k, k)].re.abs();
            if tail > tol {
                return (k + 1).max(2);
            }
        }
        2
    }

    /// Row-major CSV dump, one "re,im" pair per matrix cell.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        write_matrix_csv(&self.elements, out)
    }
}

/// What an [`OperatorMatrix`] stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Annihilation,
    Creation,
    Number,
    Displacement,
    General,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    elements: DMatrix<Complex64>,
    kind: OperatorKind,
}

impl OperatorMatrix {
    pub fn new(elements: DMatrix<Complex64>, kind: OperatorKind) -> Result<Self> {
        if elements.nrows() != elements.ncols() {
            return Err(Error::DimensionMismatch { expected: elements.nrows(), found: elements.ncols() });
        }
        check_cutoff(elements.nrows())?;
        Ok(Self { elements, kind })
    }

    pub fn elements(&self) -> &DMatrix<Complex64> {
        &self.elements
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn cutoff(&self) -> usize {
        self.elements.nrows()
    }

    /// Product `self · rhs`, labelled as a general operator.
    pub fn compose(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.cutoff() != rhs.cutoff() {
            return Err(Error::DimensionMismatch { expected: self.cutoff(), found: rhs.cutoff() });
        }
        Ok(OperatorMatrix { elements: &self.elements * &rhs.elements, kind: OperatorKind::General })
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        let kind = match self.kind {
            OperatorKind::Annihilation => OperatorKind::Creation,
            OperatorKind::Creation => OperatorKind::Annihilation,
            other => other,
        };
        OperatorMatrix { elements: self.elements.adjoint(), kind }
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        write_matrix_csv(&self.elements, out)
    }
}

fn write_matrix_csv<W: Write>(m: &DMatrix<Complex64>, out: &mut W) -> io::Result<()> {
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|c| format!("{:.16e},{:.16e}", m[(r, c)].re, m[(r, c)].im))
            .collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// |α⟩ with amplitudes exp(−|α|²/2) αⁿ/√(n!), evaluated in log space.
pub fn coherent_state(alpha: Complex64, cutoff: usize) -> Result<FockVector> {
    check_cutoff(cutoff)?;
    let mean = alpha.norm_sqr();
    if !mean.is_finite() {
        return Err(Error::OutOfRange { name: "|alpha|^2", value: mean });
    }
    if mean > cutoff as f64 / 4.0 {
        return Err(Error::Truncation { context: "coherent state (|alpha|^2 > cutoff/4)", residual: mean });
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff];
    if mean == 0.0 {
        amplitudes[0] = Complex64::new(1.0, 0.0);
        return FockVector::new(amplitudes);
    }
    let (r, phase) = alpha.to_polar();
    let ln_r = r.ln();
    for (n, a) in amplitudes.iter_mut().enumerate() {
        let ln_mag = -0.5 * mean + n as f64 * ln_r - 0.5 * ln_factorial(n);
        *a = Complex64::from_polar(ln_mag.exp(), n as f64 * phase);
    }
    let kept: f64 = norm_sqr(&amplitudes);
    let tail = (1.0 - kept).max(0.0);
    if tail > TAIL_TOLERANCE {
        return Err(Error::Truncation { context: "coherent state tail", residual: tail });
    }
    FockVector::new(amplitudes)
}

/// Thermal state with mean photon number `nbar`, renormalized on the truncated basis.
pub fn thermal_state(nbar: f64, cutoff: usize) -> Result<DensityMatrix> {
    check_cutoff(cutoff)?;
    if !nbar.is_finite() || nbar < 0.0 {
        return Err(Error::OutOfRange { name: "nbar", value: nbar });
    }
    let ratio = nbar / (1.0 + nbar);
    // exact geometric tail mass Σ_{n ≥ cutoff} p_n
    let tail = ratio.powi(cutoff as i32);
    if tail > TAIL_TOLERANCE {
        return Err(Error::Truncation { context: "thermal state tail", residual: tail });
    }
    let mut populations: Vec<f64> = (0..cutoff).map(|n| ratio.powi(n as i32) / (1.0 + nbar)).collect();
    let sum: f64 = populations.iter().sum();
    populations.iter_mut().for_each(|p| *p /= sum);
    DensityMatrix::diagonal(&populations)
}

/// (â, â†) on the truncated basis.
pub fn ladder_matrices(cutoff: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    check_cutoff(cutoff)?;
    let a = DMatrix::from_fn(cutoff, cutoff, |m, n| {
        if n == m + 1 { Complex64::new((n as f64).sqrt(), 0.0) } else { Complex64::new(0.0, 0.0) }
    });
    let adag = a.adjoint();
    Ok((
        OperatorMatrix { elements: a, kind: OperatorKind::Annihilation },
        OperatorMatrix { elements: adag, kind: OperatorKind::Creation },
    ))
}

/// n̂ = diag(0, 1, …, cutoff−1).
pub fn number_operator(cutoff: usize) -> Result<OperatorMatrix> {
    check_cutoff(cutoff)?;
    let elements = DMatrix::from_fn(cutoff, cutoff, |m, n| {
        if m == n { Complex64::new(m as f64, 0.0) } else { Complex64::new(0.0, 0.0) }
    });
    Ok(OperatorMatrix { elements, kind: OperatorKind::Number })
}

/// Exact matrix elements ⟨m|D(β)|n⟩ for m < rows, n < cols.
///
/// For m ≥ n: √(n!/m!) β^{m−n} e^{−|β|²/2} L_n^{(m−n)}(|β|²); the m < n
/// entries follow from ⟨m|D(β)|n⟩ = (−1)^{n−m} conj(⟨n|D(β)|m⟩).
/// Unlike a truncated matrix exponential, every entry is exact.
pub fn displacement_block(beta: Complex64, rows: usize, cols: usize) -> DMatrix<Complex64> {
    let mut out = DMatrix::from_element(rows, cols, Complex64::new(0.0, 0.0));
    if rows == 0 || cols == 0 {
        return out;
    }
    let x = beta.norm_sqr();
    if x == 0.0 {
        for k in 0..rows.min(cols) {
            out[(k, k)] = Complex64::new(1.0, 0.0);
        }
        return out;
    }
    let (r, phase) = beta.to_polar();
    let ln_r = r.ln();
    let dim = rows.max(cols);
    for offset in 0..dim {
        // entries (lower + offset, lower) with lower running over the diagonal
        // every stored entry has its smaller index below `rows`
        let n_max = (dim - 1 - offset).min(rows - 1);
        let lag = laguerre_assoc_seq(n_max, offset, x);
        let rot = Complex64::from_polar(1.0, offset as f64 * phase);
        for (lower, l) in lag.iter().enumerate() {
            let upper = lower + offset;
            let ln_mag = 0.5 * (ln_factorial(lower) - ln_factorial(upper)) + offset as f64 * ln_r - 0.5 * x;
            let value = rot * (ln_mag.exp() * l);
            if upper < rows && lower < cols {
                out[(upper, lower)] = value;
            }
            if offset > 0 && lower < rows && upper < cols {
                let sign = if offset % 2 == 0 { 1.0 } else { -1.0 };
                out[(lower, upper)] = value.conj() * sign;
            }
        }
    }
    out
}

/// Size of the leading block on which a cutoff-`cutoff` displacement by β is
/// unitary to working precision: n < ⌊(√cutoff − |β| − 1.5)²⌋.
pub fn displacement_check_block(beta: Complex64, cutoff: usize) -> usize {
    let room = (cutoff as f64).sqrt() - beta.norm() - 1.5;
    if room <= 0.0 {
        0
    } else {
        ((room * room).floor() as usize).min(cutoff)
    }
}

/// Truncated D(β) = exp(β â† − β* â), checked for unitarity on the leading block.
pub fn displacement_matrix(beta: Complex64, cutoff: usize) -> Result<OperatorMatrix> {
    check_cutoff(cutoff)?;
    if !beta.re.is_finite() || !beta.im.is_finite() {
        return Err(Error::OutOfRange { name: "|beta|", value: beta.norm() });
    }
    let d = displacement_block(beta, cutoff, cutoff);
    let block = displacement_check_block(beta, cutoff);
    if block == 0 {
        return Err(Error::Unitarity(f64::INFINITY));
    }
    let dev = unitarity_deviation(&d, block);
    if dev > 1e-8 {
        return Err(Error::Unitarity(dev));
    }
    Ok(OperatorMatrix { elements: d, kind: OperatorKind::Displacement })
}

/// max |(U†U − I)(m,n)| over m, n < block.
pub fn unitarity_deviation(u: &DMatrix<Complex64>, block: usize) -> f64 {
    let prod = u.adjoint() * u;
    let mut dev: f64 = 0.0;
    for m in 0..block {
        for n in 0..block {
            let id = if m == n { 1.0 } else { 0.0 };
            dev = dev.max((prod[(m, n)] - id).norm());
        }
    }
    dev
}

/// Tr(ρ · op)
pub fn expectation(op: &OperatorMatrix, rho: &DensityMatrix) -> Result<Complex64> {
    if op.cutoff() != rho.cutoff() {
        return Err(Error::DimensionMismatch { expected: rho.cutoff(), found: op.cutoff() });
    }
    let (r, o) = (rho.elements(), op.elements());
    let d = rho.cutoff();
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..d {
        for n in 0..d {
            acc += r[(m, n)] * o[(n, m)];
        }
    }
    Ok(acc)
}

/// Divides ρ by its trace; returns the trace it had.
pub fn normalize(rho: &DensityMatrix) -> Result<(DensityMatrix, f64)> {
    let trace = rho.trace();
    if !trace.is_finite() || trace <= ZERO_TRACE {
        return Err(Error::ZeroTrace(trace));
    }
    let elements = rho.elements() / Complex64::new(trace, 0.0);
    Ok((DensityMatrix { elements }, trace))
}
