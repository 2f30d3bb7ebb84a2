// Copyright 2026 The supop Authors
// SPDX-License-Identifier: Apache-2.0

//! Phase-space distributions.
//!
//! Two independent routes are provided for every distribution of a
//! SUP-operated state:
//!
//! * the generic engines [`wigner_series`] (displaced-number-state parity sum)
//!   and [`quasiprob_f`] (trace against the number-basis elements of T̂^(F)),
//!   which only see a [`DensityMatrix`];
//! * closed forms for coherent and thermal inputs ([`wigner_socs_closed`],
//!   [`wigner_sots_closed`], [`quasiprob_sots_closed`]).
//!
//! The `*_transcribed` functions are literal transcriptions of published closed
//! forms that do not agree with the engines. They are kept for reporting.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{displacement_block, DensityMatrix};
use crate::phase::PhasePoint;
use crate::special::{ln_factorial, scaled_laguerre_seq};
use crate::sup::{norm_socs, norm_sots, SupParams};

/// Largest ordering parameter accepted; F → 1 is the singular P-function limit.
pub const F_MAX: f64 = 0.99;

const DEGENERATE_NORM: f64 = 1e-14;
/// Tail of the k-sum in [`wigner_series`].
const SERIES_TAIL: f64 = 1e-10;
/// Absolute contribution allowed from the last (n, m) shell in [`quasiprob_f`].
const SHELL_TAIL: f64 = 1e-12;
/// Diagonal mass below which basis states are dropped when T̂^(F) is bounded (F ≤ 0).
const SUPPORT_TAIL: f64 = 1e-28;

/// Operator-ordering parameter F ∈ [−1, 0.99]: −1 Husimi, 0 Wigner, → 1 Glauber–Sudarshan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderingParameter(f64);

impl OrderingParameter {
    pub fn new(f: f64) -> Result<Self> {
        if f.is_nan() || f < -1.0 {
            return Err(Error::OutOfRange { name: "F", value: f });
        }
        if f > F_MAX {
            return Err(Error::OrderingSingularity(f));
        }
        Ok(Self(f))
    }

    pub const WIGNER: OrderingParameter = OrderingParameter(0.0);
    pub const HUSIMI: OrderingParameter = OrderingParameter(-1.0);

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Circle of radius `radius` centred on `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativityDisc {
    pub center: PhasePoint,
    pub radius: f64,
}

impl NegativityDisc {
    /// Signed distance of `p` from the boundary, negative inside.
    pub fn signed_distance(&self, p: PhasePoint) -> f64 {
        (p.beta() - self.center.beta()).norm() - self.radius
    }
}

/// (2/π) e^{−2|β−α|²}
pub fn wigner_coherent(alpha: Complex64, beta: PhasePoint) -> f64 {
    2.0 / PI * (-2.0 * (beta.beta() - alpha).norm_sqr()).exp()
}

/// (2/π) (1+2n̄)⁻¹ e^{−2|β|²/(1+2n̄)}
pub fn wigner_thermal(nbar: f64, beta: PhasePoint) -> f64 {
    let w = 1.0 + 2.0 * nbar;
    2.0 / PI / w * (-2.0 * beta.beta().norm_sqr() / w).exp()
}

/// Default number of displaced-number terms for [`wigner_series`].
pub fn default_k_max(cutoff: usize, support: usize, beta: PhasePoint) -> usize {
    let r = beta.beta().norm();
    cutoff.max(support + (r * r + 10.0 * r).ceil() as usize + 16)
}

/// W(β) = (2/π) Σ_{k<k_max} (−1)^k ⟨k|D†(β) ρ D(β)|k⟩.
///
/// The displacement elements are exact (closed form on a rectangular block),
/// so the only truncation is the k-sum itself; its last term must be below 1e−10.
pub fn wigner_series(rho: &DensityMatrix, beta: PhasePoint, k_max: Option<usize>) -> Result<f64> {
    if !beta.is_finite() {
        return Err(Error::OutOfRange { name: "|beta|", value: f64::INFINITY });
    }
    let support = rho.support(SUPPORT_TAIL);
    let k_max = k_max.unwrap_or_else(|| default_k_max(rho.cutoff(), support, beta));
    if k_max == 0 {
        return Err(Error::Invalid("k_max must be positive".into()));
    }
    let d = displacement_block(beta.beta(), support, k_max);
    let r = rho.elements().view((0, 0), (support, support));
    let rd = r * &d;
    let mut total = 0.0;
    let mut last = 0.0;
    for k in 0..k_max {
        let mut diag = Complex64::new(0.0, 0.0);
        for m in 0..support {
            diag += d[(m, k)].conj() * rd[(m, k)];
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * diag.re;
        last = diag.norm();
    }
    if last >= SERIES_TAIL {
        return Err(Error::Truncation { context: "Wigner displaced-number sum", residual: last });
    }
    Ok(2.0 / PI * total)
}

/// Closed-form Wigner function of the SUP-operated coherent state:
/// W_coh N₁⁻¹ [M₁² + 2(s+t)M₁(α*β + αβ*) + (s+t)²|α|²(4|β|² − 1)], M₁ = s − (s+t)|α|².
pub fn wigner_socs_closed(params: SupParams, alpha: Complex64, beta: PhasePoint) -> Result<f64> {
    let n1 = norm_socs(params, alpha);
    if n1 <= DEGENERATE_NORM {
        return Err(Error::DegenerateState(n1));
    }
    let c = params.slope();
    let a2 = alpha.norm_sqr();
    let b = beta.beta();
    let m1 = params.s() - c * a2;
    let cross = 2.0 * (alpha.conj() * b).re;
    let bracket = m1 * m1 + 2.0 * c * m1 * cross + c * c * a2 * (4.0 * b.norm_sqr() - 1.0);
    Ok(wigner_coherent(alpha, beta) * bracket / n1)
}

/// Closed-form Wigner function of the SUP-operated thermal state.
///
/// With c = s+t and M₂ = 4n̄(1+n̄)c|β|²/(1+2n̄)²:
///
/// W = W_th N₂⁻¹ [(M₂+s)² + c M₂ (1−2n̄)/(1+2n̄) − c n̄ (c + 2s(1+2n̄))/(1+2n̄)²]
///
/// obtained by applying (s + c·λ∂_λ)² to the Wigner function of λ^n̂, λ = n̄/(1+n̄).
/// It agrees with [`wigner_series`]; [`wigner_sots_transcribed`] does not.
pub fn wigner_sots_closed(params: SupParams, nbar: f64, beta: PhasePoint) -> Result<f64> {
    let n2 = norm_sots(params, nbar);
    if n2 <= DEGENERATE_NORM {
        return Err(Error::DegenerateState(n2));
    }
    let (s, c) = (params.s(), params.slope());
    let w = 1.0 + 2.0 * nbar;
    let m2 = sots_m2(params, nbar, beta);
    let bracket = (m2 + s).powi(2) + c * m2 * (1.0 - 2.0 * nbar) / w - c * nbar * (c + 2.0 * s * w) / (w * w);
    Ok(wigner_thermal(nbar, beta) * bracket / n2)
}

/// Literal transcription W_th N₂⁻¹[(M₂+s)² + (s+t)M₂]; exact only at the identity
/// point and at n̄ = 0.
pub fn wigner_sots_transcribed(params: SupParams, nbar: f64, beta: PhasePoint) -> Result<f64> {
    let n2 = norm_sots(params, nbar);
    if n2 <= DEGENERATE_NORM {
        return Err(Error::DegenerateState(n2));
    }
    let m2 = sots_m2(params, nbar, beta);
    Ok(wigner_thermal(nbar, beta) * ((m2 + params.s()).powi(2) + params.slope() * m2) / n2)
}

fn sots_m2(params: SupParams, nbar: f64, beta: PhasePoint) -> f64 {
    4.0 * nbar * (1.0 + nbar) / (1.0 + 2.0 * nbar).powi(2) * params.slope() * beta.beta().norm_sqr()
}

/// Per-point constants of the T̂^(F)(β) number-basis elements.
struct TKernel {
    ln_q: f64,
    ln_beta: f64,
    arg_beta: f64,
    gauss: f64,
    c: f64,
    w: f64,
}

impl TKernel {
    fn new(beta: Complex64, f: OrderingParameter) -> Self {
        let f = f.value();
        let b2 = beta.norm_sqr();
        Self {
            ln_q: (2.0 / (1.0 - f)).ln(),
            ln_beta: if b2 > 0.0 { beta.norm().ln() } else { f64::NEG_INFINITY },
            arg_beta: beta.arg(),
            gauss: -2.0 * b2 / (1.0 - f),
            // c = (F+1)/(F−1), and w = −c·4|β|²/(1−F²) = 4|β|²/(1−F)²
            c: (f + 1.0) / (f - 1.0),
            w: 4.0 * b2 / (1.0 - f).powi(2),
        }
    }

    /// Elements ⟨n|T|n+k⟩ for n = 0..len.
    fn offset_elements(&self, k: usize, len: usize) -> impl Iterator<Item = Complex64> + '_ {
        let seq = scaled_laguerre_seq(len.saturating_sub(1), k, self.c, self.w);
        let phase = Complex64::from_polar(1.0, -(k as f64) * self.arg_beta);
        let ln_base = (k as f64 + 1.0) * self.ln_q + self.gauss
            + if k == 0 { 0.0 } else { k as f64 * self.ln_beta };
        seq.into_iter().enumerate().map(move |(n, y)| {
            if ln_base == f64::NEG_INFINITY {
                return Complex64::new(0.0, 0.0);
            }
            let ln_mag = ln_base + 0.5 * (ln_factorial(n) - ln_factorial(n + k));
            phase * (ln_mag.exp() * y)
        })
    }
}

/// ⟨n|T̂^(F)(β)|m⟩.
///
/// For m ≥ n: √(n!/m!) (2/(1−F))^{m−n+1} ((F+1)/(F−1))ⁿ (β*)^{m−n} e^{−2|β|²/(1−F)} L_n^{(m−n)}(4|β|²/(1−F²)),
/// and the conjugate of the transposed element otherwise. The factor
/// ((F+1)/(F−1))ⁿ L_n is carried by a scaled recurrence, which keeps F = −1 finite.
pub fn t_f_matrix_element(n: usize, m: usize, beta: PhasePoint, f: OrderingParameter) -> Complex64 {
    let (lo, hi) = if m >= n { (n, m) } else { (m, n) };
    let kernel = TKernel::new(beta.beta(), f);
    let value = kernel.offset_elements(hi - lo, lo + 1).last().expect("non-empty");
    if m >= n { value } else { value.conj() }
}

/// ℧^(F)(β) = (1/π) Tr{ρ T̂^(F)(β)} = (1/π) Σ_{n,m} ρ(m,n) ⟨n|T̂^(F)|m⟩.
///
/// Fails with a truncation error when the last photon-number shell still
/// contributes 1e−12 or more: for F > 0 the elements grow like
/// |(F+1)/(F−1)|ⁿ and the sum may not converge for slowly decaying states.
/// Also fails when rounding in the cancelling sum can reach 1e−12.
pub fn quasiprob_f(rho: &DensityMatrix, beta: PhasePoint, f: OrderingParameter) -> Result<f64> {
    if !beta.is_finite() {
        return Err(Error::OutOfRange { name: "|beta|", value: f64::INFINITY });
    }
    // one extra shell past the support so the tail test sees a converged row
    let d = if f.value() <= 0.0 { (rho.support(SUPPORT_TAIL) + 1).min(rho.cutoff()) } else { rho.cutoff() };
    let offsets = if rho.is_diagonal() { 1 } else { d };
    let kernel = TKernel::new(beta.beta(), f);
    let r = rho.elements();
    let mut shells = vec![0.0f64; d];
    let mut total = 0.0;
    for k in 0..offsets {
        for (n, t) in kernel.offset_elements(k, d - k).enumerate() {
            let m = n + k;
            let term = (r[(m, n)] * t).re;
            let contribution = if k == 0 { term } else { 2.0 * term };
            total += contribution;
            shells[m] += contribution.abs();
        }
    }
    let last = shells[d - 1];
    if !total.is_finite() || last >= SHELL_TAIL {
        return Err(Error::Truncation { context: "quasiprobability (n, m) sum", residual: last });
    }
    // rounding in the alternating sum scales with the absolute series
    let rounding = shells.iter().sum::<f64>() * f64::EPSILON;
    if rounding >= SHELL_TAIL {
        return Err(Error::Truncation { context: "quasiprobability cancellation", residual: rounding });
    }
    Ok(total / PI)
}

/// ℧^(F)(β) of the SUP-operated thermal state in closed form.
///
/// The thermal number-basis series Σ [s+(s+t)n]² zⁿ Lₙ(X), z = λ(F+1)/(F−1),
/// is resummed through the Laguerre generating function
/// g(z) = e^{−Xz/(1−z)}/(1−z) as (s + (s+t) z∂_z)² g. The resummed form is
/// the analytic continuation of the series and stays finite where the series
/// itself diverges (|z| ≥ 1, i.e. F close to 1).
pub fn quasiprob_sots_closed(params: SupParams, nbar: f64, beta: PhasePoint, f: OrderingParameter) -> Result<f64> {
    let n2 = norm_sots(params, nbar);
    if n2 <= DEGENERATE_NORM {
        return Err(Error::DegenerateState(n2));
    }
    let fv = f.value();
    let (s, c) = (params.s(), params.slope());
    let lambda = nbar / (1.0 + nbar);
    let b2 = beta.beta().norm_sqr();
    let z = lambda * (fv + 1.0) / (fv - 1.0);
    // u = X z with X = 4|β|²/(1−F²); finite at F = −1
    let u = -4.0 * lambda * b2 / (1.0 - fv).powi(2);
    let one_z = 1.0 - z;
    let g = (-u / one_z).exp() / one_z;
    let h1 = -u / one_z.powi(2) + z / one_z;
    let h2 = -u / one_z.powi(2) - 2.0 * u * z / one_z.powi(3) + z / one_z.powi(2);
    let shaped = s * s + 2.0 * s * c * h1 + c * c * (h1 * h1 + h2);
    let prefactor = (1.0 - lambda) * (2.0 / (1.0 - fv)) * (-2.0 * b2 / (1.0 - fv)).exp();
    Ok(prefactor * g * shaped / (PI * n2))
}

/// Literal transcription of the published F-parametrized distribution of the
/// SUP-operated coherent state. It keeps only the ⟨n|T|n⟩ and ⟨n±1|T|n⟩
/// families with |α|^{2n} weights and does not match [`quasiprob_f`].
pub fn quasiprob_socs_transcribed(params: SupParams, alpha: Complex64, beta: PhasePoint, f: OrderingParameter) -> Result<f64> {
    let n1 = norm_socs(params, alpha);
    if n1 <= DEGENERATE_NORM {
        return Err(Error::DegenerateState(n1));
    }
    let (s, c) = (params.s(), params.slope());
    let x = alpha.norm_sqr();
    let fv = f.value();
    let q = 2.0 / (1.0 - fv);
    let coherent = q * (-q * (beta.beta() - alpha).norm_sqr()).exp();
    let terms = 60;
    let kernel = TKernel::new(beta.beta(), f);
    let diag: Vec<Complex64> = kernel.offset_elements(0, terms + 1).collect();
    // ⟨n|T|n+1⟩; ⟨n+1|T|n⟩ is its conjugate
    let upper: Vec<Complex64> = kernel.offset_elements(1, terms).collect();
    let mut lower_sum = Complex64::new(0.0, 0.0);
    let mut upper_sum = Complex64::new(0.0, 0.0);
    let mut diag_sum = Complex64::new(0.0, 0.0);
    for n in 0..terms {
        let weight = if x > 0.0 { (n as f64 * x.ln() - ln_factorial(n)).exp() } else if n == 0 { 1.0 } else { 0.0 };
        let root = ((n + 1) as f64).sqrt();
        lower_sum += upper[n].conj() * (root * weight);
        upper_sum += upper[n] * (root * weight);
        diag_sum += diag[n + 1] * ((n + 1) as f64 * weight);
    }
    let e = (-x).exp();
    let total = coherent * s * s
        + alpha.conj() * lower_sum * (s * c * e)
        + alpha * upper_sum * (s * c * e)
        + diag_sum * (c * c * x * e);
    Ok(total.re / (PI * n1))
}

/// Disc on which the SOCS Wigner function is negative.
///
/// Completing the square in the bracket of [`wigner_socs_closed`] gives
/// |β − β₀|² − 1/4 with β₀ = α/2 − sα/(2(s+t)|α|²): radius 1/2 for every t.
pub fn socs_negativity_disc(params: SupParams, alpha: Complex64) -> Result<NegativityDisc> {
    let c = params.slope();
    let a2 = alpha.norm_sqr();
    if c.abs() < 1e-12 {
        return Err(Error::DegenerateDisc("s + t = 0: the operation is the identity"));
    }
    if a2 == 0.0 {
        return Err(Error::DegenerateDisc("alpha = 0"));
    }
    let center = alpha * 0.5 - alpha * (params.s() / (2.0 * c * a2));
    Ok(NegativityDisc { center: center.into(), radius: 0.5 })
}
