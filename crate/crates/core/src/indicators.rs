// Copyright 2026 The supop Authors
// SPDX-License-Identifier: Apache-2.0

//! Scalar nonclassicality indicators: negative Wigner volume, Mandel Q and
//! optimal normally-ordered quadrature squeezing.
//!
//! The definitions are evaluated on density matrices. The published closed
//! forms (`*_closed`) are literal transcriptions kept for comparison only.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{coherent_state, default_cutoff, thermal_state, DensityMatrix};
use crate::phase::{GridSpec, PhaseGrid, PhasePoint};
use crate::quasiprob::{quasiprob_f, OrderingParameter};
use crate::sup::{apply_sup, norm_socs, norm_sots, sup_params, SupParams};

/// Minimum samples per axis for [`negative_volume`].
pub const MIN_RESOLUTION: usize = 201;
/// Default samples per axis for [`negative_volume`].
pub const DEFAULT_RESOLUTION: usize = 401;
/// Allowed deviation of the quadrature normalization from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-4;
/// |V| below this is reported as exactly zero.
pub const VOLUME_FLOOR: f64 = 1e-9;
const UNDEFINED_Q: f64 = 1e-14;

/// Low-order moments of â, enough for Q and S_opt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureMoments {
    /// ⟨â⟩
    pub a_mean: Complex64,
    /// ⟨â²⟩
    pub a_sq_mean: Complex64,
    /// ⟨â†â⟩
    pub n_mean: f64,
    /// ⟨â†²â²⟩
    pub n2_corr: f64,
}

impl QuadratureMoments {
    /// Reads the moments off the matrix elements:
    /// ⟨â⟩ = Σ √(n+1) ρ(n+1,n), ⟨â²⟩ = Σ √((n+1)(n+2)) ρ(n+2,n),
    /// ⟨n̂⟩ = Σ n ρ(n,n), ⟨â†²â²⟩ = Σ n(n−1) ρ(n,n).
    pub fn of(rho: &DensityMatrix) -> Self {
        let r = rho.elements();
        let d = rho.cutoff();
        let mut a_mean = Complex64::new(0.0, 0.0);
        let mut a_sq_mean = Complex64::new(0.0, 0.0);
        let (mut n_mean, mut n2_corr) = (0.0, 0.0);
        for n in 0..d {
            let nf = n as f64;
            let p = r[(n, n)].re;
            n_mean += nf * p;
            n2_corr += nf * (nf - 1.0) * p;
            if n + 1 < d {
                a_mean += r[(n + 1, n)] * (nf + 1.0).sqrt();
            }
            if n + 2 < d {
                a_sq_mean += r[(n + 2, n)] * ((nf + 1.0) * (nf + 2.0)).sqrt();
            }
        }
        Self { a_mean, a_sq_mean, n_mean, n2_corr }
    }

    /// ⟨:(ΔX̂_θ)²:⟩ for X̂_θ = â e^{−iθ} + â† e^{iθ}.
    pub fn normal_variance(&self, theta: f64) -> f64 {
        let centered = self.a_sq_mean - self.a_mean * self.a_mean;
        2.0 * (Complex64::from_polar(1.0, -2.0 * theta) * centered).re
            + 2.0 * (self.n_mean - self.a_mean.norm_sqr())
    }

    /// min over θ of the normally ordered variance.
    pub fn squeezing_opt(&self) -> f64 {
        let centered = self.a_sq_mean.conj() - self.a_mean.conj() * self.a_mean.conj();
        -2.0 * centered.norm() + 2.0 * self.n_mean - 2.0 * self.a_mean.norm_sqr()
    }

    /// Brute-force minimum of [`Self::normal_variance`] over θ = kπ/steps, k < steps.
    pub fn squeezing_theta_scan(&self, steps: usize) -> f64 {
        (0..steps.max(1))
            .map(|k| self.normal_variance(std::f64::consts::PI * k as f64 / steps as f64))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Q = (⟨â†²â²⟩ − ⟨n̂⟩²)/⟨n̂⟩.
pub fn mandel_q(rho: &DensityMatrix) -> Result<f64> {
    let m = QuadratureMoments::of(rho);
    if m.n_mean <= UNDEFINED_Q {
        return Err(Error::UndefinedQ(m.n_mean));
    }
    Ok((m.n2_corr - m.n_mean * m.n_mean) / m.n_mean)
}

/// S_opt = −2|⟨â†²⟩ − ⟨â†⟩²| + 2⟨â†â⟩ − 2|⟨â†⟩|².
pub fn squeezing_opt(rho: &DensityMatrix) -> f64 {
    QuadratureMoments::of(rho).squeezing_opt()
}

/// Published Q for the SUP-operated coherent state, with
/// K₁ = [(s+t)|α|² + (2s+t)]² + (s+t)²|α|².
pub fn q_socs_closed(params: SupParams, alpha: Complex64) -> f64 {
    let (s, t, c) = (params.s(), params.t(), params.slope());
    let x = alpha.norm_sqr();
    let k1 = (c * x + 2.0 * s + t).powi(2) + c * c * x;
    let n1 = norm_socs(params, alpha);
    -x / k1 / n1 * (k1 * (k1 - 1.0) - c * c * (2.0 * x + 3.0) - 2.0 * s * c)
}

/// Published Q for the SUP-operated thermal state, with
/// K₂ = 2(n̄+1)(s+t)[3n̄(s+t) + 2s] + t².
pub fn q_sots_closed(params: SupParams, nbar: f64) -> f64 {
    let (s, t, c) = (params.s(), params.t(), params.slope());
    let k2 = 2.0 * (nbar + 1.0) * c * (3.0 * nbar * c + 2.0 * s) + t * t;
    let n2 = norm_sots(params, nbar);
    -nbar / k2 / n2 * (k2 * (k2 - 3.0) - 6.0 * (nbar + 1.0).powi(2) * c * c + t * t)
}

/// Published S_opt for the coherent input: 2N₁⁻¹(s+t)²|α|².
pub fn s_socs_closed(params: SupParams, alpha: Complex64) -> f64 {
    2.0 * params.slope().powi(2) * alpha.norm_sqr() / norm_socs(params, alpha)
}

/// Published S_opt for the thermal input: 2N₂⁻¹n̄[2n̄(5s+3t)(s+t) + (2s+t)²].
pub fn s_sots_closed(params: SupParams, nbar: f64) -> f64 {
    let (s, t) = (params.s(), params.t());
    2.0 * nbar * (2.0 * nbar * (5.0 * s + 3.0 * t) * (s + t) + (2.0 * s + t).powi(2)) / norm_sots(params, nbar)
}

/// Output of [`negative_volume`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    /// ∫|W| − ∫W, clamped to 0 below 1e−9.
    pub volume: f64,
    /// ∫W
    pub normalization: f64,
    pub wigner_min: f64,
}

/// Square domain centroid ± (5 + displacement) with `resolution` samples per axis.
pub fn default_domain(centroid: Complex64, displacement: f64, resolution: usize) -> Result<GridSpec> {
    GridSpec::centered(centroid, 5.0 + displacement, resolution)
}

/// V = ∫|W| − ∫W by composite Simpson quadrature on `domain`.
///
/// The raw ∫W has to be within 1e−4 of 1, otherwise the domain is reported
/// as too small.
pub fn negative_volume<F>(wigner: F, domain: GridSpec) -> Result<VolumeEstimate>
where
    F: Fn(PhasePoint) -> Result<f64> + Sync,
{
    if domain.nx < MIN_RESOLUTION || domain.ny < MIN_RESOLUTION {
        return Err(Error::Invalid(format!(
            "negative volume needs at least {MIN_RESOLUTION} samples per axis, got {}x{}",
            domain.nx, domain.ny
        )));
    }
    let grid = PhaseGrid::evaluate(domain, wigner)?;
    volume_of_grid(&grid)
}

/// [`negative_volume`] on an already sampled grid.
pub fn volume_of_grid(grid: &PhaseGrid) -> Result<VolumeEstimate> {
    let normalization = grid.integral();
    if (normalization - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::DomainTooSmall(normalization));
    }
    let mut volume = grid.abs_integral() - normalization;
    if volume.abs() < VOLUME_FLOOR {
        volume = 0.0;
    }
    Ok(VolumeEstimate { volume, normalization, wigner_min: grid.min() })
}

/// Input family of an indicator run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateSpec {
    Coherent { alpha: Complex64 },
    Thermal { nbar: f64 },
}

impl StateSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            StateSpec::Coherent { .. } => "coherent",
            StateSpec::Thermal { .. } => "thermal",
        }
    }

    /// The input state on its default cutoff.
    pub fn input_state(&self) -> Result<DensityMatrix> {
        let mean = match *self {
            StateSpec::Coherent { alpha } => alpha.norm_sqr(),
            StateSpec::Thermal { nbar } => nbar,
        };
        self.input_state_with_cutoff(default_cutoff(mean))
    }

    /// Input density matrix on `cutoff` Fock levels.
    pub fn input_state_with_cutoff(&self, cutoff: usize) -> Result<DensityMatrix> {
        match *self {
            StateSpec::Coherent { alpha } => {
                if !alpha.re.is_finite() || !alpha.im.is_finite() {
                    return Err(Error::Invalid(format!("non-finite alpha {alpha}")));
                }
                Ok(coherent_state(alpha, cutoff)?.to_density())
            }
            StateSpec::Thermal { nbar } => {
                if !nbar.is_finite() || nbar < 0.0 {
                    return Err(Error::OutOfRange { name: "nbar", value: nbar });
                }
                thermal_state(nbar, cutoff)
            }
        }
    }

    /// Closed-form normalization N of the SUP output.
    pub fn norm_closed(&self, params: SupParams) -> f64 {
        match *self {
            StateSpec::Coherent { alpha } => norm_socs(params, alpha),
            StateSpec::Thermal { nbar } => norm_sots(params, nbar),
        }
    }

    pub fn q_closed(&self, params: SupParams) -> f64 {
        match *self {
            StateSpec::Coherent { alpha } => q_socs_closed(params, alpha),
            StateSpec::Thermal { nbar } => q_sots_closed(params, nbar),
        }
    }

    pub fn s_closed(&self, params: SupParams) -> f64 {
        match *self {
            StateSpec::Coherent { alpha } => s_socs_closed(params, alpha),
            StateSpec::Thermal { nbar } => s_sots_closed(params, nbar),
        }
    }

    /// Largest displacement of the input, used to size the phase-space domain.
    pub fn displacement(&self) -> f64 {
        match *self {
            StateSpec::Coherent { alpha } => alpha.norm(),
            StateSpec::Thermal { .. } => 0.0,
        }
    }
}

/// SUP output state with its empirical normalization.
pub fn sup_state(state: StateSpec, params: SupParams) -> Result<(DensityMatrix, f64)> {
    apply_sup(&state.input_state()?, params)
}

/// All indicators of one (state, t) point, flat for JSON/CSV output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicatorReport {
    pub t: f64,
    pub s: f64,
    pub state_kind: &'static str,
    /// |α| for coherent inputs.
    pub amplitude: Option<f64>,
    pub nbar: Option<f64>,
    /// `None` for moment-only reports.
    #[serde(rename = "V")]
    pub negative_volume: Option<f64>,
    #[serde(rename = "Q")]
    pub mandel_q: f64,
    #[serde(rename = "S_opt")]
    pub squeezing_opt: f64,
    pub wigner_min: Option<f64>,
    #[serde(rename = "Q_paper_closed")]
    pub q_transcribed: f64,
    #[serde(rename = "S_paper_closed")]
    pub s_transcribed: f64,
    /// Q_paper_closed − Q
    #[serde(rename = "Q_delta")]
    pub q_delta: f64,
    /// S_paper_closed − S_opt
    #[serde(rename = "S_delta")]
    pub s_delta: f64,
    #[serde(rename = "N_closed")]
    pub n_closed: f64,
    #[serde(rename = "N_empirical")]
    pub n_empirical: f64,
}

impl IndicatorReport {
    /// Column names in serialization order.
    pub const COLUMNS: [&'static str; 15] = [
        "t", "s", "state_kind", "amplitude", "nbar", "V", "Q", "S_opt", "wigner_min", "Q_paper_closed",
        "S_paper_closed", "Q_delta", "S_delta", "N_closed", "N_empirical",
    ];
}

/// Builds the SUP output for `state` at `t` and evaluates every indicator on
/// the density matrix. V uses the F = 0 quasiprobability engine on the
/// default domain with `resolution` samples per axis.
pub fn indicator_report(state: StateSpec, t: f64, resolution: usize) -> Result<IndicatorReport> {
    report(state, t, Some(resolution))
}

/// Moment indicators only; V and the Wigner minimum are left out.
pub fn moment_report(state: StateSpec, t: f64) -> Result<IndicatorReport> {
    report(state, t, None)
}

fn report(state: StateSpec, t: f64, resolution: Option<usize>) -> Result<IndicatorReport> {
    let params = sup_params(t)?;
    let (rho, n_empirical) = sup_state(state, params)?;
    let moments = QuadratureMoments::of(&rho);
    let q = mandel_q(&rho)?;
    let s_opt = moments.squeezing_opt();
    let vol = match resolution {
        Some(n) => {
            let domain = default_domain(moments.a_mean, state.displacement(), n)?;
            Some(negative_volume(|p| quasiprob_f(&rho, p, OrderingParameter::WIGNER), domain)?)
        }
        None => None,
    };
    let q_transcribed = state.q_closed(params);
    let s_transcribed = state.s_closed(params);
    let (amplitude, nbar) = match state {
        StateSpec::Coherent { alpha } => (Some(alpha.norm()), None),
        StateSpec::Thermal { nbar } => (None, Some(nbar)),
    };
    Ok(IndicatorReport {
        t,
        s: params.s(),
        state_kind: state.kind(),
        amplitude,
        nbar,
        negative_volume: vol.map(|v| v.volume),
        mandel_q: q,
        squeezing_opt: s_opt,
        wigner_min: vol.map(|v| v.wigner_min),
        q_transcribed,
        s_transcribed,
        q_delta: q_transcribed - q,
        s_delta: s_transcribed - s_opt,
        n_closed: state.norm_closed(params),
        n_empirical,
    })
}
