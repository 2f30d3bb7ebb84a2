// Copyright 2026 The supop Authors
// SPDX-License-Identifier: Apache-2.0

//! Four-mode simulation of the heralded optical setup that realizes
//! s·ââ† + t·â†â on a signal mode.
//!
//! Mode I carries the signal. B1 (I, II) taps a photon off the signal, the
//! down-converter adds a photon to I and its twin to III, B2 (I, IV) taps a
//! second photon, and B3 (II, IV) erases which tap fired. Detectors watch
//! III (P1), II (P2) and IV (P3).
//!
//! Beam splitters act on creation operators as
//! a† → t a† − r* b†, b† → r a† + t* b†, i.e. the output annihilators are
//! b' = t b + r c and c' = t* c − r* b. They are applied exactly on the
//! truncated basis; amplitude that leaves the basis is dropped.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::special::ln_factorial;
use crate::sup::{sup_params, SupParams};

/// Ancilla modes hold 0 or 1 photons.
pub const ANCILLA_CUTOFF: usize = 2;
/// Extra signal levels above the input cutoff, room for the added photon.
pub const SIGNAL_PADDING: usize = 2;
const UNITARITY_TOLERANCE: f64 = 1e-12;
const ZERO_PROBABILITY: f64 = 1e-20;
const MAX_G: f64 = 0.2;
const MAX_TAP: f64 = 0.2;

/// Mode labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    I = 0,
    II = 1,
    III = 2,
    IV = 3,
}

impl Mode {
    fn index(self) -> usize {
        self as usize
    }
}

/// Amplitudes on |n_I, n_II, n_III, n_IV⟩, mode IV fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiModeState {
    cutoffs: [usize; 4],
    amplitudes: Vec<Complex64>,
}

impl MultiModeState {
    pub fn new(cutoffs: [usize; 4], amplitudes: Vec<Complex64>) -> Result<Self> {
        if cutoffs.contains(&0) {
            return Err(Error::InvalidCutoff(0));
        }
        let len: usize = cutoffs.iter().product();
        if amplitudes.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: amplitudes.len() });
        }
        let state = Self { cutoffs, amplitudes };
        let norm = state.norm_sqr();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Invalid(format!("multimode state norm {norm}")));
        }
        Ok(state)
    }

    /// Signal `psi` in mode I, vacuum elsewhere; the signal cutoff is padded
    /// by [`SIGNAL_PADDING`].
    pub fn from_signal(psi: &FockVector) -> Self {
        let d = psi.cutoff() + SIGNAL_PADDING;
        let cutoffs = [d, ANCILLA_CUTOFF, ANCILLA_CUTOFF, ANCILLA_CUTOFF];
        let mut state = Self { cutoffs, amplitudes: vec![Complex64::new(0.0, 0.0); cutoffs.iter().product()] };
        for (n, a) in psi.amplitudes().iter().enumerate() {
            let k = state.index([n, 0, 0, 0]);
            state.amplitudes[k] = *a;
        }
        state
    }

    pub fn cutoffs(&self) -> [usize; 4] {
        self.cutoffs
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn amplitude(&self, occ: [usize; 4]) -> Complex64 {
        self.amplitudes[self.index(occ)]
    }

    fn index(&self, occ: [usize; 4]) -> usize {
        let c = self.cutoffs;
        ((occ[0] * c[1] + occ[1]) * c[2] + occ[2]) * c[3] + occ[3]
    }

    fn occupations(&self, mut k: usize) -> [usize; 4] {
        let mut occ = [0; 4];
        for m in (0..4).rev() {
            occ[m] = k % self.cutoffs[m];
            k /= self.cutoffs[m];
        }
        occ
    }

    fn fits(&self, occ: [usize; 4]) -> bool {
        occ.iter().zip(&self.cutoffs).all(|(n, c)| n < c)
    }

    fn zeroed(&self) -> Self {
        Self { cutoffs: self.cutoffs, amplitudes: vec![Complex64::new(0.0, 0.0); self.amplitudes.len()] }
    }
}

/// A lossless two-port with reflection r and transmission t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeamSplitter {
    pub r: Complex64,
    pub t: Complex64,
}

impl BeamSplitter {
    pub fn new(r: Complex64, t: Complex64) -> Result<Self> {
        let dev = (r.norm_sqr() + t.norm_sqr() - 1.0).abs();
        if !dev.is_finite() || dev > UNITARITY_TOLERANCE {
            return Err(Error::Unitarity(dev));
        }
        Ok(Self { r, t })
    }

    /// Real positive transmission √(1 − |r|²).
    pub fn from_reflection(r: Complex64) -> Result<Self> {
        let t2 = 1.0 - r.norm_sqr();
        if t2.is_nan() || t2 < 0.0 {
            return Err(Error::Unitarity(-t2));
        }
        Self::new(r, Complex64::new(t2.sqrt(), 0.0))
    }

    pub fn balanced() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { r: Complex64::new(h, 0.0), t: Complex64::new(h, 0.0) }
    }

    /// Same phases, reflection magnitude scaled by `factor`.
    fn scaled(&self, factor: f64) -> Result<Self> {
        let r = self.r * factor;
        let t_mag = (1.0 - r.norm_sqr()).sqrt();
        let t = if self.t.norm() > 0.0 { self.t / self.t.norm() * t_mag } else { Complex64::new(t_mag, 0.0) };
        Self::new(r, t)
    }
}

/// Which photon-pair operator the down-converter's first-order term uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum PdcOrdering {
    /// 1 − g â†_signal â†_idler: pair creation.
    #[default]
    Creation,
    /// 1 − g â_signal â†_idler, the operator as printed.
    LiteralAnnihilation,
}

/// Beam splitters, down-converter coupling and detector layout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemeConfig {
    pub b1: BeamSplitter,
    pub b2: BeamSplitter,
    pub b3: BeamSplitter,
    pub g: f64,
    pub pdc_ordering: PdcOrdering,
}

impl Default for SchemeConfig {
    /// g = r₁ = r₂ = 0.05 with real transmissions and a balanced B3.
    fn default() -> Self {
        Self::from_reflections(0.05, Complex64::new(0.05, 0.0), Complex64::new(0.05, 0.0), BeamSplitter::balanced())
            .expect("default config is valid")
    }
}

impl SchemeConfig {
    pub fn new(b1: BeamSplitter, b2: BeamSplitter, b3: BeamSplitter, g: f64, pdc_ordering: PdcOrdering) -> Result<Self> {
        let cfg = Self { b1, b2, b3, g, pdc_ordering };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_reflections(g: f64, r1: Complex64, r2: Complex64, b3: BeamSplitter) -> Result<Self> {
        Self::new(BeamSplitter::from_reflection(r1)?, BeamSplitter::from_reflection(r2)?, b3, g, PdcOrdering::Creation)
    }

    pub fn validate(&self) -> Result<()> {
        for bs in [self.b1, self.b2, self.b3] {
            BeamSplitter::new(bs.r, bs.t)?;
        }
        if !self.g.is_finite() || self.g < 0.0 || self.g > MAX_G {
            return Err(Error::Config(format!("PDC coupling g = {} outside [0, {MAX_G}]", self.g)));
        }
        for (name, bs) in [("r1", self.b1), ("r2", self.b2)] {
            if bs.r.norm() > MAX_TAP {
                return Err(Error::Config(format!("|{name}| = {} exceeds {MAX_TAP}", bs.r.norm())));
            }
        }
        Ok(())
    }

    /// ε = max(g, |r₁|, |r₂|).
    pub fn epsilon(&self) -> f64 {
        self.g.max(self.b1.r.norm()).max(self.b2.r.norm())
    }

    /// g, r₁ and r₂ scaled by `factor`; phases and B3 kept.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.b1.scaled(factor)?, self.b2.scaled(factor)?, self.b3, self.g * factor, self.pdc_ordering)
    }
}

/// Exact beam-splitter action on the pair (`mode_a`, `mode_b`).
///
/// |n, m⟩ = a†ⁿ b†ᵐ/√(n!m!)|0⟩ is expanded binomially after the substitution
/// a† → t a† − r* b†, b† → r a† + t* b†.
pub fn beamsplitter_apply(state: &MultiModeState, mode_a: Mode, mode_b: Mode, bs: BeamSplitter) -> Result<MultiModeState> {
    if mode_a == mode_b {
        return Err(Error::ModeCollision(mode_a.index()));
    }
    let bs = BeamSplitter::new(bs.r, bs.t)?;
    let (ia, ib) = (mode_a.index(), mode_b.index());
    let mut out = state.zeroed();
    let neg_rc = -bs.r.conj();
    let tc = bs.t.conj();
    for (k, amp) in state.amplitudes.iter().enumerate() {
        if *amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let occ = state.occupations(k);
        let (n, m) = (occ[ia], occ[ib]);
        let ln_norm = -0.5 * (ln_factorial(n) + ln_factorial(m));
        for j in 0..=n {
            let left = binomial(n, j) * bs.t.powu(j as u32) * neg_rc.powu((n - j) as u32);
            for l in 0..=m {
                let p = j + l;
                let q = n + m - p;
                let mut target = occ;
                target[ia] = p;
                target[ib] = q;
                if !state.fits(target) {
                    continue;
                }
                let right = binomial(m, l) * bs.r.powu(l as u32) * tc.powu((m - l) as u32);
                let scale = (ln_norm + 0.5 * (ln_factorial(p) + ln_factorial(q))).exp();
                let idx = out.index(target);
                out.amplitudes[idx] += amp * left * right * scale;
            }
        }
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> f64 {
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp().round()
}

/// First-order down-conversion Kraus element 1 − g·X on (signal, idler), with
/// X = â†_s â†_i or â_s â†_i according to `ordering`. Not renormalized.
pub fn pdc_apply(state: &MultiModeState, signal: Mode, idler: Mode, g: f64, ordering: PdcOrdering) -> Result<MultiModeState> {
    if signal == idler {
        return Err(Error::ModeCollision(signal.index()));
    }
    let (is, ii) = (signal.index(), idler.index());
    let mut out = state.clone();
    for (k, amp) in state.amplitudes.iter().enumerate() {
        let occ = state.occupations(k);
        let mut target = occ;
        target[ii] += 1;
        let signal_factor = match ordering {
            PdcOrdering::Creation => {
                target[is] += 1;
                ((occ[is] + 1) as f64).sqrt()
            }
            PdcOrdering::LiteralAnnihilation => {
                if occ[is] == 0 {
                    continue;
                }
                target[is] -= 1;
                (occ[is] as f64).sqrt()
            }
        };
        if !state.fits(target) {
            continue;
        }
        let factor = signal_factor * ((occ[ii] + 1) as f64).sqrt();
        let idx = state.index(target);
        out.amplitudes[idx] -= amp * (g * factor);
    }
    Ok(out)
}

/// Photon numbers seen by P1 (mode III), P2 (mode II) and P3 (mode IV).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HeraldPattern {
    pub p1: usize,
    pub p2: usize,
    pub p3: usize,
}

impl HeraldPattern {
    pub fn new(p1: usize, p2: usize, p3: usize) -> Result<Self> {
        if p1 > 1 || p2 > 1 || p3 > 1 {
            return Err(Error::Invalid(format!("herald pattern ({p1},{p2},{p3}) needs counts 0 or 1")));
        }
        Ok(Self { p1, p2, p3 })
    }

    /// P1 and P2 click.
    pub const BRANCH_ONE: HeraldPattern = HeraldPattern { p1: 1, p2: 1, p3: 0 };
    /// P1 and P3 click.
    pub const BRANCH_TWO: HeraldPattern = HeraldPattern { p1: 1, p2: 0, p3: 1 };
}

/// Projects the ancillas on `pattern` and returns the normalized signal with
/// the heralding probability (squared norm of the projection).
pub fn herald(state: &MultiModeState, pattern: HeraldPattern) -> Result<(FockVector, f64)> {
    let pattern = HeraldPattern::new(pattern.p1, pattern.p2, pattern.p3)?;
    let d = state.cutoffs[0];
    let amps: Vec<Complex64> = (0..d).map(|n| state.amplitude([n, pattern.p2, pattern.p1, pattern.p3])).collect();
    let probability: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if probability.is_nan() || probability < ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(probability));
    }
    let (psi, _) = FockVector::normalized(amps)?;
    Ok((psi, probability))
}

/// Output port of B3 that clicks together with P1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// P2 (mode II output).
    One,
    /// P3 (mode IV output).
    Two,
}

impl Branch {
    pub fn pattern(self) -> HeraldPattern {
        match self {
            Branch::One => HeraldPattern::BRANCH_ONE,
            Branch::Two => HeraldPattern::BRANCH_TWO,
        }
    }
}

/// First-order coefficients (w_ââ†, w_â†â) of the heralded operation, derived
/// with the beam-splitter convention of this module.
///
/// The B1 tap contributes −r₁*/t₁ â and the pair source −g â†, so the mode-II
/// photon carries +g(r₁*/t₁) â†â; likewise mode IV carries +g(r₂*/t₂) ââ†.
/// B3 then weights them by (t₃, r₃) on P2 and (−r₃*, t₃*) on P3.
pub fn effective_sup_weights(config: &SchemeConfig, branch: Branch) -> (Complex64, Complex64) {
    let (r1, t1) = (config.b1.r, config.b1.t);
    let (r2, t2) = (config.b2.r, config.b2.t);
    let (r3, t3) = (config.b3.r, config.b3.t);
    let g = config.g;
    let tap1 = r1.conj() / t1 * g;
    let tap2 = r2.conj() / t2 * g;
    match branch {
        Branch::One => (r3 * tap2, t3 * tap1),
        Branch::Two => (t3.conj() * tap2, -r3.conj() * tap1),
    }
}

/// The two printed branch expressions, (w_ââ†, w_â†â):
/// (−r₃ g r₂*/t₂, g t₃ r₁*/t₁) and (−t₃* g r₂*/t₂, −g r₃* r₁*/t₁).
///
/// They differ from [`effective_sup_weights`] by the sign of w_ââ†.
pub fn printed_sup_weights(config: &SchemeConfig, branch: Branch) -> (Complex64, Complex64) {
    let (r1, t1) = (config.b1.r, config.b1.t);
    let (r2, t2) = (config.b2.r, config.b2.t);
    let (r3, t3) = (config.b3.r, config.b3.t);
    let g = config.g;
    match branch {
        Branch::One => (-r3 * g * r2.conj() / t2, g * t3 * r1.conj() / t1),
        Branch::Two => (-t3.conj() * g * r2.conj() / t2, -g * r3.conj() * r1.conj() / t1),
    }
}

/// Normalizes a weight pair to (s, t) with s ≥ 0 after removing a global phase.
///
/// Fails when the relative phase of the two weights is not 0 or π, since the
/// operation is then not of the real (s, t) form.
pub fn effective_params(weights: (Complex64, Complex64)) -> Result<SupParams> {
    let (w_aad, w_ada) = weights;
    let norm = (w_aad.norm_sqr() + w_ada.norm_sqr()).sqrt();
    if norm.is_nan() || norm <= 0.0 {
        return Err(Error::Config("both SUP weights vanish".into()));
    }
    let reference = if w_aad.norm() > 1e-12 * norm { w_aad } else { w_ada };
    let phase = reference.conj() / reference.norm();
    let (s, t) = (w_aad * phase / norm, w_ada * phase / norm);
    if s.im.abs() > 1e-9 || t.im.abs() > 1e-9 {
        return Err(Error::Config(format!("SUP weights have a complex relative phase: s = {s}, t = {t}")));
    }
    // s ≥ 0 is guaranteed by the choice of reference phase
    sup_params(t.re.clamp(-1.0, 1.0))
}

/// (w_ââ† ââ† + w_â†â â†â)|ψ⟩, normalized.
pub fn target_state(psi: &FockVector, weights: (Complex64, Complex64)) -> Result<FockVector> {
    let (w_aad, w_ada) = weights;
    let amps = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, a)| a * (w_aad * (n as f64 + 1.0) + w_ada * n as f64))
        .collect();
    Ok(FockVector::normalized(amps)?.0)
}

/// B1 → PDC → B2 → B3 on a pure signal, before detection.
pub fn propagate(psi: &FockVector, config: &SchemeConfig) -> Result<MultiModeState> {
    config.validate()?;
    let state = MultiModeState::from_signal(psi);
    let state = beamsplitter_apply(&state, Mode::I, Mode::II, config.b1)?;
    let state = pdc_apply(&state, Mode::I, Mode::III, config.g, config.pdc_ordering)?;
    let state = beamsplitter_apply(&state, Mode::I, Mode::IV, config.b2)?;
    beamsplitter_apply(&state, Mode::II, Mode::IV, config.b3)
}

/// One heralded branch of a scheme run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchOutcome {
    pub branch: Branch,
    #[serde(skip)]
    pub conditional: FockVector,
    pub probability: f64,
    pub weights: (Complex64, Complex64),
    /// `None` when the weights carry a complex relative phase.
    pub effective: Option<SupParams>,
    /// Fidelity of the conditional state to the normalized target operation.
    pub fidelity: f64,
}

/// Both heralded branches.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeRun {
    pub config: SchemeConfig,
    pub epsilon: f64,
    pub branch_one: BranchOutcome,
    pub branch_two: BranchOutcome,
}

fn outcome(psi: &FockVector, state: &MultiModeState, config: &SchemeConfig, branch: Branch) -> Result<BranchOutcome> {
    let (conditional, probability) = herald(state, branch.pattern())?;
    let weights = effective_sup_weights(config, branch);
    let padded = pad(psi, conditional.cutoff())?;
    let target = target_state(&padded, weights)?;
    let fidelity = conditional.fidelity(&target);
    Ok(BranchOutcome { branch, conditional, probability, weights, effective: effective_params(weights).ok(), fidelity })
}

fn pad(psi: &FockVector, cutoff: usize) -> Result<FockVector> {
    let mut amps = psi.amplitudes().to_vec();
    amps.resize(cutoff, Complex64::new(0.0, 0.0));
    FockVector::new(amps)
}

/// Runs the pipeline and heralds one branch.
pub fn run_scheme_branch(psi: &FockVector, config: &SchemeConfig, branch: Branch) -> Result<BranchOutcome> {
    let state = propagate(psi, config)?;
    outcome(psi, &state, config, branch)
}

/// Runs the pipeline once and heralds both branches.
pub fn run_scheme(psi: &FockVector, config: &SchemeConfig) -> Result<SchemeRun> {
    let state = propagate(psi, config)?;
    Ok(SchemeRun {
        config: *config,
        epsilon: config.epsilon(),
        branch_one: outcome(psi, &state, config, Branch::One)?,
        branch_two: outcome(psi, &state, config, Branch::Two)?,
    })
}

/// Infidelity under repeated halving of g, r₁ and r₂.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Convergence {
    pub epsilon: Vec<f64>,
    pub infidelity: Vec<f64>,
    /// Least-squares slope of ln(1 − F) against ln ε.
    pub slope: f64,
}

/// Evaluates `branch` at ε, ε/2, …, ε/2^halvings and fits the log-log slope.
pub fn convergence_slope(psi: &FockVector, config: &SchemeConfig, branch: Branch, halvings: usize) -> Result<Convergence> {
    if halvings == 0 {
        return Err(Error::Invalid("need at least one halving".into()));
    }
    let mut epsilon = Vec::with_capacity(halvings + 1);
    let mut infidelity = Vec::with_capacity(halvings + 1);
    for h in 0..=halvings {
        let cfg = config.scaled(0.5f64.powi(h as i32))?;
        let out = run_scheme_branch(psi, &cfg, branch)?;
        epsilon.push(cfg.epsilon());
        infidelity.push((1.0 - out.fidelity).max(f64::MIN_POSITIVE));
    }
    let xs: Vec<f64> = epsilon.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = infidelity.iter().map(|e| e.ln()).collect();
    Ok(Convergence { epsilon, infidelity, slope: least_squares_slope(&xs, &ys) })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
