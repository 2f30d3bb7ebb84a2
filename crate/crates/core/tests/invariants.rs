// Copyright 2026 The supop Authors
// SPDX-License-Identifier: Apache-2.0

use supop::indicators::{default_domain, negative_volume, sup_state, QuadratureMoments, StateSpec, MIN_RESOLUTION};
use supop::quasiprob::{quasiprob_f, wigner_series};
use supop::{sup_params, Complex64, OrderingParameter, PhaseGrid};

fn t_grid(step: f64) -> Vec<f64> {
    let n = (2.0 / step).round() as usize;
    (0..=n).map(|k| -1.0 + step * k as f64).collect()
}

fn test_states() -> Vec<StateSpec> {
    vec![StateSpec::Coherent { alpha: Complex64::new(0.4, 0.0) }, StateSpec::Thermal { nbar: 0.2 }]
}

#[test]
fn series_wigner_is_normalized_on_default_domain() {
    let mut worst: (f64, String) = (0.0, String::new());
    let mut check = |label: String, rho: &supop::DensityMatrix, displacement: f64| {
        let center = QuadratureMoments::of(rho).a_mean;
        let spec = default_domain(center, displacement, MIN_RESOLUTION).unwrap();
        let grid = PhaseGrid::evaluate(spec, |b| wigner_series(rho, b, None)).unwrap();
        let dev = (grid.integral() - 1.0).abs();
        if dev > worst.0 {
            worst = (dev, label);
        }
    };
    for state in test_states() {
        check(format!("{} input", state.kind()), &state.input_state().unwrap(), state.displacement());
        for t in t_grid(0.25) {
            let (rho, _) = sup_state(state, sup_params(t).unwrap()).unwrap();
            check(format!("{} t={t}", state.kind()), &rho, state.displacement());
        }
    }
    assert!(worst.0 <= 1e-6, "worst normalization error {:.3e} for {}", worst.0, worst.1);
}

#[test]
fn sots_negative_volume_vanishes_on_t_grid() {
    let mut violations = Vec::new();
    for &nbar in &[0.1, 0.2, 0.3] {
        let state = StateSpec::Thermal { nbar };
        for t in t_grid(0.05) {
            let (rho, _) = sup_state(state, sup_params(t).unwrap()).unwrap();
            let spec = default_domain(Complex64::new(0.0, 0.0), 0.0, MIN_RESOLUTION).unwrap();
            let v = negative_volume(|b| quasiprob_f(&rho, b, OrderingParameter::WIGNER), spec).unwrap();
            if v.volume.abs() > 1e-6 {
                violations.push(format!("nbar={nbar} t={t:.2}: V={:.3e}", v.volume));
            }
        }
    }
    assert!(violations.is_empty(), "{} grid points with V > 1e-6: {}", violations.len(), violations.join(", "));
}
