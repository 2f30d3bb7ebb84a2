// Copyright 2026 The supop Authors
// SPDX-License-Identifier: Apache-2.0

//! Phase-space coordinates, rectangular sampling grids and Simpson quadrature.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// A phase-space point β = x + iy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
}

impl PhasePoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(radius: f64, arg: f64) -> Self {
        let z = Complex64::from_polar(radius, arg);
        Self { x: z.re, y: z.im }
    }

    pub fn beta(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<Complex64> for PhasePoint {
    fn from(z: Complex64) -> Self {
        Self { x: z.re, y: z.im }
    }
}

/// Bounds and sample counts of a uniform rectangular grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_min >= x_max || y_min >= y_max {
            return Err(Error::Invalid(format!(
                "grid bounds must be finite and ordered: [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::Invalid(format!("grid needs at least 2 samples per axis, got {nx}x{ny}")));
        }
        Ok(Self { x_min, x_max, y_min, y_max, nx, ny })
    }

    /// Square grid [lo, hi]² with n samples per axis.
    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::new(lo, hi, lo, hi, n, n)
    }

    /// Square grid centred on `center` with half-width `half`.
    pub fn centered(center: Complex64, half: f64, n: usize) -> Result<Self> {
        Self::new(center.re - half, center.re + half, center.im - half, center.im + half, n, n)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx { self.x_max } else { self.x_min + i as f64 * self.dx() }
    }

    pub fn y(&self, j: usize) -> f64 {
        if j + 1 == self.ny { self.y_max } else { self.y_min + j as f64 * self.dy() }
    }

    pub fn point(&self, i: usize, j: usize) -> PhasePoint {
        PhasePoint::new(self.x(i), self.y(j))
    }
}

/// Samples of a real phase-space function, x-major (index `i * ny + j`).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    spec: GridSpec,
    values: Vec<f64>,
}

impl PhaseGrid {
    /// Evaluates `f` on every grid point. Rows are computed in parallel and
    /// assembled in order, so the result does not depend on scheduling.
    pub fn evaluate<F>(spec: GridSpec, f: F) -> Result<Self>
    where
        F: Fn(PhasePoint) -> Result<f64> + Sync,
    {
        let rows: Vec<Vec<f64>> = (0..spec.nx)
            .into_par_iter()
            .map(|i| (0..spec.ny).map(|j| f(spec.point(i, j))).collect::<Result<Vec<f64>>>())
            .collect::<Result<_>>()?;
        let values: Vec<f64> = rows.into_iter().flatten().collect();
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!("non-finite grid value {bad}")));
        }
        Ok(Self { spec, values })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.ny + j]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest value and the point where it occurs.
    pub fn argmax(&self) -> (PhasePoint, f64) {
        let (k, v) = self
            .values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (k, v)| if v > best.1 { (k, v) } else { best });
        (self.spec.point(k / self.spec.ny, k % self.spec.ny), v)
    }

    /// ∫∫ f dx dy by composite Simpson (trapezoid on an axis with an even sample count).
    pub fn integral(&self) -> f64 {
        self.weighted_sum(|v| v)
    }

    /// ∫∫ |f| dx dy with the same rule.
    pub fn abs_integral(&self) -> f64 {
        self.weighted_sum(f64::abs)
    }

    fn weighted_sum(&self, g: impl Fn(f64) -> f64) -> f64 {
        let wx = quadrature_weights(self.spec.nx, self.spec.dx());
        let wy = quadrature_weights(self.spec.ny, self.spec.dy());
        let mut acc = 0.0;
        for (i, wxi) in wx.iter().enumerate() {
            let row = &self.values[i * self.spec.ny..(i + 1) * self.spec.ny];
            let inner: f64 = row.iter().zip(&wy).map(|(v, w)| g(*v) * w).sum();
            acc += wxi * inner;
        }
        acc
    }
}

/// Composite Simpson weights for an odd number of samples, trapezoid otherwise.
pub fn quadrature_weights(n: usize, h: f64) -> Vec<f64> {
    if n < 3 || n.is_multiple_of(2) {
        let mut w = vec![h; n];
        w[0] = 0.5 * h;
        w[n - 1] = 0.5 * h;
        return w;
    }
    (0..n)
        .map(|k| {
            let base = if k == 0 || k == n - 1 {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            base * h / 3.0
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_specs() {
        assert!(GridSpec::new(1.0, 0.0, 0.0, 1.0, 5, 5).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0.0, 1.0, 1, 5).is_err());
        assert!(GridSpec::new(0.0, f64::NAN, 0.0, 1.0, 5, 5).is_err());
    }

    #[test]
    fn endpoints_are_exact() {
        let g = GridSpec::square(-2.5, 2.5, 201).unwrap();
        assert_eq!(g.x(0), -2.5);
        assert_eq!(g.y(200), 2.5);
        assert!((g.x(100)).abs() < 1e-15);
    }

    #[test]
    fn simpson_integrates_cubic_exactly() {
        let spec = GridSpec::new(0.0, 2.0, -1.0, 1.0, 11, 7).unwrap();
        let grid = PhaseGrid::evaluate(spec, |p| Ok(p.x.powi(3) * (1.0 + p.y * p.y))).unwrap();
        // ∫0^2 x³ dx · ∫-1^1 (1+y²) dy = 4 · 8/3
        assert!((grid.integral() - 32.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_normalization() {
        let spec = GridSpec::square(-5.0, 5.0, 201).unwrap();
        let grid =
            PhaseGrid::evaluate(spec, |p| Ok(2.0 / std::f64::consts::PI * (-2.0 * (p.x * p.x + p.y * p.y)).exp()))
                .unwrap();
        assert!((grid.integral() - 1.0).abs() < 1e-10);
        let (at, peak) = grid.argmax();
        assert_eq!((at.x, at.y), (0.0, 0.0));
        assert!((peak - 2.0 / std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn errors_propagate() {
        let spec = GridSpec::square(-1.0, 1.0, 5).unwrap();
        let res = PhaseGrid::evaluate(spec, |p| if p.x > 0.5 { Err(Error::ZeroTrace(0.0)) } else { Ok(0.0) });
        assert_eq!(res, Err(Error::ZeroTrace(0.0)));
    }
}
