// Copyright 2026 The supop Authors
// SPDX-License-Identifier: Apache-2.0

//! Special functions used by the phase-space engines.
//!
//! Everything that involves factorials goes through [`ln_factorial`]; the
//! Laguerre polynomials use the three-term recurrence in the degree.

use std::sync::OnceLock;

const TABLE_LEN: usize = 1024;

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_LEN);
        t.push(0.0);
        for k in 1..TABLE_LEN {
            t.push(t[k - 1] + (k as f64).ln());
        }
        t
    })
}

/// ln(n!), exact summation up to 1023 and Stirling's series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n < TABLE_LEN {
        return table()[n];
    }
    let x = n as f64 + 1.0;
    // Stirling series for ln Γ(x)
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
        + 1.0 / (1260.0 * x.powi(5))
}

/// ln C(n, k).
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Associated Laguerre polynomial L_n^{(k)}(x) via the upward recurrence
///
/// (j+1) L_{j+1} = (2j + 1 + k - x) L_j - (j + k) L_{j-1}
///
/// `k` may be negative as long as `k >= -n`.
pub fn laguerre_assoc(n: usize, k: i64, x: f64) -> f64 {
    debug_assert!(k >= -(n as i64), "order k = {k} below -n for n = {n}");
    let k = k as f64;
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = 1.0 + k - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + k - x) * curr - (jf + k) * prev) / (jf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// All of L_0^{(k)}(x), ..., L_{n_max}^{(k)}(x) from one recurrence pass.
pub fn laguerre_assoc_seq(n_max: usize, k: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let k = k as f64;
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(1.0 + k - x);
    for j in 1..n_max {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + k - x) * out[j] - (jf + k) * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
    out
}

/// Scaled Laguerre sequence y_n = c^n L_n^{(k)}(x) for n = 0..=n_max, where
/// the product `c*x` is passed as `-w` so that c = 0 with x = ∞ stays finite.
///
/// With y_0 = 1 and y_1 = c(1 + k) + w the recurrence reads
///
/// (j+1) y_{j+1} = (c(2j + 1 + k) + w) y_j - c^2 (j + k) y_{j-1}.
pub fn scaled_laguerre_seq(n_max: usize, k: usize, c: f64, w: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let k = k as f64;
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(c * (1.0 + k) + w);
    let c2 = c * c;
    for j in 1..n_max {
        let jf = j as f64;
        let next = ((c * (2.0 * jf + 1.0 + k) + w) * out[j] - c2 * (jf + k) * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laguerre_by_sum(n: usize, k: usize, x: f64) -> f64 {
        // Σ_j (-1)^j C(n+k, n-j) x^j / j!
        (0..=n)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * (ln_binomial(n + k, n - j) - ln_factorial(j)).exp() * x.powi(j as i32)
            })
            .sum()
    }

    #[test]
    fn degree_zero_is_one() {
        for &(k, x) in &[(0, 0.3), (4, -2.0), (-0, 11.0)] {
            assert_eq!(laguerre_assoc(0, k, x), 1.0);
        }
    }

    #[test]
    fn low_degrees_match_explicit_polynomials() {
        let x = 0.7;
        assert!((laguerre_assoc(1, 0, x) - 0.3).abs() < 1e-15);
        for k in 0..5i64 {
            let kf = k as f64;
            let l2 = 0.5 * (x * x - 2.0 * (kf + 2.0) * x + (kf + 1.0) * (kf + 2.0));
            assert!((laguerre_assoc(2, k, x) - l2).abs() < 1e-14);
        }
    }

    #[test]
    fn negative_order() {
        // L_n^{(-n)}(x) = (-x)^n / n!
        let x: f64 = 1.7;
        for n in 1..8usize {
            let expected = (-x).powi(n as i32) / ln_factorial(n).exp();
            let got = laguerre_assoc(n, -(n as i64), x);
            assert!((got - expected).abs() < 1e-12 * expected.abs().max(1.0), "n={n}: {got} vs {expected}");
        }
    }

    #[test]
    fn l5_order2_matches_summation() {
        // Σ_j (-1)^j C(7, 5-j) 1.3^j / j! evaluated term by term in rationals:
        // 21 - 35·1.3 + 35·1.69/2 - 21·2.197/6 + 7·2.8561/24 - 3.71293/120
        let frozen = 21.0 - 45.5 + 29.575 - 7.689_5 + 0.833_029_166_666_666_6 - 0.030_941_083_333_333_333;
        assert!((laguerre_assoc(5, 2, 1.3) - frozen).abs() < 1e-13);
        assert!((laguerre_by_sum(5, 2, 1.3) - frozen).abs() < 1e-13);
    }

    #[test]
    fn sequence_matches_pointwise() {
        let seq = laguerre_assoc_seq(30, 3, 2.4);
        for (n, v) in seq.iter().enumerate() {
            assert!((v - laguerre_assoc(n, 3, 2.4)).abs() < 1e-12);
            // the alternating sum cancels badly at high degree
            if n <= 12 {
                assert!((v - laguerre_by_sum(n, 3, 2.4)).abs() < 1e-11 * v.abs().max(1.0));
            }
        }
        // 40-digit references
        assert!((seq[12] - 11.191_173_957_462_84).abs() < 1e-12);
        assert!((seq[30] - 29.336_988_058_021_747).abs() < 1e-11);
    }

    #[test]
    fn scaled_sequence_matches_direct_product() {
        let (c, x) = (-0.4, 2.2);
        let seq = scaled_laguerre_seq(20, 2, c, -c * x);
        for (n, y) in seq.iter().enumerate() {
            let direct = c.powi(n as i32) * laguerre_assoc(n, 2, x);
            assert!((y - direct).abs() < 1e-12, "n={n}");
        }
        // c = 0 leaves w^n / n!
        let w = 0.9;
        let seq = scaled_laguerre_seq(10, 1, 0.0, w);
        for (n, y) in seq.iter().enumerate() {
            assert!((y - w.powi(n as i32) / ln_factorial(n).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn ln_factorial_stirling_branch_continuous() {
        let below: f64 = (1..=1023).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(1023) - below).abs() < 1e-9);
        let above = below + 1024f64.ln();
        assert!((ln_factorial(1024) - above).abs() < 1e-9);
    }
}
