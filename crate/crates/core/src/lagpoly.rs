//! Truncated lag-polynomial expansions.
//!
//! The fractional operator `(1-L)^d` is expanded with the multiplicative
//! recurrence `phi[j] = phi[j-1] * (j-1-d) / j`. Gamma-function ratios
//! overflow long before the truncation lengths used here (thousands of lags).
//!
//! The conditional-variance filter
//! `delta * [1 - (1 - gamma L) / (1 - beta L) * (1-L)^d]` is expanded into
//! `c = (1 - gamma L)(1 - beta L)^{-1}(1-L)^d` and weights `w[j] = -delta c[j]`,
//! so that `log h_t = omega_t + sum_{j>=1} w[j] log x_{t-j}`.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Signed coefficients of `(1-L)^d`, `phi[0..=J]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FracDiffCoeffs {
    d: f64,
    phi: Vec<f64>,
}

impl FracDiffCoeffs {
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Truncation length `J`; there are `J + 1` coefficients.
    pub fn truncation(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.phi
    }

    pub fn get(&self, j: usize) -> f64 {
        self.phi[j]
    }

    /// `sum_{j=0}^{J} phi[j]`.
    pub fn partial_sum(&self) -> f64 {
        self.phi.iter().sum()
    }
}

/// Expands `(1-L)^d` up to lag `truncation`.
pub fn fracdiff_coeffs(d: f64, truncation: usize) -> Result<FracDiffCoeffs> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::Domain {
            name: "d",
            value: d,
            interval: "[0, 1]",
        });
    }
    let mut phi = Vec::with_capacity(truncation + 1);
    phi.push(1.0);
    for j in 1..=truncation {
        let jf = j as f64;
        let prev = phi[j - 1];
        phi.push(prev * (jf - 1.0 - d) / jf);
    }
    Ok(FracDiffCoeffs { d, phi })
}

/// `S_n = sum_{k<n} phi[k]` for `(1-L)^d`, from `S_1 = 1`, `S_{n+1} = S_n (n-d)/n`.
///
/// Free of the cancellation in `1 + phi[1] + ...`; the remainder
/// `sum_{k>=n} phi[k]` equals `-S_n` whenever `d > 0`.
pub fn fracdiff_partial_sum(d: f64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let mut s = 1.0;
    for m in 1..n {
        let mf = m as f64;
        s *= (mf - d) / mf;
    }
    s
}

/// Expansion of the composite HYGARCH filter.
#[derive(Debug, Clone, PartialEq)]
pub struct LagWeights {
    d: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    /// `c[0..=J]`, expansion of `(1-gamma L)(1-beta L)^{-1}(1-L)^d`.
    c: Vec<f64>,
    /// `w[0..=J]` indexed by lag; `w[0] = 0`.
    w: Vec<f64>,
}

impl LagWeights {
    pub fn truncation(&self) -> usize {
        self.w.len() - 1
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Lag-indexed weights; entry 0 is always zero.
    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// Weight on `log x_{t-j}`, `j >= 1`.
    pub fn weight(&self, lag: usize) -> f64 {
        self.w[lag]
    }

    pub fn pi_coeffs(&self) -> &[f64] {
        &self.c
    }

    /// `sum_{j=1}^{J} w[j]`.
    pub fn total(&self) -> f64 {
        self.w.iter().sum()
    }
}

/// Expands `delta [1 - (1-gamma L)(1-beta L)^{-1} (1-L)^d]` up to lag `truncation`.
pub fn hygarch_weights(d: f64, beta: f64, gamma: f64, delta: f64, truncation: usize) -> Result<LagWeights> {
    if !(0.0..1.0).contains(&d) {
        return Err(Error::Domain {
            name: "d",
            value: d,
            interval: "[0, 1)",
        });
    }
    if !(beta.abs() < 1.0) {
        return Err(Error::Domain {
            name: "beta",
            value: beta,
            interval: "(-1, 1)",
        });
    }
    if !gamma.is_finite() || !delta.is_finite() {
        return Err(Error::Domain {
            name: if gamma.is_finite() { "delta" } else { "gamma" },
            value: if gamma.is_finite() { delta } else { gamma },
            interval: "finite reals",
        });
    }
    if truncation == 0 {
        return Err(Error::Precondition("truncation must be at least 1"));
    }

    let phi = fracdiff_coeffs(d, truncation)?;
    let phi = phi.coeffs();
    let mut c = Vec::with_capacity(truncation + 1);
    let mut w = Vec::with_capacity(truncation + 1);
    c.push(1.0);
    w.push(0.0);
    for j in 1..=truncation {
        let g = phi[j] - gamma * phi[j - 1];
        let cj = g + beta * c[j - 1];
        c.push(cj);
        w.push(-delta * cj);
    }
    Ok(LagWeights {
        d,
        beta,
        gamma,
        delta,
        c,
        w,
    })
}

/// `sum_{j=1}^{J} |w[j]|`; the weight mass available to the truncated filter.
pub fn weight_tail_mass(weights: &LagWeights) -> f64 {
    weights.w[1..].iter().map(|w| w.abs()).sum()
}
