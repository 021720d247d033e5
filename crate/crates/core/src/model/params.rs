use alloc::string::String;
use alloc::vec::Vec;
use alloc::format;

use crate::error::{Error, Result};

/// Full parameter vector of the A-Realized HYGARCH(1,d,1,k) model.
///
/// `fourier_a` / `fourier_b` hold the sine / cosine coefficients of the
/// flexible Fourier intercept; their common length is the order `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub omega0: f64,
    pub gamma: f64,
    pub beta: f64,
    pub d: f64,
    pub delta: f64,
    pub nu: f64,
    /// Measurement-equation intercept.
    pub xi: f64,
    /// Loading of `log h_t` in the measurement equation.
    pub phi: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub sigma_u2: f64,
    pub fourier_a: Vec<f64>,
    pub fourier_b: Vec<f64>,
}

/// Number of scalar (non-Fourier) parameters.
pub(crate) const SCALAR_PARAMS: usize = 11;

const SCALAR_NAMES: [&str; SCALAR_PARAMS] = [
    "omega0", "gamma", "beta", "d", "delta", "nu", "xi", "phi", "tau1", "tau2", "sigma_u2",
];

impl ModelParams {
    /// Simulation-study parameters with long-memory order `d` and no harmonics.
    pub fn baseline(d: f64) -> Self {
        Self {
            omega0: 0.1,
            gamma: 0.1,
            beta: 0.4,
            d,
            delta: 0.9,
            nu: 3.0,
            xi: 0.0,
            phi: 1.0,
            tau1: -0.08,
            tau2: 0.06,
            sigma_u2: 0.4,
            fourier_a: Vec::new(),
            fourier_b: Vec::new(),
        }
    }

    pub fn fourier_order(&self) -> usize {
        self.fourier_a.len()
    }

    /// Same parameters with `k` harmonics; existing coefficients are kept, new ones are zero.
    pub fn with_fourier_order(mut self, k: usize) -> Self {
        self.fourier_a.resize(k, 0.0);
        self.fourier_b.resize(k, 0.0);
        self
    }

    /// Ranges: `gamma, beta` in (-1, 1), `d` in [0, 1), `delta > 0`, `nu > 2`,
    /// `sigma_u2 >= 0`, all values finite, `|a| = |b|`.
    pub fn validate(&self) -> Result<()> {
        if self.fourier_a.len() != self.fourier_b.len() {
            return Err(Error::Length {
                what: "fourier_a vs fourier_b",
                left: self.fourier_a.len(),
                right: self.fourier_b.len(),
            });
        }
        let scalars = &self.to_vec()[..SCALAR_PARAMS];
        let coeffs = self.fourier_a.iter().map(|v| ("fourier_a", *v));
        let coeffs = coeffs.chain(self.fourier_b.iter().map(|v| ("fourier_b", *v)));
        for (name, value) in SCALAR_NAMES.iter().copied().zip(scalars.iter().copied()).chain(coeffs) {
            if !value.is_finite() {
                return Err(Error::Domain {
                    name,
                    value,
                    interval: "finite reals",
                });
            }
        }
        let range = |name, value: f64, ok: bool, interval| {
            if ok {
                Ok(())
            } else {
                Err(Error::Domain { name, value, interval })
            }
        };
        range("gamma", self.gamma, self.gamma.abs() < 1.0, "(-1, 1)")?;
        range("beta", self.beta, self.beta.abs() < 1.0, "(-1, 1)")?;
        range("d", self.d, (0.0..1.0).contains(&self.d), "[0, 1)")?;
        range("delta", self.delta, self.delta > 0.0, "(0, inf)")?;
        range("nu", self.nu, self.nu > 2.0, "(2, inf)")?;
        range("sigma_u2", self.sigma_u2, self.sigma_u2 >= 0.0, "[0, inf)")?;
        Ok(())
    }

    /// Flat vector `(omega0, gamma, beta, d, delta, nu, xi, phi, tau1, tau2, sigma_u2, a.., b..)`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(SCALAR_PARAMS + 2 * self.fourier_order());
        v.extend_from_slice(&[
            self.omega0,
            self.gamma,
            self.beta,
            self.d,
            self.delta,
            self.nu,
            self.xi,
            self.phi,
            self.tau1,
            self.tau2,
            self.sigma_u2,
        ]);
        v.extend_from_slice(&self.fourier_a);
        v.extend_from_slice(&self.fourier_b);
        v
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        if v.len() < SCALAR_PARAMS || (v.len() - SCALAR_PARAMS) % 2 != 0 {
            return Err(Error::Precondition(
                "parameter vector needs 11 scalars plus an even number of Fourier coefficients",
            ));
        }
        let k = (v.len() - SCALAR_PARAMS) / 2;
        Ok(Self {
            omega0: v[0],
            gamma: v[1],
            beta: v[2],
            d: v[3],
            delta: v[4],
            nu: v[5],
            xi: v[6],
            phi: v[7],
            tau1: v[8],
            tau2: v[9],
            sigma_u2: v[10],
            fourier_a: v[SCALAR_PARAMS..SCALAR_PARAMS + k].to_vec(),
            fourier_b: v[SCALAR_PARAMS + k..].to_vec(),
        })
    }

    /// Names matching [`ModelParams::to_vec`].
    pub fn names(k: usize) -> Vec<String> {
        let mut names: Vec<String> = SCALAR_NAMES.iter().map(|s| String::from(*s)).collect();
        names.extend((1..=k).map(|j| format!("a{j}")));
        names.extend((1..=k).map(|j| format!("b{j}")));
        names
    }
}
