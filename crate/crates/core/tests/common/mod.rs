//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use arhygarch_core::model::ModelParams;
use statrs::function::gamma::ln_gamma;

/// `phi_j = Gamma(j - d) / (Gamma(-d) Gamma(j + 1))` through log-Gamma.
pub fn phi_gamma(d: f64, j: usize) -> f64 {
    if j == 0 {
        return 1.0;
    }
    if d == 0.0 {
        return 0.0;
    }
    // Gamma(-d) = -Gamma(1 - d) / d
    let jf = j as f64;
    -d * (ln_gamma(jf - d) - ln_gamma(1.0 - d) - ln_gamma(jf + 1.0)).exp()
}

/// Coefficients of `(1 - gamma L)(1 - L)^d / (1 - beta L)` by explicit
/// convolution with the geometric series of `1 / (1 - beta L)`.
pub fn filter_oracle(d: f64, beta: f64, gamma: f64, len: usize) -> Vec<f64> {
    let phi: Vec<f64> = (0..=len).map(|j| phi_gamma(d, j)).collect();
    let g: Vec<f64> = (0..=len)
        .map(|j| phi[j] - if j > 0 { gamma * phi[j - 1] } else { 0.0 })
        .collect();
    (0..=len)
        .map(|j| (0..=j).map(|i| beta.powi((j - i) as i32) * g[i]).sum())
        .collect()
}

/// Lag weights on `log x_{t-j}`, index 0 unused.
pub fn weights_oracle(d: f64, beta: f64, gamma: f64, delta: f64, len: usize) -> Vec<f64> {
    let mut w: Vec<f64> = filter_oracle(d, beta, gamma, len).iter().map(|c| -delta * c).collect();
    w[0] = 0.0;
    w
}

pub fn omega_path(p: &ModelParams, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|t| {
            let mut w = p.omega0;
            for j in 0..p.fourier_a.len() {
                let x = 2.0 * std::f64::consts::PI * ((j + 1) * t) as f64 / n as f64;
                w += p.fourier_a[j] * x.sin() + p.fourier_b[j] * x.cos();
            }
            w
        })
        .collect()
}

/// Filtered `log h` by direct double loop; lags before the sample use the
/// sample mean of `log x`.
pub fn log_h_oracle(x: &[f64], p: &ModelParams, omega: &[f64], truncation: usize) -> Vec<f64> {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let fill = lx.iter().sum::<f64>() / lx.len() as f64;
    let w = weights_oracle(p.d, p.beta, p.gamma, p.delta, truncation);
    (0..x.len())
        .map(|t| {
            let mut lh = omega[t];
            for (j, wj) in w.iter().enumerate().skip(1) {
                lh += wj * if j <= t { lx[t - j] } else { fill };
            }
            lh
        })
        .collect()
}

/// Joint Student-t returns and Gaussian measurement log-likelihood.
pub fn loglik_oracle(r: &[f64], x: &[f64], p: &ModelParams, omega: &[f64], truncation: usize) -> f64 {
    let lh = log_h_oracle(x, p, omega, truncation);
    let nu = p.nu;
    let pi = std::f64::consts::PI;
    let mut total = 0.0;
    for t in 0..r.len() {
        let h = lh[t].exp();
        let z = r[t] / h.sqrt();
        let ft = ln_gamma((nu + 1.0) / 2.0) - ln_gamma(nu / 2.0) - 0.5 * (pi * (nu - 2.0)).ln()
            - (nu + 1.0) / 2.0 * (1.0 + z * z / (nu - 2.0)).ln();
        let u = x[t].ln() - p.xi - p.phi * lh[t] - p.tau1 * z - p.tau2 * (z * z - 1.0);
        let fu = -0.5 * (2.0 * pi * p.sigma_u2).ln() - u * u / (2.0 * p.sigma_u2);
        total += ft - 0.5 * lh[t] + fu;
    }
    total
}

/// Draws series that are positive and finite without going through the model.
pub fn synthetic_series(rng: &mut impl rand::Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let r = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    let x = (0..n).map(|_| rng.random_range(0.2..3.0)).collect();
    (r, x)
}

/// `sum_{j>=0} |phi_{j+2} - gamma phi_{j+1}|` summed to `n` and `4n` terms,
/// with the hyperbolic `n^-d` tail removed by one Richardson step.
pub fn lag_sum_oracle(d: f64, gamma: f64, n: usize) -> f64 {
    let mut phi_prev = -d; // phi_1
    let mut acc = 0.0;
    let mut at_n = 0.0;
    for j in 0..4 * n {
        let k = (j + 2) as f64;
        let phi = phi_prev * (k - 1.0 - d) / k;
        acc += (phi - gamma * phi_prev).abs();
        phi_prev = phi;
        if j + 1 == n {
            at_n = acc;
        }
    }
    let r = 4f64.powf(d);
    (r * acc - at_n) / (r - 1.0)
}
