//! Quasi-maximum-likelihood estimation.
//!
//! The search runs in an unconstrained space:
//!
//! | parameter        | map                          |
//! |------------------|------------------------------|
//! | `d`              | logistic onto (0.01, 0.99)   |
//! | `gamma`, `beta`  | logistic onto (0, 0.999)     |
//! | `delta`          | logistic onto (0.05, 5)      |
//! | `nu`             | `2.1 + exp(y)`               |
//! | `sigma_u2`       | `1e-8 + exp(y)`              |
//! | everything else  | identity                     |
//!
//! For fixed filter parameters `(omega0, gamma, beta, d, delta, a, b)` the
//! return term does not involve `(xi, phi, tau1, tau2, sigma_u2)`, and the
//! measurement term is a Gaussian linear regression of `log x_t` on
//! `(1, log h_t, z_t, z_t^2 - 1)`. Those five parameters are therefore
//! concentrated out by least squares and the simplex only searches the rest;
//! the maximizer is the same as the joint one.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix4, Vector4};

use super::filter::{measurement_term, returns_term};
use super::optimize::NelderMead;
use super::{DirectConvolver, Evaluator, LagConvolver, PresampleFill, SeriesPair, LOGLIK_SENTINEL};
use crate::distributions::RngStream;
use crate::error::{Error, Result};
use crate::lagpoly::hygarch_weights;
use crate::model::{InterceptSpec, ModelParams};

/// Smallest sample the estimator accepts.
pub const MIN_OBSERVATIONS: usize = 100;

const SIGMA_FLOOR: f64 = 1e-8;
const NU_FLOOR: f64 = 2.1;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerOptions {
    pub truncation: usize,
    /// Number of starting points; the best final value wins.
    pub starts: usize,
    /// Likelihood evaluations allowed per start; `None` means 600 per searched coordinate.
    pub max_evals: Option<usize>,
    pub f_tol: f64,
    pub x_tol: f64,
    pub std_errors: bool,
    /// Tried first (start index 0) when present, e.g. a lower-order fit.
    pub warm_start: Option<ModelParams>,
    pub presample: PresampleFill,
    /// Drives the jitter of starts beyond the fixed list.
    pub seed: u64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            truncation: 1000,
            starts: 2,
            max_evals: None,
            f_tol: 1e-7,
            x_tol: 1e-5,
            std_errors: true,
            warm_start: None,
            presample: PresampleFill::SampleMean,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub params: ModelParams,
    pub loglik: f64,
    /// Ordered as [`ModelParams::to_vec`]; `None` when the Hessian is not positive definite.
    pub std_errors: Option<Vec<f64>>,
    pub hessian_positive_definite: bool,
    pub converged: bool,
    /// Total likelihood evaluations over all starts.
    pub iterations: usize,
    pub fourier_order: usize,
    pub best_start: usize,
}

/// `(gamma, beta, d, delta, nu)` for the fixed starting points.
const STARTS: [[f64; 5]; 3] = [
    [0.15, 0.45, 0.35, 0.85, 4.0],
    [0.05, 0.25, 0.25, 1.0, 6.0],
    [0.3, 0.6, 0.45, 0.8, 3.5],
];

fn logistic(y: f64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) / (1.0 + libm::exp(-y))
}

fn logit(x: f64, lo: f64, hi: f64) -> f64 {
    let margin = 1e-9 * (hi - lo);
    let x = x.clamp(lo + margin, hi - margin);
    libm::log((x - lo) / (hi - x))
}

/// Filter-side parameters in unconstrained coordinates.
#[derive(Debug, Clone, Copy)]
struct Layout {
    k: usize,
}

impl Layout {
    fn dim(self) -> usize {
        6 + 2 * self.k
    }

    fn decode(self, y: &[f64], template: &ModelParams) -> ModelParams {
        let k = self.k;
        ModelParams {
            omega0: y[0],
            gamma: logistic(y[1], 0.0, 0.999),
            beta: logistic(y[2], 0.0, 0.999),
            d: logistic(y[3], 0.01, 0.99),
            delta: logistic(y[4], 0.05, 5.0),
            nu: NU_FLOOR + libm::exp(y[5]),
            fourier_a: y[6..6 + k].to_vec(),
            fourier_b: y[6 + k..6 + 2 * k].to_vec(),
            ..template.clone()
        }
    }

    fn encode(self, p: &ModelParams) -> Vec<f64> {
        let mut y = vec![
            p.omega0,
            logit(p.gamma, 0.0, 0.999),
            logit(p.beta, 0.0, 0.999),
            logit(p.d, 0.01, 0.99),
            logit(p.delta, 0.05, 5.0),
            libm::log((p.nu - NU_FLOOR).max(1e-6)),
        ];
        let p = p.clone().with_fourier_order(self.k);
        y.extend_from_slice(&p.fourier_a);
        y.extend_from_slice(&p.fourier_b);
        y
    }

    fn steps(self) -> Vec<f64> {
        let mut s = vec![0.2, 0.5, 0.5, 0.5, 0.5, 0.5];
        s.resize(self.dim(), 0.05);
        s
    }
}

/// Least-squares fit of the measurement equation given `log h` and `z`.
/// Returns `(xi, phi, tau1, tau2, sigma_u2)`.
fn measurement_ols(log_x: &[f64], log_h: &[f64], z: &[f64]) -> Option<[f64; 5]> {
    let mut xtx = Matrix4::<f64>::zeros();
    let mut xty = Vector4::<f64>::zeros();
    for ((lx, lh), z) in log_x.iter().zip(log_h).zip(z) {
        let row = Vector4::new(1.0, *lh, *z, z * z - 1.0);
        xtx += row * row.transpose();
        xty += row * *lx;
    }
    let beta = xtx.cholesky()?.solve(&xty);
    let mut rss = 0.0;
    for ((lx, lh), z) in log_x.iter().zip(log_h).zip(z) {
        let e = lx - beta[0] - beta[1] * lh - beta[2] * z - beta[3] * (z * z - 1.0);
        rss += e * e;
    }
    let s2 = (rss / log_x.len() as f64).max(SIGMA_FLOOR * (1.0 + 1e-9));
    if beta.iter().all(|b| b.is_finite()) && s2.is_finite() {
        Some([beta[0], beta[1], beta[2], beta[3], s2])
    } else {
        None
    }
}

struct Profiled<'a, C> {
    ev: Evaluator<'a, C>,
    layout: Layout,
    template: ModelParams,
    n: usize,
}

impl<'a, C: LagConvolver> Profiled<'a, C> {
    fn spec(&self, p: &ModelParams) -> InterceptSpec {
        InterceptSpec::fourier(p.fourier_a.clone(), p.fourier_b.clone(), self.n).expect("lengths match")
    }

    /// Concentrated log-likelihood and the full parameter vector attaining it.
    fn evaluate(&mut self, y: &[f64]) -> (f64, Option<ModelParams>) {
        if y.iter().any(|v| !v.is_finite()) {
            return (LOGLIK_SENTINEL, None);
        }
        let mut p = self.layout.decode(y, &self.template);
        let spec = self.spec(&p);
        let out = match self.ev.filter(&p, &spec) {
            Ok(out) => out,
            Err(_) => return (LOGLIK_SENTINEL, None),
        };
        if out.log_h.iter().any(|v| !v.is_finite()) {
            return (LOGLIK_SENTINEL, None);
        }
        let Some([xi, phi, tau1, tau2, s2]) = measurement_ols(self.ev.log_x(), &out.log_h, &out.z) else {
            return (LOGLIK_SENTINEL, None);
        };
        p.xi = xi;
        p.phi = phi;
        p.tau1 = tau1;
        p.tau2 = tau2;
        p.sigma_u2 = s2;
        let u: Vec<f64> = self
            .ev
            .log_x()
            .iter()
            .zip(&out.log_h)
            .zip(&out.z)
            .map(|((lx, lh), z)| super::filter::measurement_residual(&p, *lx, *lh, *z))
            .collect();
        let value = returns_term(&out.log_h, &out.z, p.nu) + measurement_term(&u, s2);
        if value.is_finite() {
            (value, Some(p))
        } else {
            (LOGLIK_SENTINEL, None)
        }
    }
}

/// Candidate levels for the mean of `log h`: the mean of `log x`, and the
/// median of `log r^2` shifted by roughly minus the median of `log z^2`.
/// A mean of `r^2` is useless here since a single t(3) draw can dominate it.
fn level_targets(series: &SeriesPair, log_x_mean: f64) -> (f64, f64) {
    let mut lr2: Vec<f64> = series.returns().iter().map(|r| libm::log((r * r).max(1e-300))).collect();
    lr2.sort_unstable_by(f64::total_cmp);
    let median = lr2[lr2.len() / 2];
    (log_x_mean, median + 1.0)
}

fn start_points(series: &SeriesPair, layout: Layout, options: &OptimizerOptions, log_x_mean: f64) -> Vec<Vec<f64>> {
    let target = level_targets(series, log_x_mean).0;
    let mut out = Vec::with_capacity(options.starts + 1);
    if let Some(w) = &options.warm_start {
        out.push(layout.encode(w));
    }
    for i in 0..options.starts {
        let [gamma, beta, d, delta, nu] = STARTS[i % STARTS.len()];
        let total = hygarch_weights(d, beta, gamma, delta, options.truncation)
            .map(|lw| lw.total())
            .unwrap_or(delta);
        let p = ModelParams {
            omega0: target - total * log_x_mean,
            gamma,
            beta,
            d,
            delta,
            nu,
            ..ModelParams::baseline(d)
        };
        let mut y = layout.encode(&p);
        if i >= STARTS.len() {
            let mut rng = RngStream::new(options.seed, 0x5747_0000 + i as u64);
            for v in y.iter_mut().take(6) {
                *v += rng.uniform() - 0.5;
            }
        }
        out.push(y);
    }
    out
}

/// Moves the intercept of a start to the best value on a grid of offsets in
/// `span`, then refines by golden section. Returns the evaluations used.
fn settle_omega<C: LagConvolver>(prof: &mut Profiled<'_, C>, y: &mut [f64], span: (f64, f64)) -> usize {
    let centre = y[0];
    let mut f = |w: f64, y: &mut [f64]| {
        y[0] = w;
        prof.evaluate(y).0
    };
    let mut evals = 0;
    let (mut best_w, mut best_f) = (centre, f64::NEG_INFINITY);
    let steps = libm::ceil((span.1 - span.0) / 0.5) as usize;
    for i in 0..=steps.min(200) {
        let w = centre + span.0 + 0.5 * i as f64;
        let v = f(w, y);
        evals += 1;
        if v > best_f {
            best_w = w;
            best_f = v;
        }
    }
    let g = 0.5 * (libm::sqrt(5.0) - 1.0);
    let (mut lo, mut hi) = (best_w - 0.5, best_w + 0.5);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (f(c, y), f(d, y));
    evals += 2;
    for _ in 0..20 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c, y);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d, y);
        }
        evals += 1;
    }
    let (w, v) = if fc > fd { (c, fc) } else { (d, fd) };
    y[0] = if v > best_f { w } else { best_w };
    evals
}

/// Central-difference Hessian of `-loglik` in natural coordinates.
fn negative_hessian<C: LagConvolver>(ev: &mut Evaluator<'_, C>, params: &ModelParams, n: usize) -> DMatrix<f64> {
    let theta = params.to_vec();
    let dim = theta.len();
    let spec = |p: &ModelParams| InterceptSpec::fourier(p.fourier_a.clone(), p.fourier_b.clone(), n).expect("lengths match");
    let mut f = |v: &[f64]| -> f64 {
        let p = ModelParams::from_slice(v).expect("vector layout");
        -ev.loglik(&p, &spec(&p)).unwrap_or(LOGLIK_SENTINEL)
    };
    let h: Vec<f64> = theta.iter().map(|t| 1e-4 * t.abs().max(1.0)).collect();
    let f0 = f(&theta);
    let mut hess = DMatrix::zeros(dim, dim);
    let mut x = theta.clone();
    for i in 0..dim {
        x[i] = theta[i] + h[i];
        let fp = f(&x);
        x[i] = theta[i] - h[i];
        let fm = f(&x);
        x[i] = theta[i];
        hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for j in 0..i {
            let mut corner = |si: f64, sj: f64| {
                x[i] = theta[i] + si * h[i];
                x[j] = theta[j] + sj * h[j];
                let v = f(&x);
                x[i] = theta[i];
                x[j] = theta[j];
                v
            };
            let v = (corner(1.0, 1.0) - corner(1.0, -1.0) - corner(-1.0, 1.0) + corner(-1.0, -1.0)) / (4.0 * h[i] * h[j]);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    hess
}

fn standard_errors(hess: DMatrix<f64>) -> Option<Vec<f64>> {
    if hess.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let inv = hess.cholesky()?.inverse();
    let se: Vec<f64> = (0..inv.nrows()).map(|i| libm::sqrt(inv[(i, i)])).collect();
    se.iter().all(|s| s.is_finite()).then_some(se)
}

/// Fits an A-Realized HYGARCH(1,d,1,k) model with the direct convolution backend.
pub fn estimate(series: &SeriesPair, k: usize, options: &OptimizerOptions) -> Result<EstimationResult> {
    estimate_with(series, k, options, DirectConvolver)
}

pub fn estimate_with<C: LagConvolver>(
    series: &SeriesPair,
    k: usize,
    options: &OptimizerOptions,
    conv: C,
) -> Result<EstimationResult> {
    let n = series.len();
    if n < MIN_OBSERVATIONS {
        return Err(Error::Precondition("estimation needs at least 100 observations"));
    }
    if options.starts == 0 && options.warm_start.is_none() {
        return Err(Error::Precondition("at least one starting point is required"));
    }
    let layout = Layout { k };
    let ev = Evaluator::with_convolver(series, options.truncation, options.presample, conv);
    let log_x_mean = ev.log_x().iter().sum::<f64>() / n as f64;
    let starts = start_points(series, layout, options, log_x_mean);
    let mut prof = Profiled {
        ev,
        layout,
        template: ModelParams::baseline(0.3).with_fourier_order(k),
        n,
    };

    let nm = NelderMead {
        max_evals: options.max_evals.unwrap_or(600 * layout.dim()),
        f_tol: options.f_tol,
        x_tol: options.x_tol,
        restarts: 2,
    };
    let steps = layout.steps();
    let mut best: Option<(usize, super::optimize::Minimum)> = None;
    let mut evals = 0;
    let warm = usize::from(options.warm_start.is_some());
    let (ta, tb) = level_targets(series, log_x_mean);
    let span = ((tb - ta).min(0.0) - 3.0, (tb - ta).max(0.0) + 3.0);
    for (i, y0) in starts.iter().enumerate() {
        let mut y0 = y0.clone();
        if i >= warm {
            evals += settle_omega(&mut prof, &mut y0, span);
        }
        let m = nm.minimize(|y| -prof.evaluate(y).0, &y0, &steps);
        evals += m.evals;
        let better = match &best {
            None => true,
            Some((_, b)) => m.value < b.value,
        };
        if better {
            best = Some((i, m));
        }
    }
    let (best_start, min) = best.expect("at least one start");
    let (_, params) = prof.evaluate(&min.x);
    let params = params.ok_or(Error::Precondition("no starting point produced a finite likelihood"))?;

    let spec = prof.spec(&params);
    let loglik = prof.ev.loglik(&params, &spec)?;
    let std_errors = if options.std_errors {
        standard_errors(negative_hessian(&mut prof.ev, &params, n))
    } else {
        None
    };
    Ok(EstimationResult {
        hessian_positive_definite: std_errors.is_some(),
        std_errors,
        loglik,
        converged: min.converged,
        iterations: evals,
        fourier_order: k,
        best_start,
        params,
    })
}

/// Log-likelihood along a grid of `d`, all other parameters held at `params`.
pub fn profile_loglik_d(
    series: &SeriesPair,
    params: &ModelParams,
    spec: &InterceptSpec,
    truncation: usize,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let mut ev = Evaluator::new(series, truncation);
    grid.iter()
        .map(|&d| {
            let p = ModelParams { d, ..params.clone() };
            ev.loglik(&p, spec).map(|l| (d, l))
        })
        .collect()
}
