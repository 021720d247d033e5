use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::distributions::t_log_norm_ratio;
use crate::error::{Error, Result};
use crate::lagpoly::hygarch_weights;
use crate::model::{InterceptSpec, ModelParams};
use crate::simulate::SimulatedSeries;

/// Returned by [`loglik`] for parameters outside the model's domain.
pub const LOGLIK_SENTINEL: f64 = -1e300;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Aligned returns and realized measures, `t = 1..=T` at index `t - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPair {
    r: Vec<f64>,
    x: Vec<f64>,
}

impl SeriesPair {
    /// Rejects empty or unequal series, non-finite values and `x <= 0`.
    pub fn new(r: Vec<f64>, x: Vec<f64>) -> Result<Self> {
        if r.len() != x.len() {
            return Err(Error::Length {
                what: "returns vs realized measures",
                left: r.len(),
                right: x.len(),
            });
        }
        if r.is_empty() {
            return Err(Error::Precondition("series is empty"));
        }
        for (index, (ri, xi)) in r.iter().zip(&x).enumerate() {
            if !ri.is_finite() {
                return Err(Error::Data {
                    index,
                    reason: "return is not finite",
                });
            }
            if !xi.is_finite() {
                return Err(Error::Data {
                    index,
                    reason: "realized measure is not finite",
                });
            }
            if *xi <= 0.0 {
                return Err(Error::Data {
                    index,
                    reason: "realized measure must be positive",
                });
            }
        }
        Ok(Self { r, x })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn returns(&self) -> &[f64] {
        &self.r
    }

    pub fn measures(&self) -> &[f64] {
        &self.x
    }
}

impl From<&SimulatedSeries> for SeriesPair {
    fn from(s: &SimulatedSeries) -> Self {
        Self {
            r: s.r.clone(),
            x: s.x.clone(),
        }
    }
}

/// Causal convolution backend: `out[t] = sum_{j=0}^{min(t, W-1)} weights[j] signal[t-j]`.
pub trait LagConvolver {
    fn causal_convolve(&mut self, weights: &[f64], signal: &[f64], out: &mut [f64]);
}

/// `O(T W)` direct summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct DirectConvolver;

impl LagConvolver for DirectConvolver {
    fn causal_convolve(&mut self, weights: &[f64], signal: &[f64], out: &mut [f64]) {
        for (t, o) in out.iter_mut().enumerate().take(signal.len()) {
            let lags = t.min(weights.len().saturating_sub(1));
            *o = weights[..=lags]
                .iter()
                .zip(signal[t - lags..=t].iter().rev())
                .map(|(w, s)| w * s)
                .sum();
        }
    }
}

impl<C: LagConvolver + ?Sized> LagConvolver for &mut C {
    fn causal_convolve(&mut self, weights: &[f64], signal: &[f64], out: &mut [f64]) {
        (**self).causal_convolve(weights, signal, out)
    }
}

/// Value standing in for `log x_t` before the first observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PresampleFill {
    /// Sample mean of the observed `log x`.
    SampleMean,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutput {
    pub log_h: Vec<f64>,
    pub u: Vec<f64>,
    pub z: Vec<f64>,
    pub truncation: usize,
    pub presample_fill: f64,
}

/// The two additive pieces of the log-likelihood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoglikParts {
    /// Student-t term for returns given the realized measures.
    pub returns: f64,
    /// Gaussian term for the measurement equation.
    pub measurement: f64,
}

impl LoglikParts {
    pub fn total(&self) -> f64 {
        self.returns + self.measurement
    }
}

/// Repeated filtering and likelihood evaluation on one series.
pub struct Evaluator<'a, C = DirectConvolver> {
    series: &'a SeriesPair,
    log_x: Vec<f64>,
    truncation: usize,
    fill: f64,
    conv: C,
    scratch: Vec<f64>,
}

impl<'a> Evaluator<'a, DirectConvolver> {
    pub fn new(series: &'a SeriesPair, truncation: usize) -> Self {
        Self::with_convolver(series, truncation, PresampleFill::SampleMean, DirectConvolver)
    }
}

impl<'a, C: LagConvolver> Evaluator<'a, C> {
    pub fn with_convolver(series: &'a SeriesPair, truncation: usize, presample: PresampleFill, conv: C) -> Self {
        let log_x: Vec<f64> = series.x.iter().map(|x| libm::log(*x)).collect();
        let fill = match presample {
            PresampleFill::SampleMean => log_x.iter().sum::<f64>() / log_x.len() as f64,
            PresampleFill::Value(v) => v,
        };
        Self {
            series,
            scratch: vec![0.0; log_x.len()],
            log_x,
            truncation,
            fill,
            conv,
        }
    }

    pub fn series(&self) -> &SeriesPair {
        self.series
    }

    pub fn log_x(&self) -> &[f64] {
        &self.log_x
    }

    pub fn presample_fill(&self) -> f64 {
        self.fill
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// `log h_t` for `t = 1..=T` into `out`.
    fn log_variance(&mut self, params: &ModelParams, spec: &InterceptSpec, out: &mut Vec<f64>) -> Result<()> {
        let n = self.log_x.len();
        if spec.len != n {
            return Err(Error::Length {
                what: "intercept length vs series length",
                left: spec.len,
                right: n,
            });
        }
        if self.truncation == 0 {
            return Err(Error::Precondition("truncation must be at least 1"));
        }
        let lw = hygarch_weights(params.d, params.beta, params.gamma, params.delta, self.truncation)?;
        let w = lw.weights();
        let used = self.truncation.min(n - 1);

        self.conv.causal_convolve(&w[..=used], &self.log_x, &mut self.scratch);

        // Lags j >= t reach before the sample: fill * sum_{j=t}^{J} w_j.
        let mut presample = w[n.min(self.truncation + 1)..].iter().sum::<f64>();
        out.clear();
        out.resize(n, 0.0);
        for t in (0..n).rev() {
            // here presample = sum_{j=t+1}^{J} w_j
            out[t] = spec.value(t + 1, params.omega0) + self.scratch[t] + self.fill * presample;
            if t >= 1 && t <= self.truncation {
                presample += w[t];
            }
        }
        Ok(())
    }

    /// Filtered `log h`, standardized returns `z` and measurement residuals `u`.
    pub fn filter(&mut self, params: &ModelParams, spec: &InterceptSpec) -> Result<FilterOutput> {
        let mut log_h = Vec::new();
        self.log_variance(params, spec, &mut log_h)?;
        let z: Vec<f64> = self
            .series
            .r
            .iter()
            .zip(&log_h)
            .map(|(r, lh)| r * libm::exp(-0.5 * lh))
            .collect();
        let u = self
            .log_x
            .iter()
            .zip(&log_h)
            .zip(&z)
            .map(|((lx, lh), z)| measurement_residual(params, *lx, *lh, *z))
            .collect();
        Ok(FilterOutput {
            log_h,
            u,
            z,
            truncation: self.truncation,
            presample_fill: self.fill,
        })
    }

    /// Both likelihood terms. Parameters outside the domain yield sentinel parts.
    pub fn loglik_parts(&mut self, params: &ModelParams, spec: &InterceptSpec) -> Result<LoglikParts> {
        let sentinel = LoglikParts {
            returns: LOGLIK_SENTINEL,
            measurement: 0.0,
        };
        if params.validate().is_err() || !(params.sigma_u2 > 0.0) {
            return Ok(sentinel);
        }
        let out = match self.filter(params, spec) {
            Ok(out) => out,
            Err(Error::Domain { .. }) => return Ok(sentinel),
            Err(e) => return Err(e),
        };
        let returns = returns_term(&out.log_h, &out.z, params.nu);
        let measurement = measurement_term(&out.u, params.sigma_u2);
        let parts = LoglikParts { returns, measurement };
        if parts.total().is_finite() {
            Ok(parts)
        } else {
            Ok(sentinel)
        }
    }

    pub fn loglik(&mut self, params: &ModelParams, spec: &InterceptSpec) -> Result<f64> {
        Ok(self.loglik_parts(params, spec)?.total())
    }
}

/// `sum_t [log f_t(z_t) - log h_t / 2]` for the unit-variance Student-t `f_t`.
pub(crate) fn returns_term(log_h: &[f64], z: &[f64], nu: f64) -> f64 {
    let t_norm = -t_log_norm_ratio(nu) - 0.5 * libm::log(PI * (nu - 2.0));
    let scale = 1.0 / (nu - 2.0);
    let power = 0.5 * (nu + 1.0);
    log_h
        .iter()
        .zip(z)
        .map(|(lh, z)| t_norm - 0.5 * lh - power * libm::log1p(z * z * scale))
        .sum()
}

pub(crate) fn measurement_term(u: &[f64], sigma2: f64) -> f64 {
    let c = LN_2PI + libm::log(sigma2);
    u.iter().map(|u| -0.5 * (c + u * u / sigma2)).sum()
}

#[inline]
pub(crate) fn measurement_residual(p: &ModelParams, log_x: f64, log_h: f64, z: f64) -> f64 {
    log_x - p.xi - p.phi * log_h - p.tau1 * z - p.tau2 * (z * z - 1.0)
}

/// Filters `log h_t` from observed data; presample `log x` is the sample mean.
pub fn filter_volatility(
    series: &SeriesPair,
    params: &ModelParams,
    spec: &InterceptSpec,
    truncation: usize,
) -> Result<FilterOutput> {
    Evaluator::new(series, truncation).filter(params, spec)
}

/// Joint log-likelihood; [`LOGLIK_SENTINEL`] for out-of-domain parameters.
pub fn loglik(series: &SeriesPair, params: &ModelParams, spec: &InterceptSpec, truncation: usize) -> Result<f64> {
    Evaluator::new(series, truncation).loglik(params, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{normal_logpdf, std_t_logpdf};

    #[test]
    fn series_validation() {
        assert!(SeriesPair::new(vec![0.1, 0.2], vec![1.0, 2.0]).is_ok());
        assert!(matches!(
            SeriesPair::new(vec![0.1, 0.2], vec![1.0, 0.0]),
            Err(Error::Data { index: 1, .. })
        ));
        assert!(matches!(
            SeriesPair::new(vec![f64::NAN], vec![1.0]),
            Err(Error::Data { index: 0, .. })
        ));
        assert!(matches!(SeriesPair::new(vec![0.1], vec![1.0, 2.0]), Err(Error::Length { .. })));
        assert!(SeriesPair::new(vec![], vec![]).is_err());
    }

    #[test]
    fn direct_convolution() {
        let mut out = vec![0.0; 4];
        DirectConvolver.causal_convolve(&[0.0, 1.0, 2.0], &[1.0, 10.0, 100.0, 1000.0], &mut out);
        assert_eq!(out, vec![0.0, 1.0, 12.0, 120.0]);
    }

    #[test]
    fn zero_weights_give_omega() {
        let series = SeriesPair::new(vec![0.3, -0.2, 0.5, 0.1], vec![1.2, 0.8, 1.5, 0.9]).unwrap();
        let mut p = ModelParams::baseline(0.0);
        p.gamma = p.beta;
        let out = filter_volatility(&series, &p, &InterceptSpec::constant_omega(4), 10).unwrap();
        assert!(out.log_h.iter().all(|v| (*v - 0.1).abs() < 1e-15));
    }

    #[test]
    fn presample_weights_are_accounted_for() {
        // Each log h_t uses the full J lags, split between data and fill.
        let series = SeriesPair::new(vec![0.1; 6], vec![1.0; 6]).unwrap();
        let p = ModelParams::baseline(0.35);
        let mut ev = Evaluator::with_convolver(&series, 4, PresampleFill::Value(2.0), DirectConvolver);
        let out = ev.filter(&p, &InterceptSpec::constant_omega(6)).unwrap();
        let w = hygarch_weights(0.35, 0.4, 0.1, 0.9, 4).unwrap();
        for t in 0..6 {
            let mut expect = 0.1;
            for j in 1..=4 {
                expect += w.weight(j) * if j <= t { 0.0 } else { 2.0 };
            }
            assert!((out.log_h[t] - expect).abs() < 1e-14, "t={t}");
        }
    }

    #[test]
    fn single_observation_likelihood() {
        let series = SeriesPair::new(vec![0.0], vec![1.0]).unwrap();
        let mut p = ModelParams::baseline(0.0);
        p.omega0 = 0.0;
        p.gamma = p.beta;
        p.tau1 = 0.0;
        p.tau2 = 0.0;
        p.sigma_u2 = 1.0;
        let spec = InterceptSpec::constant_omega(1);
        let mut ev = Evaluator::new(&series, 5);
        let parts = ev.loglik_parts(&p, &spec).unwrap();
        assert!((parts.returns - std_t_logpdf(0.0, 3.0).unwrap()).abs() < 1e-14);
        assert!((parts.measurement - normal_logpdf(0.0, 1.0).unwrap()).abs() < 1e-14);
        assert!((parts.total() + 1.370_522).abs() < 1e-6);
    }

    #[test]
    fn out_of_domain_is_sentinel() {
        let series = SeriesPair::new(vec![0.1, 0.2], vec![1.0, 2.0]).unwrap();
        let spec = InterceptSpec::constant_omega(2);
        let mut p = ModelParams::baseline(0.3);
        p.nu = 1.5;
        assert_eq!(loglik(&series, &p, &spec, 5).unwrap(), LOGLIK_SENTINEL);
        let mut p = ModelParams::baseline(0.3);
        p.sigma_u2 = 0.0;
        assert_eq!(loglik(&series, &p, &spec, 5).unwrap(), LOGLIK_SENTINEL);
        let p = ModelParams::baseline(0.3);
        assert!(loglik(&series, &p, &InterceptSpec::constant_omega(3), 5).is_err());
    }
}
