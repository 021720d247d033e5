//! Data-generating process for the A-Realized HYGARCH(1,d,1,k) model.
//!
//! `burn_in` extra steps are generated before the retained sample and then
//! discarded. Presample `log x` values are `omega0`. The burn-in runs at the
//! intercept of `t = 1`, so breaks only occur inside the retained sample.
//!
//! Innovations come from four lanes of one [`RngStream`]: retained `z`,
//! retained `u`, burn-in `z`, burn-in `u`. Burn-in draws are consumed
//! backwards in time, so the step just before `t = 1` always uses the first
//! burn-in draw and changing `burn_in` or `n_obs` never reshuffles the rest.

use alloc::vec;
use alloc::vec::Vec;

use rand_distr::ChiSquared;

use crate::distributions::{std_t_draw, RngStream};
use crate::error::{Error, Result};
use crate::lagpoly::hygarch_weights;
use crate::model::{Intercept, InterceptSpec, ModelParams};

/// Guard band on `|log h_t|`.
pub const LOG_H_LIMIT: f64 = 50.0;

/// Intercept designs of the simulation study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Design {
    /// Constant 0.1.
    M1,
    /// 0.1, then 0.5 after `T/2`.
    M2,
    /// 0.1, 0.5, 0.3 over thirds.
    M3,
}

impl Design {
    pub const ALL: [Design; 3] = [Design::M1, Design::M2, Design::M3];

    pub fn name(self) -> &'static str {
        match self {
            Design::M1 => "m1",
            Design::M2 => "m2",
            Design::M3 => "m3",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "m1" => Some(Design::M1),
            "m2" => Some(Design::M2),
            "m3" => Some(Design::M3),
            _ => None,
        }
    }
}

impl core::fmt::Display for Design {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

pub fn make_design(design: Design, len: usize) -> Result<InterceptSpec> {
    if len < 3 {
        return Err(Error::Precondition("break designs need at least 3 observations"));
    }
    let shape = match design {
        Design::M1 => Intercept::Constant(0.1),
        Design::M2 => Intercept::OneBreak { low: 0.1, high: 0.5 },
        Design::M3 => Intercept::TwoBreaks {
            first: 0.1,
            second: 0.5,
            third: 0.3,
        },
    };
    Ok(InterceptSpec { shape, len })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: ModelParams,
    pub intercept: InterceptSpec,
    pub n_obs: usize,
    pub burn_in: usize,
    pub truncation: usize,
    pub seed: u64,
    pub stream_id: u64,
}

impl SimConfig {
    /// Defaults: burn-in 1000, truncation 3000, seed 0, stream 0.
    pub fn new(params: ModelParams, intercept: InterceptSpec) -> Self {
        let n_obs = intercept.len;
        Self {
            params,
            intercept,
            n_obs,
            burn_in: 1000,
            truncation: 3000,
            seed: 0,
            stream_id: 0,
        }
    }

    pub fn burn_in(mut self, m: usize) -> Self {
        self.burn_in = m;
        self
    }

    pub fn truncation(mut self, j: usize) -> Self {
        self.truncation = j;
        self
    }

    pub fn seed(mut self, seed: u64, stream_id: u64) -> Self {
        self.seed = seed;
        self.stream_id = stream_id;
        self
    }
}

/// A simulated path, `t = 1..=T` stored at index `t - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedSeries {
    pub r: Vec<f64>,
    pub x: Vec<f64>,
    pub h: Vec<f64>,
    pub z: Vec<f64>,
    pub u: Vec<f64>,
}

impl SimulatedSeries {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn log_h(&self) -> Vec<f64> {
        self.h.iter().map(|h| libm::log(*h)).collect()
    }
}

struct Innovations {
    z: Vec<f64>,
    u: Vec<f64>,
}

fn draw_innovations(cfg: &SimConfig, sigma_u: f64, chi2: &ChiSquared<f64>) -> Innovations {
    let nu = cfg.params.nu;
    let (seed, stream) = (cfg.seed, cfg.stream_id);
    let mut z_rng = RngStream::lane(seed, stream, 0);
    let mut u_rng = RngStream::lane(seed, stream, 1);
    let mut zb_rng = RngStream::lane(seed, stream, 2);
    let mut ub_rng = RngStream::lane(seed, stream, 3);

    let total = cfg.burn_in + cfg.n_obs;
    let mut z = vec![0.0; total];
    let mut u = vec![0.0; total];
    for s in (0..cfg.burn_in).rev() {
        z[s] = std_t_draw(&mut zb_rng, chi2, nu);
        u[s] = ub_rng.standard_normal() * sigma_u;
    }
    for s in cfg.burn_in..total {
        z[s] = std_t_draw(&mut z_rng, chi2, nu);
        u[s] = u_rng.standard_normal() * sigma_u;
    }
    Innovations { z, u }
}

pub fn simulate(cfg: &SimConfig) -> Result<SimulatedSeries> {
    let p = &cfg.params;
    p.validate()?;
    if cfg.n_obs == 0 {
        return Err(Error::Precondition("n_obs must be at least 1"));
    }
    if cfg.intercept.len != cfg.n_obs {
        return Err(Error::Length {
            what: "intercept length vs n_obs",
            left: cfg.intercept.len,
            right: cfg.n_obs,
        });
    }
    let weights = hygarch_weights(p.d, p.beta, p.gamma, p.delta, cfg.truncation)?;
    let w = weights.weights();
    let j_max = cfg.truncation;

    // suffix[k] = sum_{j=k}^{J} w_j
    let mut suffix = vec![0.0; j_max + 2];
    for k in (1..=j_max).rev() {
        suffix[k] = suffix[k + 1] + w[k];
    }

    let chi2 = ChiSquared::new(p.nu).map_err(|_| Error::Domain {
        name: "nu",
        value: p.nu,
        interval: "(2, inf)",
    })?;
    let Innovations { z, u } = draw_innovations(cfg, libm::sqrt(p.sigma_u2), &chi2);

    let omega = cfg.intercept.path(p.omega0);
    let total = cfg.burn_in + cfg.n_obs;
    let mut log_x = vec![0.0; total];
    let mut log_h = vec![0.0; total];
    for s in 0..total {
        let omega_s = omega[s.saturating_sub(cfg.burn_in)];
        let lags = s.min(j_max);
        let mut acc = omega_s + p.omega0 * suffix[(s + 1).min(j_max + 1)];
        for j in 1..=lags {
            acc += w[j] * log_x[s - j];
        }
        if !(acc.abs() <= LOG_H_LIMIT) {
            return Err(Error::Explosive { step: s, value: acc });
        }
        log_h[s] = acc;
        let zs = z[s];
        log_x[s] = p.xi + p.phi * acc + p.tau1 * zs + p.tau2 * (zs * zs - 1.0) + u[s];
    }

    let keep = cfg.burn_in..total;
    let h: Vec<f64> = log_h[keep.clone()].iter().map(|v| libm::exp(*v)).collect();
    let z = z[keep.clone()].to_vec();
    let r = h.iter().zip(&z).map(|(h, z)| libm::sqrt(*h) * z).collect();
    let x = log_x[keep.clone()].iter().map(|v| libm::exp(*v)).collect();
    Ok(SimulatedSeries {
        r,
        x,
        h,
        z,
        u: u[keep].to_vec(),
    })
}
