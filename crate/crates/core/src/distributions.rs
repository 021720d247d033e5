//! Standardized Student-t and Gaussian densities and samplers.
//!
//! Random numbers come from ChaCha20 (`rand_chacha`). An [`RngStream`] is the
//! pair `(seed, stream_id)`: the 256-bit key is expanded from `seed` with
//! `SeedableRng::seed_from_u64`, and `stream_id` selects the ChaCha stream
//! (nonce). Each stream is cut into lanes of `2^64` words, so independent
//! innovation series taken from one stream never overlap. Student-t draws are
//! `N / sqrt(chi2_nu / (nu - 2))`, which has unit variance.

use core::f64::consts::PI;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::error::{Error, Result};

const LANE_WORDS: u128 = 1 << 64;
const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Deterministic random stream keyed by `(seed, stream_id)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self::lane(seed, stream_id, 0)
    }

    /// Lane `lane` (< 16) of stream `(seed, stream_id)`.
    pub fn lane(seed: u64, stream_id: u64, lane: u8) -> Self {
        assert!(lane < 16, "a ChaCha stream holds 16 lanes of 2^64 words");
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        rng.set_word_pos(LANE_WORDS * lane as u128);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub(crate) fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if nu > 2.0 && !nu.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "nu",
            value: nu,
            interval: "(2, inf)",
        })
    }
}

fn check_variance(sigma2: f64) -> Result<()> {
    if sigma2 > 0.0 && sigma2.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "sigma_u2",
            value: sigma2,
            interval: "(0, inf)",
        })
    }
}

/// `log Gamma(nu/2) - log Gamma((nu+1)/2)`.
pub fn t_log_norm_ratio(nu: f64) -> f64 {
    libm::lgamma(0.5 * nu) - libm::lgamma(0.5 * (nu + 1.0))
}

/// Log-density of the unit-variance Student-t with `nu` degrees of freedom.
pub fn std_t_logpdf(z: f64, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    Ok(std_t_logpdf_unchecked(z, nu))
}

#[inline]
pub(crate) fn std_t_logpdf_unchecked(z: f64, nu: f64) -> f64 {
    let s = nu - 2.0;
    -t_log_norm_ratio(nu) - 0.5 * libm::log(PI * s) - 0.5 * (nu + 1.0) * libm::log1p(z * z / s)
}

/// One unit-variance Student-t draw.
pub fn std_t_sample(rng: &mut RngStream, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    let chi2 = ChiSquared::new(nu).map_err(|_| Error::Domain {
        name: "nu",
        value: nu,
        interval: "(2, inf)",
    })?;
    Ok(std_t_draw(rng, &chi2, nu))
}

#[inline]
pub(crate) fn std_t_draw(rng: &mut RngStream, chi2: &ChiSquared<f64>, nu: f64) -> f64 {
    let n = rng.standard_normal();
    let c: f64 = chi2.sample(&mut rng.rng);
    n * libm::sqrt((nu - 2.0) / c)
}

/// Gaussian log-density with mean zero and variance `sigma2`.
pub fn normal_logpdf(u: f64, sigma2: f64) -> Result<f64> {
    check_variance(sigma2)?;
    Ok(normal_logpdf_unchecked(u, sigma2))
}

#[inline]
pub(crate) fn normal_logpdf_unchecked(u: f64, sigma2: f64) -> f64 {
    -0.5 * (LN_2PI + libm::log(sigma2) + u * u / sigma2)
}

/// One draw from `N(0, sigma2)`.
pub fn normal_sample(rng: &mut RngStream, sigma2: f64) -> Result<f64> {
    check_variance(sigma2)?;
    Ok(rng.standard_normal() * libm::sqrt(sigma2))
}
