//! Adaptive realized HYGARCH(1,d,1,k): a long-memory volatility model for
//! returns observed together with a realized measure, with a deterministic
//! time-varying intercept for structural breaks.
//!
//! ```text
//! r_t      = sqrt(h_t) z_t
//! log h_t  = omega_t + delta [1 - (1 - gamma L)/(1 - beta L) (1-L)^d] log x_t
//! log x_t  = xi + phi log h_t + tau1 z_t + tau2 (z_t^2 - 1) + u_t
//! omega_t  = omega0 + sum_j [a_j sin(2 pi j t/T) + b_j cos(2 pi j t/T)]
//! ```
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the CLI and the
//! parallel Monte Carlo runner live in the `arhygarch` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod distributions;
mod error;
pub mod inference;
pub mod lagpoly;
pub mod model;
pub mod montecarlo;
pub mod simulate;

pub use error::{Error, Result};
