//! Sufficient conditions for a bounded second moment, and the resulting bound.
//!
//! With signed fractional coefficients `pi_j` (so `pi_1 = -d`), define
//! `a = phi delta |beta - gamma + pi_1|`, `b = |beta delta|` and
//! `c = phi delta sum_{j>=0} |pi_{j+2} - gamma pi_{j+1}|`. The bounding system
//! `H_t <= M + B H_{t-1}` has
//!
//! ```text
//!     | a        b        c       |
//! B = | a/delta  b/delta  c/delta |      M = (f0, f0/delta, 0)
//!     | 1        0        0       |
//! ```
//!
//! whose eigenvalues are `0` and `((a + b/delta) -/+ sqrt((a + b/delta)^2 + 4c)) / 2`.
//!
//! The infinite sum in `c` is evaluated exactly: past the lag where
//! `(k - d)/(k + 1) >= gamma` every term has the same sign, and the remainder
//! telescopes through the partial sums of `(1-L)^d` (which sum to zero).

use nalgebra::{Matrix3, Vector3};

use super::ModelParams;
use crate::error::{Error, Result};
use crate::lagpoly::{fracdiff_coeffs, fracdiff_partial_sum};

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// `a + |beta| + c - 1`; must be `<= 0`.
    pub condition1: f64,
    /// `a + |beta|`; must be `<= 2`.
    pub condition2: f64,
    pub rho_closed_form: f64,
    /// Largest eigenvalue modulus of the explicit `B`, from a Schur decomposition.
    pub rho_numeric: f64,
    pub certified: bool,
    /// Upper bound on `(E log h_t, E log h_{1,t}, E log h_{t-1})`, when `rho < 1`.
    pub moment_bound: Option<[f64; 3]>,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Closed-form non-zero eigenvalues `(lambda_2, lambda_3)`.
    pub eigenvalues: (f64, f64),
    /// `sum_{j>=0} |pi_{j+2} - gamma pi_{j+1}|` including the analytic remainder.
    pub lag_sum: f64,
    /// Contribution of the remainder beyond the explicitly summed terms.
    pub truncation_error: f64,
    /// Number of explicitly summed terms minus one.
    pub explicit_terms: usize,
}

struct LagSum {
    total: f64,
    remainder: f64,
    explicit: usize,
}

/// `sum_{j>=0} |pi_{j+2} - gamma pi_{j+1}|` with at least `min_terms + 1` explicit terms.
fn lag_sum(d: f64, gamma: f64, min_terms: usize) -> Result<LagSum> {
    let mut explicit = min_terms;
    if d > 0.0 && d < 1.0 && gamma < 1.0 {
        // k = explicit + 2 is the first ratio index governing the remainder.
        while ((explicit + 2) as f64 - d) / ((explicit + 3) as f64) < gamma {
            explicit += 1;
        }
    } else if d > 0.0 && d < 1.0 {
        return Err(Error::Domain {
            name: "gamma",
            value: gamma,
            interval: "(-1, 1)",
        });
    }
    let pi = fracdiff_coeffs(d, explicit + 2)?;
    let pi = pi.coeffs();
    let head: f64 = (0..=explicit).map(|j| (pi[j + 2] - gamma * pi[j + 1]).abs()).sum();
    let remainder = if d > 0.0 && d < 1.0 {
        let tail = -fracdiff_partial_sum(d, explicit + 3) + gamma * fracdiff_partial_sum(d, explicit + 2);
        tail.abs()
    } else {
        0.0
    };
    Ok(LagSum {
        total: head + remainder,
        remainder,
        explicit,
    })
}

struct Pieces {
    a: f64,
    b: f64,
    c: f64,
    first: f64,
    lag: LagSum,
}

fn pieces(params: &ModelParams, truncation: usize) -> Result<Pieces> {
    if !(params.beta.abs() < 1.0) {
        return Err(Error::Domain {
            name: "beta",
            value: params.beta,
            interval: "(-1, 1)",
        });
    }
    if !(params.delta > 0.0) {
        return Err(Error::Domain {
            name: "delta",
            value: params.delta,
            interval: "(0, inf)",
        });
    }
    if !(0.0..=1.0).contains(&params.d) {
        return Err(Error::Domain {
            name: "d",
            value: params.d,
            interval: "[0, 1]",
        });
    }
    let lag = lag_sum(params.d, params.gamma, truncation)?;
    let first = (params.beta - params.gamma - params.d).abs();
    let scale = params.phi.abs() * params.delta;
    Ok(Pieces {
        a: scale * first,
        b: (params.beta * params.delta).abs(),
        c: scale * lag.total,
        first,
        lag,
    })
}

fn matrix(p: &Pieces, delta: f64) -> Matrix3<f64> {
    Matrix3::new(p.a, p.b, p.c, p.a / delta, p.b / delta, p.c / delta, 1.0, 0.0, 0.0)
}

fn forcing(params: &ModelParams, p: &Pieces) -> Vector3<f64> {
    let c0 = params.omega0 + 2.0;
    let f0 = c0 * (1.0 - params.beta.abs()) + params.xi * params.delta * (p.first + p.lag.total);
    Vector3::new(f0, f0 / params.delta, 0.0)
}

/// The bounding system `(B, M)` as plain arrays (row-major `B`).
pub fn stability_matrix(params: &ModelParams, truncation: usize) -> Result<([[f64; 3]; 3], [f64; 3])> {
    let p = pieces(params, truncation)?;
    let b = matrix(&p, params.delta);
    let m = forcing(params, &p);
    let rows = [
        [b[(0, 0)], b[(0, 1)], b[(0, 2)]],
        [b[(1, 0)], b[(1, 1)], b[(1, 2)]],
        [b[(2, 0)], b[(2, 1)], b[(2, 2)]],
    ];
    Ok((rows, [m[0], m[1], m[2]]))
}

fn solve_bound(b: &Matrix3<f64>, m: &Vector3<f64>) -> Option<[f64; 3]> {
    let x = (Matrix3::identity() - b).lu().solve(m)?;
    Some([x[0], x[1], x[2]])
}

/// Evaluates both sufficient conditions and the spectral radius of `B`.
///
/// `truncation` is the minimum number of explicitly summed lag terms; the
/// remainder is added analytically and reported as `truncation_error`.
pub fn stability_check(params: &ModelParams, truncation: usize) -> Result<StabilityReport> {
    let p = pieces(params, truncation)?;
    let condition2 = p.a + params.beta.abs();
    let condition1 = condition2 + p.c - 1.0;
    let s = p.a + p.b / params.delta;
    let root = libm::sqrt(s * s + 4.0 * p.c);
    let eigenvalues = (0.5 * (s - root), 0.5 * (s + root));
    let rho_closed_form = eigenvalues.1;

    let b = matrix(&p, params.delta);
    let rho_numeric = b
        .complex_eigenvalues()
        .iter()
        .map(|z| libm::hypot(z.re, z.im))
        .fold(0.0, f64::max);

    let moment_bound = if rho_closed_form < 1.0 {
        solve_bound(&b, &forcing(params, &p))
    } else {
        None
    };

    Ok(StabilityReport {
        condition1,
        condition2,
        rho_closed_form,
        rho_numeric,
        certified: condition1 <= 0.0 && condition2 <= 2.0,
        moment_bound,
        a: p.a,
        b: p.b,
        c: p.c,
        eigenvalues,
        lag_sum: p.lag.total,
        truncation_error: p.lag.remainder,
        explicit_terms: p.lag.explicit,
    })
}

/// `(I - B)^{-1} M`, the asymptotic bound on the log-variance moments.
pub fn moment_bound(params: &ModelParams, truncation: usize) -> Result<[f64; 3]> {
    let p = pieces(params, truncation)?;
    let s = p.a + p.b / params.delta;
    let rho = 0.5 * (s + libm::sqrt(s * s + 4.0 * p.c));
    if !(rho < 1.0) {
        return Err(Error::Unstable { rho });
    }
    solve_bound(&matrix(&p, params.delta), &forcing(params, &p)).ok_or(Error::Unstable { rho })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_phi(d: f64) -> ModelParams {
        ModelParams::baseline(d)
    }

    #[test]
    fn high_memory_baseline_is_certified() {
        let r = stability_check(&unit_phi(0.45), 3000).unwrap();
        assert!((r.condition1 + 0.06).abs() < 1e-12, "{}", r.condition1);
        assert!((r.condition2 - 0.535).abs() < 1e-12);
        assert!(r.certified);
        assert!((r.rho_closed_form - 0.958).abs() < 1e-3);
        assert!((r.rho_closed_form - r.rho_numeric).abs() < 1e-8);
        assert!(r.moment_bound.is_some());
    }

    #[test]
    fn low_memory_baseline_fails_sufficient_condition() {
        let r = stability_check(&unit_phi(0.25), 3000).unwrap();
        assert!((r.condition1 - 0.03).abs() < 1e-12, "{}", r.condition1);
        assert!(!r.certified);
        assert!(r.rho_closed_form > 1.0);
        assert!(r.moment_bound.is_none());
        assert!(matches!(moment_bound(&unit_phi(0.25), 3000), Err(Error::Unstable { .. })));
    }

    #[test]
    fn lag_sum_matches_telescoped_limit() {
        for (d, g) in [(0.45, 0.1), (0.25, 0.1), (0.3, -0.2)] {
            let s = lag_sum(d, g, 50).unwrap();
            assert!((s.total - ((1.0 - d) - g)).abs() < 1e-12, "d={d} g={g}");
        }
    }

    #[test]
    fn degenerate_weights() {
        let mut p = unit_phi(0.0);
        p.gamma = 0.4;
        p.beta = 0.4;
        let r = stability_check(&p, 100).unwrap();
        assert_eq!(r.a, 0.0);
        assert!((r.condition1 - (0.4 - 1.0)).abs() < 1e-15);
        assert!(r.certified);
    }

    #[test]
    fn large_gamma_extends_explicit_terms() {
        let mut p = unit_phi(0.3);
        p.gamma = 0.95;
        let r = stability_check(&p, 5).unwrap();
        assert!(r.explicit_terms > 5);
        assert!(r.lag_sum.is_finite());
    }

    #[test]
    fn moment_bound_forcing() {
        let p = unit_phi(0.45);
        let (_, m) = stability_matrix(&p, 3000).unwrap();
        assert!((m[0] - 1.26).abs() < 1e-12);
        assert!((m[1] - m[0] / 0.9).abs() < 1e-15);
        assert_eq!(m[2], 0.0);
    }

    #[test]
    fn rejects_unit_beta() {
        let mut p = unit_phi(0.45);
        p.beta = -1.0;
        assert!(matches!(stability_check(&p, 10), Err(Error::Domain { name: "beta", .. })));
    }
}
