use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Shape of the intercept path `omega_t`.
#[derive(Debug, Clone, PartialEq)]
pub enum Intercept {
    /// `omega0 + sum_j [a_j sin(2 pi j t / T) + b_j cos(2 pi j t / T)]`.
    Fourier { a: Vec<f64>, b: Vec<f64> },
    /// Constant level (design m1).
    Constant(f64),
    /// `low` for `t <= T/2`, `high` afterwards (design m2).
    OneBreak { low: f64, high: f64 },
    /// Levels over `t <= T/3`, `T/3 < t <= 2T/3`, `t > 2T/3` (design m3).
    TwoBreaks { first: f64, second: f64, third: f64 },
}

/// An intercept path over `t = 1..=len`. Break points use integer division of `len`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterceptSpec {
    pub shape: Intercept,
    pub len: usize,
}

impl InterceptSpec {
    pub fn fourier(a: Vec<f64>, b: Vec<f64>, len: usize) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Length {
                what: "fourier a vs b",
                left: a.len(),
                right: b.len(),
            });
        }
        Ok(Self {
            shape: Intercept::Fourier { a, b },
            len,
        })
    }

    /// Order-zero Fourier form, i.e. the constant `omega0`.
    pub fn constant_omega(len: usize) -> Self {
        Self {
            shape: Intercept::Fourier {
                a: Vec::new(),
                b: Vec::new(),
            },
            len,
        }
    }

    pub fn fourier_order(&self) -> usize {
        match &self.shape {
            Intercept::Fourier { a, .. } => a.len(),
            _ => 0,
        }
    }

    /// `omega_t` for every `t = 1..=len`.
    pub fn path(&self, omega0: f64) -> Vec<f64> {
        (1..=self.len).map(|t| self.value(t, omega0)).collect()
    }

    pub(crate) fn value(&self, t: usize, omega0: f64) -> f64 {
        let n = self.len;
        match &self.shape {
            Intercept::Fourier { a, b } => {
                let base = 2.0 * PI * t as f64 / n as f64;
                a.iter().zip(b).enumerate().fold(omega0, |acc, (j, (aj, bj))| {
                    let x = base * (j + 1) as f64;
                    acc + aj * libm::sin(x) + bj * libm::cos(x)
                })
            }
            Intercept::Constant(w) => *w,
            Intercept::OneBreak { low, high } => {
                if t <= n / 2 {
                    *low
                } else {
                    *high
                }
            }
            Intercept::TwoBreaks { first, second, third } => {
                if t <= n / 3 {
                    *first
                } else if t <= 2 * n / 3 {
                    *second
                } else {
                    *third
                }
            }
        }
    }
}

/// `omega_t` at `t` (1-based). `omega0` is used only by the Fourier form.
pub fn intercept_at(spec: &InterceptSpec, t: usize, omega0: f64) -> Result<f64> {
    if t == 0 || t > spec.len {
        return Err(Error::Index { t, len: spec.len });
    }
    Ok(spec.value(t, omega0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterceptBounds {
    pub lower: f64,
    pub upper: f64,
    /// The harmonic mass satisfies `sum_j (|a_j| + |b_j|) <= min(1, omega0)`.
    pub certified: bool,
}

/// Bounds on the Fourier intercept.
///
/// When certified the bounds are `[0, omega0 + 2]`; otherwise the
/// triangle-inequality envelope `omega0 -/+ sum_j (|a_j| + |b_j|)` is returned.
pub fn intercept_bounds(omega0: f64, a: &[f64], b: &[f64]) -> InterceptBounds {
    let mass: f64 = a.iter().chain(b).map(|v| v.abs()).sum();
    let certified = mass <= omega0.min(1.0);
    if certified {
        InterceptBounds {
            lower: 0.0,
            upper: omega0 + 2.0,
            certified,
        }
    } else {
        InterceptBounds {
            lower: omega0 - mass,
            upper: omega0 + mass,
            certified,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn order_zero_is_omega0() {
        let s = InterceptSpec::constant_omega(100);
        for t in [1, 37, 100] {
            assert_eq!(intercept_at(&s, t, 0.1).unwrap(), 0.1);
        }
    }

    #[test]
    fn cosine_term_at_end_of_sample() {
        let s = InterceptSpec::fourier(vec![0.0], vec![0.2], 500).unwrap();
        assert!((intercept_at(&s, 500, 0.1).unwrap() - 0.3).abs() < 1e-14);
    }

    #[test]
    fn index_errors() {
        let s = InterceptSpec::constant_omega(10);
        assert_eq!(intercept_at(&s, 0, 0.1), Err(Error::Index { t: 0, len: 10 }));
        assert!(intercept_at(&s, 11, 0.1).is_err());
    }

    #[test]
    fn break_points() {
        let m2 = InterceptSpec {
            shape: Intercept::OneBreak { low: 0.1, high: 0.5 },
            len: 3000,
        };
        assert_eq!(intercept_at(&m2, 1500, 0.0).unwrap(), 0.1);
        assert_eq!(intercept_at(&m2, 1501, 0.0).unwrap(), 0.5);
        let m3 = InterceptSpec {
            shape: Intercept::TwoBreaks {
                first: 0.1,
                second: 0.5,
                third: 0.3,
            },
            len: 3000,
        };
        assert_eq!(intercept_at(&m3, 1000, 0.0).unwrap(), 0.1);
        assert_eq!(intercept_at(&m3, 1001, 0.0).unwrap(), 0.5);
        assert_eq!(intercept_at(&m3, 2000, 0.0).unwrap(), 0.5);
        assert_eq!(intercept_at(&m3, 2001, 0.0).unwrap(), 0.3);
    }

    #[test]
    fn bounds() {
        let b = intercept_bounds(0.1, &[], &[]);
        assert_eq!(
            b,
            InterceptBounds {
                lower: 0.0,
                upper: 2.1,
                certified: true
            }
        );
        assert!(intercept_bounds(0.1, &[0.05], &[0.05]).certified);
        assert!(!intercept_bounds(0.1, &[0.5], &[0.0]).certified);
    }

    #[test]
    fn certified_path_stays_within_bounds() {
        let (a, b) = (vec![0.03, -0.02, 0.01], vec![0.02, 0.01, -0.01]);
        let bounds = intercept_bounds(0.1, &a, &b);
        assert!(bounds.certified);
        let s = InterceptSpec::fourier(a, b, 2000).unwrap();
        for w in s.path(0.1) {
            assert!(w >= bounds.lower && w <= bounds.upper);
        }
    }
}
