//! Nelder-Mead simplex search with dimension-adaptive coefficients
//! (Gao & Han, 2012) and restarts from the incumbent.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    pub max_evals: usize,
    /// Convergence when the spread of simplex values is below this...
    pub f_tol: f64,
    /// ...and every vertex is within this distance (max-norm) of the best one.
    pub x_tol: f64,
    /// Fresh simplices built around the incumbent after convergence.
    pub restarts: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_evals: 4000,
            f_tol: 1e-7,
            x_tol: 1e-5,
            restarts: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

struct Budget<F> {
    f: F,
    evals: usize,
}

impl<F: FnMut(&[f64]) -> f64> Budget<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

impl NelderMead {
    /// Minimizes `f` from `x0`; `step[i]` is the initial edge along coordinate `i`.
    pub fn minimize<F: FnMut(&[f64]) -> f64>(&self, f: F, x0: &[f64], step: &[f64]) -> Minimum {
        assert_eq!(x0.len(), step.len());
        let mut budget = Budget { f, evals: 0 };
        let mut best_x = x0.to_vec();
        let mut best_v = budget.eval(x0);
        let mut converged = false;
        for round in 0..=self.restarts {
            let (x, v, ok) = self.run(&mut budget, &best_x, best_v, step);
            let improved = best_v - v;
            if v <= best_v {
                best_x = x;
                best_v = v;
            }
            converged = ok;
            if !ok || (round > 0 && improved <= self.f_tol) {
                break;
            }
        }
        Minimum {
            x: best_x,
            value: best_v,
            evals: budget.evals,
            converged,
        }
    }

    fn run<F: FnMut(&[f64]) -> f64>(
        &self,
        budget: &mut Budget<F>,
        x0: &[f64],
        f0: f64,
        step: &[f64],
    ) -> (Vec<f64>, f64, bool) {
        let n = x0.len();
        let nf = n as f64;
        let (alpha, chi, psi, sigma) = if n >= 2 {
            (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
        } else {
            (1.0, 2.0, 0.5, 0.5)
        };

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        let mut values: Vec<f64> = Vec::with_capacity(n + 1);
        simplex.push(x0.to_vec());
        values.push(f0);
        for i in 0..n {
            let mut v = x0.to_vec();
            v[i] += step[i];
            values.push(budget.eval(&v));
            simplex.push(v);
        }

        let mut order: Vec<usize> = (0..=n).collect();
        let mut centroid = vec![0.0; n];
        let mut trial = vec![0.0; n];
        let mut trial2 = vec![0.0; n];
        loop {
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
            let (best, worst, second) = (order[0], order[n], order[n - usize::from(n > 0)]);

            let spread = values[worst] - values[best];
            let size = simplex
                .iter()
                .flat_map(|v| v.iter().zip(&simplex[best]).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if spread.is_finite() && spread <= self.f_tol && size <= self.x_tol {
                return (simplex[best].clone(), values[best], true);
            }
            if budget.evals >= self.max_evals {
                return (simplex[best].clone(), values[best], false);
            }

            centroid.iter_mut().for_each(|c| *c = 0.0);
            for &i in &order[..n] {
                for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                    *c += x / nf;
                }
            }
            let toward = |coef: f64, out: &mut Vec<f64>, worst_x: &[f64]| {
                for ((o, c), w) in out.iter_mut().zip(&centroid).zip(worst_x) {
                    *o = c + coef * (c - w);
                }
            };

            toward(alpha, &mut trial, &simplex[worst]);
            let fr = budget.eval(&trial);
            if fr < values[best] {
                toward(alpha * chi, &mut trial2, &simplex[worst]);
                let fe = budget.eval(&trial2);
                if fe < fr {
                    simplex[worst].copy_from_slice(&trial2);
                    values[worst] = fe;
                } else {
                    simplex[worst].copy_from_slice(&trial);
                    values[worst] = fr;
                }
                continue;
            }
            if fr < values[second] {
                simplex[worst].copy_from_slice(&trial);
                values[worst] = fr;
                continue;
            }
            let (coef, bound) = if fr < values[worst] {
                (alpha * psi, fr)
            } else {
                (-psi, values[worst])
            };
            toward(coef, &mut trial2, &simplex[worst]);
            let fc = budget.eval(&trial2);
            if fc <= bound {
                simplex[worst].copy_from_slice(&trial2);
                values[worst] = fc;
                continue;
            }
            let anchor = simplex[best].clone();
            for &i in &order[1..] {
                for (x, a) in simplex[i].iter_mut().zip(&anchor) {
                    *x = a + sigma * (*x - a);
                }
                values[i] = budget.eval(&simplex[i]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let nm = NelderMead {
            max_evals: 10_000,
            f_tol: 1e-14,
            x_tol: 1e-8,
            restarts: 2,
        };
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nm.minimize(f, &[-1.2, 1.0], &[0.5, 0.5]);
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4, "{:?}", m.x);
    }

    #[test]
    fn quadratic_in_eight_dimensions() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * (v - 0.5).powi(2)).sum::<f64>();
        let m = NelderMead::default().minimize(f, &[0.0; 8], &[0.3; 8]);
        assert!(m.converged);
        assert!(m.x.iter().all(|v| (v - 0.5).abs() < 1e-3), "{:?}", m.x);
    }

    #[test]
    fn never_worse_than_start_and_respects_budget() {
        let f = |x: &[f64]| libm::fabs(x[0]) + libm::sin(5.0 * x[1]);
        let nm = NelderMead {
            max_evals: 50,
            ..NelderMead::default()
        };
        let m = nm.minimize(f, &[0.2, 0.1], &[0.1, 0.1]);
        assert!(m.value <= f(&[0.2, 0.1]));
        assert!(m.evals <= 50 + 3);
        assert!(!m.converged);
    }

    #[test]
    fn nan_treated_as_infinite() {
        let f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 1.0).powi(2) };
        let m = NelderMead::default().minimize(f, &[0.5], &[0.2]);
        assert!((m.x[0] - 1.0).abs() < 1e-3);
    }
}
