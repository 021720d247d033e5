mod common;

use arhygarch_core::distributions::{normal_logpdf, std_t_logpdf};
use arhygarch_core::inference::{filter_volatility, loglik, SeriesPair};
use arhygarch_core::model::{InterceptSpec, ModelParams};
use common::{log_h_oracle, loglik_oracle, omega_path, synthetic_series};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_params(rng: &mut impl Rng, k: usize) -> ModelParams {
    ModelParams {
        omega0: rng.random_range(-0.3..0.3),
        gamma: rng.random_range(0.0..0.5),
        beta: rng.random_range(0.1..0.8),
        d: rng.random_range(0.1..0.8),
        delta: rng.random_range(0.3..1.2),
        nu: rng.random_range(2.5..12.0),
        xi: rng.random_range(-0.3..0.3),
        phi: rng.random_range(0.5..1.2),
        tau1: rng.random_range(-0.2..0.2),
        tau2: rng.random_range(-0.2..0.2),
        sigma_u2: rng.random_range(0.1..1.0),
        fourier_a: (0..k).map(|_| rng.random_range(-0.05..0.05)).collect(),
        fourier_b: (0..k).map(|_| rng.random_range(-0.05..0.05)).collect(),
    }
}

#[test]
fn loglik_matches_straight_line_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for case in 0..20 {
        let n = 50;
        let k = case % 3;
        let truncation = [10, 49, 80][case % 3];
        let (r, x) = synthetic_series(&mut rng, n);
        let p = random_params(&mut rng, k);
        let spec = InterceptSpec::fourier(p.fourier_a.clone(), p.fourier_b.clone(), n).unwrap();
        let series = SeriesPair::new(r.clone(), x.clone()).unwrap();
        let got = loglik(&series, &p, &spec, truncation).unwrap();
        let want = loglik_oracle(&r, &x, &p, &omega_path(&p, n), truncation);
        assert!((got - want).abs() < 1e-9, "case {case}: {got} vs {want}");
        let lh = filter_volatility(&series, &p, &spec, truncation).unwrap().log_h;
        let lh_want = log_h_oracle(&x, &p, &omega_path(&p, n), truncation);
        for t in 0..n {
            assert!((lh[t] - lh_want[t]).abs() < 1e-12);
        }
    }
}

/// Composite Simpson on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn standardized_t_integrates_to_one() {
    use statrs::distribution::{ContinuousCDF, StudentsT};
    for nu in [2.5f64, 3.0, 4.0, 5.0, 10.0, 30.0] {
        let mass = simpson(|z| std_t_logpdf(z, nu).unwrap().exp(), -50.0, 50.0, 400_000);
        // probability outside [-50, 50] from the reference distribution
        let scale = ((nu - 2.0) / nu).sqrt();
        let tail = 2.0 * StudentsT::new(0.0, scale, nu).unwrap().sf(50.0);
        assert!((mass + tail - 1.0).abs() < 1e-6, "nu={nu}: {mass} + {tail}");
        if nu >= 4.0 {
            assert!((mass - 1.0).abs() < 1e-6, "nu={nu}");
        }
        let var = simpson(|z| z * z * std_t_logpdf(z, nu).unwrap().exp(), -50.0, 50.0, 400_000);
        if nu >= 10.0 {
            assert!((var - 1.0).abs() < 1e-3, "unit variance, nu={nu}: {var}");
        }
    }
}

#[test]
fn normal_integrates_to_one() {
    for s2 in [0.01f64, 0.4, 1.0, 7.5] {
        let s = s2.sqrt();
        let mass = simpson(|u| normal_logpdf(u, s2).unwrap().exp(), -40.0 * s, 40.0 * s, 200_000);
        assert!((mass - 1.0).abs() < 1e-9, "s2={s2}: {mass}");
    }
}

#[test]
fn densities_match_statrs() {
    use statrs::distribution::{Continuous, Normal, StudentsT};
    for nu in [2.2f64, 3.0, 7.0] {
        let t = StudentsT::new(0.0, ((nu - 2.0) / nu).sqrt(), nu).unwrap();
        for z in [-4.0, -0.3, 0.0, 1.7, 12.0] {
            assert!((std_t_logpdf(z, nu).unwrap() - t.ln_pdf(z)).abs() < 1e-12);
        }
    }
    let n = Normal::new(0.0, 0.4f64.sqrt()).unwrap();
    for u in [-3.0, 0.0, 0.25] {
        assert!((normal_logpdf(u, 0.4).unwrap() - n.ln_pdf(u)).abs() < 1e-13);
    }
}

#[test]
fn central_difference_gradient_richardson_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 200;
    let (r, x) = synthetic_series(&mut rng, n);
    let series = SeriesPair::new(r, x).unwrap();
    let p0 = random_params(&mut rng, 1);
    let spec = InterceptSpec::fourier(p0.fourier_a.clone(), p0.fourier_b.clone(), n).unwrap();
    let f = |theta: &[f64]| loglik(&series, &ModelParams::from_slice(theta).unwrap(), &spec, 100).unwrap();
    let theta = p0.to_vec();
    let central = |i: usize, h: f64| {
        let (mut up, mut dn) = (theta.clone(), theta.clone());
        up[i] += h;
        dn[i] -= h;
        (f(&up) - f(&dn)) / (2.0 * h)
    };
    // omega0, gamma, beta, d, delta, nu, phi, sigma_u2, a1
    for i in [0, 1, 2, 3, 4, 5, 7, 10, 11] {
        let h = 0.02 * theta[i].abs().max(0.05);
        let (d1, d2) = (central(i, h), central(i, h / 2.0));
        let (d4, d8) = (central(i, h / 4.0), central(i, h / 8.0));
        let reference = (4.0 * d8 - d4) / 3.0;
        let (e1, e2) = (d1 - reference, d2 - reference);
        // the extrapolated estimate from (h, h/2) beats both raw differences
        let rich = (4.0 * d2 - d1) / 3.0;
        assert!((rich - reference).abs() <= e2.abs() + 1e-9 * reference.abs(), "param {i}");
        if e2.abs() > 1e-7 * (1.0 + reference.abs()) {
            let ratio = e1 / e2;
            assert!((3.0..5.0).contains(&ratio), "param {i}: error ratio {ratio}");
        }
    }
}
