mod common;

use arhygarch_core::lagpoly::{fracdiff_coeffs, fracdiff_partial_sum, hygarch_weights};
use common::{filter_oracle, phi_gamma, weights_oracle};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn weights_match_convolution_oracle_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let j = 200;
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let d = rng.random_range(0.01..0.99);
        let beta = rng.random_range(-0.95..0.95);
        let gamma = rng.random_range(-0.95..0.95);
        let delta = rng.random_range(0.05..3.0);
        let lw = hygarch_weights(d, beta, gamma, delta, j).unwrap();
        let w = weights_oracle(d, beta, gamma, delta, j);
        let c = filter_oracle(d, beta, gamma, j);
        for k in 0..=j {
            worst = worst.max((lw.weights()[k] - w[k]).abs());
            worst = worst.max((lw.pi_coeffs()[k] - c[k]).abs());
        }
    }
    assert!(worst < 1e-10, "max deviation {worst:e}");
}

#[test]
fn fracdiff_recurrence_matches_gamma_route() {
    for d in [0.05, 0.25, 0.45, 0.8] {
        let phi = fracdiff_coeffs(d, 3000).unwrap();
        for j in [0, 1, 2, 10, 100, 1000, 3000] {
            let want = phi_gamma(d, j);
            assert!((phi.get(j) - want).abs() <= 1e-12 * want.abs().max(1e-300) + 1e-15, "d={d} j={j}");
        }
    }
}

#[test]
fn first_coefficients_closed_form() {
    for d in [0.25, 0.35, 0.45] {
        let phi = fracdiff_coeffs(d, 10).unwrap();
        assert!((phi.get(1) + d).abs() < 1e-14);
        assert!((phi.get(2) - d * (d - 1.0) / 2.0).abs() < 1e-14);
    }
}

#[test]
fn partial_sums_bounded_and_increasing() {
    for d in [0.25, 0.45] {
        let phi = fracdiff_coeffs(d, 1000).unwrap();
        let mut acc = 0.0;
        for j in 1..=1000 {
            let next = acc - phi.get(j);
            assert!(next > acc, "d={d} j={j}");
            acc = next;
        }
        assert!(acc > 0.8 && acc < 1.0, "d={d}: {acc}");
        // hyperbolic tail: 1 - acc is the partial sum S_1001 ~ n^-d / Gamma(1 - d)
        assert!((1.0 - acc - fracdiff_partial_sum(d, 1001)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(200) })]

    #[test]
    fn zero_beta_gamma_gives_scaled_fracdiff(d in 0.0f64..0.99, delta in 0.01f64..5.0) {
        let lw = hygarch_weights(d, 0.0, 0.0, delta, 50).unwrap();
        let phi = fracdiff_coeffs(d, 50).unwrap();
        for j in 1..=50 {
            prop_assert!((lw.weight(j) + delta * phi.get(j)).abs() < 1e-15);
        }
    }

    #[test]
    fn weights_linear_in_delta(d in 0.01f64..0.99, beta in -0.9f64..0.9, gamma in -0.9f64..0.9, delta in 0.01f64..5.0) {
        let one = hygarch_weights(d, beta, gamma, 1.0, 100).unwrap();
        let lw = hygarch_weights(d, beta, gamma, delta, 100).unwrap();
        for j in 0..=100 {
            prop_assert!((lw.weights()[j] - delta * one.weights()[j]).abs() <= 1e-14 * (1.0 + one.weights()[j].abs()) * delta);
        }
    }

    #[test]
    fn partial_sums_telescope(d in 0.01f64..0.99, n in 1usize..2000) {
        let phi = fracdiff_coeffs(d, n).unwrap();
        let direct: f64 = phi.coeffs()[..n].iter().sum();
        prop_assert!((direct - fracdiff_partial_sum(d, n)).abs() < 1e-12);
    }
}
