use arhygarch_core::inference::{estimate, OptimizerOptions, SeriesPair};
use arhygarch_core::model::{InterceptSpec, ModelParams};
use arhygarch_core::simulate::{make_design, simulate, Design, SimConfig};

fn series(design: Design, n: usize, seed: u64) -> SeriesPair {
    let cfg = SimConfig::new(ModelParams::baseline(0.45), make_design(design, n).unwrap())
        .truncation(n)
        .seed(seed, 0);
    SeriesPair::from(&simulate(&cfg).unwrap())
}

#[test]
fn warm_started_likelihood_nondecreasing_in_k() {
    let s = series(Design::M2, 400, 17);
    let mut opts = OptimizerOptions {
        truncation: 400,
        std_errors: false,
        ..OptimizerOptions::default()
    };
    let mut last = f64::NEG_INFINITY;
    for k in 0..=3 {
        let fit = estimate(&s, k, &opts).unwrap();
        assert_eq!(fit.params.fourier_order(), k);
        assert!(fit.loglik >= last - 1e-9, "k={k}: {} < {last}", fit.loglik);
        last = fit.loglik;
        opts.warm_start = Some(fit.params);
    }
}

#[test]
fn recovers_memory_parameter_roughly() {
    let s = series(Design::M1, 2000, 3);
    let fit = estimate(
        &s,
        0,
        &OptimizerOptions {
            truncation: 2000,
            ..OptimizerOptions::default()
        },
    )
    .unwrap();
    assert!((fit.params.d - 0.45).abs() < 0.25, "d_hat = {}", fit.params.d);
    let se = fit.std_errors.expect("standard errors");
    assert_eq!(se.len(), ModelParams::names(0).len());
    if fit.hessian_positive_definite {
        assert!(se[3] > 0.0 && se[3] < 1.0);
    }
    let spec = InterceptSpec::constant_omega(2000);
    let ll = arhygarch_core::inference::loglik(&s, &fit.params, &spec, 2000).unwrap();
    assert!((ll - fit.loglik).abs() < 1e-6 * ll.abs());
}
