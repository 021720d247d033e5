//! Flat TOML run configuration shared by every subcommand.
//!
//! ```toml
//! command = "montecarlo"
//! d_values = [0.25, 0.45]
//! k_values = [0, 3]
//! designs = ["m1", "m3"]
//! replications = 100
//! seed = 7
//! ```
//!
//! Unknown keys are rejected. Keys left out take the defaults of
//! [`RunConfig::default`].

use std::path::PathBuf;

use arhygarch_core::inference::OptimizerOptions;
use arhygarch_core::model::{InterceptSpec, ModelParams};
use arhygarch_core::montecarlo::StudyConfig;
use arhygarch_core::simulate::{make_design, Design, SimConfig};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("`{key}` = {value} is outside the legal interval {interval}")]
    Range { key: String, value: String, interval: &'static str },
    #[error("`{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Simulate,
    Estimate,
    Stability,
    Coeffs,
    Montecarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignKey {
    M1,
    M2,
    M3,
}

impl From<DesignKey> for Design {
    fn from(k: DesignKey) -> Self {
        match k {
            DesignKey::M1 => Design::M1,
            DesignKey::M2 => Design::M2,
            DesignKey::M3 => Design::M3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Text,
    Csv,
    Markdown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    /// Base seed; simulation uses stream `stream`, Monte Carlo replication `r` uses stream `r`.
    pub seed: u64,
    pub stream: u64,
    pub verbosity: u8,

    pub omega0: f64,
    pub gamma: f64,
    pub beta: f64,
    pub d: f64,
    pub delta: f64,
    pub nu: f64,
    pub xi: f64,
    pub phi: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub sigma_u2: f64,
    pub fourier_a: Vec<f64>,
    pub fourier_b: Vec<f64>,

    /// Structural-break intercept; when absent the Fourier intercept built
    /// from `omega0`, `fourier_a`, `fourier_b` is used.
    pub design: Option<DesignKey>,
    pub n_obs: usize,
    pub burn_in: usize,
    pub truncation: usize,
    pub write_h: bool,

    pub k: usize,
    pub starts: usize,
    pub max_evals: Option<usize>,
    pub std_errors: bool,

    pub d_values: Vec<f64>,
    pub k_values: Vec<usize>,
    pub designs: Vec<DesignKey>,
    pub replications: usize,
    pub include_nonconverged: bool,
    pub workers: Option<usize>,
    pub full: bool,
    pub format: ReportFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        let base = ModelParams::baseline(0.45);
        let study = StudyConfig::default();
        Self {
            command: None,
            input: None,
            out: None,
            seed: 0,
            stream: 0,
            verbosity: 0,
            omega0: base.omega0,
            gamma: base.gamma,
            beta: base.beta,
            d: base.d,
            delta: base.delta,
            nu: base.nu,
            xi: base.xi,
            phi: base.phi,
            tau1: base.tau1,
            tau2: base.tau2,
            sigma_u2: base.sigma_u2,
            fourier_a: Vec::new(),
            fourier_b: Vec::new(),
            design: None,
            n_obs: 1000,
            burn_in: 1000,
            truncation: 1000,
            write_h: false,
            k: 0,
            starts: 2,
            max_evals: None,
            std_errors: true,
            d_values: study.d_values,
            k_values: study.k_values,
            designs: vec![DesignKey::M1],
            replications: study.replications,
            include_nonconverged: study.include_nonconverged,
            workers: None,
            full: false,
            format: ReportFormat::Text,
        }
    }
}

fn check(key: &str, value: f64, ok: bool, interval: &'static str) -> Result<(), ConfigError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::Range {
            key: key.to_string(),
            value: value.to_string(),
            interval,
        })
    }
}

fn check_count(key: &str, value: usize, min: usize, interval: &'static str) -> Result<(), ConfigError> {
    if value >= min {
        Ok(())
    } else {
        Err(ConfigError::Range {
            key: key.to_string(),
            value: value.to_string(),
            interval,
        })
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        check("omega0", self.omega0, true, "(-inf, inf)")?;
        check("gamma", self.gamma, (0.0..0.999).contains(&self.gamma), "[0, 0.999)")?;
        check("beta", self.beta, self.beta > 0.0 && self.beta < 0.999, "(0, 0.999)")?;
        check("d", self.d, (0.0..1.0).contains(&self.d), "[0, 1)")?;
        check("delta", self.delta, self.delta > 0.0, "(0, inf)")?;
        check("nu", self.nu, self.nu > 2.0, "(2, inf)")?;
        check("xi", self.xi, true, "(-inf, inf)")?;
        check("phi", self.phi, true, "(-inf, inf)")?;
        check("tau1", self.tau1, true, "(-inf, inf)")?;
        check("tau2", self.tau2, true, "(-inf, inf)")?;
        check("sigma_u2", self.sigma_u2, self.sigma_u2 >= 0.0, "[0, inf)")?;
        if self.fourier_a.len() != self.fourier_b.len() {
            return Err(ConfigError::Invalid {
                key: "fourier_b",
                reason: format!(
                    "has {} entries but fourier_a has {}",
                    self.fourier_b.len(),
                    self.fourier_a.len()
                ),
            });
        }
        for (i, v) in self.fourier_a.iter().chain(&self.fourier_b).enumerate() {
            let n = self.fourier_a.len();
            let key = if i < n { format!("fourier_a[{i}]") } else { format!("fourier_b[{}]", i - n) };
            check(&key, *v, true, "(-inf, inf)")?;
        }
        check_count("n_obs", self.n_obs, 3, "[3, inf)")?;
        check_count("truncation", self.truncation, 1, "[1, inf)")?;
        check_count("starts", self.starts, 1, "[1, inf)")?;
        check_count("replications", self.replications, 1, "[1, inf)")?;
        if let Some(w) = self.workers {
            check_count("workers", w, 1, "[1, inf)")?;
        }
        if let Some(m) = self.max_evals {
            check_count("max_evals", m, 1, "[1, inf)")?;
        }
        for (i, d) in self.d_values.iter().enumerate() {
            check(&format!("d_values[{i}]"), *d, *d > 0.0 && *d < 1.0, "(0, 1)")?;
        }
        for (key, empty) in [
            ("d_values", self.d_values.is_empty()),
            ("k_values", self.k_values.is_empty()),
            ("designs", self.designs.is_empty()),
        ] {
            if empty {
                return Err(ConfigError::Invalid {
                    key,
                    reason: "must not be empty".into(),
                });
            }
        }
        Ok(())
    }

    /// Full-scale study size: 500 replications of 3000 observations, truncation 3000.
    pub fn apply_full(&mut self) {
        self.full = true;
        self.replications = 500;
        self.n_obs = 3000;
        self.truncation = 3000;
    }

    /// Canonical TOML text; parsing it yields an identical configuration.
    pub fn echo(&self) -> String {
        toml::to_string(self).expect("flat config always serializes")
    }

    pub fn model_params(&self) -> ModelParams {
        ModelParams {
            omega0: self.omega0,
            gamma: self.gamma,
            beta: self.beta,
            d: self.d,
            delta: self.delta,
            nu: self.nu,
            xi: self.xi,
            phi: self.phi,
            tau1: self.tau1,
            tau2: self.tau2,
            sigma_u2: self.sigma_u2,
            fourier_a: self.fourier_a.clone(),
            fourier_b: self.fourier_b.clone(),
        }
    }

    pub fn intercept(&self) -> arhygarch_core::Result<InterceptSpec> {
        match self.design {
            Some(g) => make_design(g.into(), self.n_obs),
            None => InterceptSpec::fourier(self.fourier_a.clone(), self.fourier_b.clone(), self.n_obs),
        }
    }

    pub fn sim_config(&self) -> arhygarch_core::Result<SimConfig> {
        Ok(SimConfig::new(self.model_params(), self.intercept()?)
            .burn_in(self.burn_in)
            .truncation(self.truncation)
            .seed(self.seed, self.stream))
    }

    pub fn optimizer_options(&self) -> OptimizerOptions {
        OptimizerOptions {
            truncation: self.truncation,
            starts: self.starts,
            max_evals: self.max_evals,
            std_errors: self.std_errors,
            seed: self.seed,
            ..OptimizerOptions::default()
        }
    }

    pub fn study_config(&self) -> StudyConfig {
        StudyConfig {
            d_values: self.d_values.clone(),
            k_values: self.k_values.clone(),
            designs: self.designs.iter().map(|&g| g.into()).collect(),
            n_obs: self.n_obs,
            replications: self.replications,
            base_seed: self.seed,
            truncation: self.truncation,
            burn_in: self.burn_in,
            optimizer: OptimizerOptions {
                std_errors: false,
                ..self.optimizer_options()
            },
            include_nonconverged: self.include_nonconverged,
            warm_start: true,
        }
    }
}
