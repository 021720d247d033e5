//! Replication harness: simulate under a design, fit over a set of Fourier
//! orders, and aggregate bias / RMSE / SE of the long-memory estimate.
//!
//! Replication `r` of every cell draws from stream `r` of `base_seed`, so
//! all cells sharing `(design, d)` see the same simulated paths and results
//! do not depend on how replications are scheduled.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::inference::{estimate_with, LagConvolver, OptimizerOptions, SeriesPair};
use crate::model::ModelParams;
use crate::simulate::{make_design, simulate, Design, SimConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub d_values: Vec<f64>,
    pub k_values: Vec<usize>,
    pub designs: Vec<Design>,
    pub n_obs: usize,
    pub replications: usize,
    pub base_seed: u64,
    /// Lag truncation of both the data-generating process and the fitted filter.
    pub truncation: usize,
    pub burn_in: usize,
    pub optimizer: OptimizerOptions,
    /// Keep the best point of fits that hit the evaluation budget.
    pub include_nonconverged: bool,
    /// Start each order `k` from the fit of the previous (smaller) order.
    pub warm_start: bool,
}

impl Default for StudyConfig {
    /// Desk-scale defaults: 100 replications of 1000 observations, truncation 1000.
    fn default() -> Self {
        Self {
            d_values: alloc::vec![0.25, 0.35, 0.45],
            k_values: alloc::vec![0],
            designs: alloc::vec![Design::M1],
            n_obs: 1000,
            replications: 100,
            base_seed: 20_240_601,
            truncation: 1000,
            burn_in: 1000,
            optimizer: OptimizerOptions {
                std_errors: false,
                ..OptimizerOptions::default()
            },
            include_nonconverged: true,
            warm_start: true,
        }
    }
}

impl StudyConfig {
    /// Replications at 500, 3000 observations, truncation 3000.
    pub fn full_scale(mut self) -> Self {
        self.replications = 500;
        self.n_obs = 3000;
        self.truncation = 3000;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Precondition("replications must be at least 1"));
        }
        if self.d_values.is_empty() || self.k_values.is_empty() || self.designs.is_empty() {
            return Err(Error::Precondition("study needs at least one d, one k and one design"));
        }
        for &d in &self.d_values {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::Domain {
                    name: "d",
                    value: d,
                    interval: "(0, 1)",
                });
            }
        }
        if self.n_obs < crate::inference::MIN_OBSERVATIONS {
            return Err(Error::Precondition("estimation needs at least 100 observations"));
        }
        Ok(())
    }

    /// Sorted, de-duplicated `(design, d)` pairs.
    pub fn groups(&self) -> Vec<(Design, f64)> {
        let mut designs = self.designs.clone();
        designs.sort();
        designs.dedup();
        let mut ds = self.d_values.clone();
        ds.sort_by(f64::total_cmp);
        ds.dedup();
        designs.iter().flat_map(|g| ds.iter().map(move |d| (*g, *d))).collect()
    }

    pub fn orders(&self) -> Vec<usize> {
        let mut k = self.k_values.clone();
        k.sort();
        k.dedup();
        k
    }

    /// Every `(design, d, rep)` unit of work, in report order.
    pub fn tasks(&self) -> Vec<Task> {
        self.groups()
            .into_iter()
            .flat_map(|(design, d)| (0..self.replications as u64).map(move |rep| Task { design, d, rep }))
            .collect()
    }
}

/// One simulated path, fitted at every order `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Task {
    pub design: Design,
    pub d: f64,
    pub rep: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationRecord {
    pub design: Design,
    pub d: f64,
    pub k: usize,
    pub rep: u64,
    /// NaN when simulation or estimation failed.
    pub d_hat: f64,
    pub converged: bool,
    pub loglik: f64,
    pub params: Option<ModelParams>,
    pub error: Option<Error>,
}

impl ReplicationRecord {
    fn failed(task: Task, k: usize, error: Error) -> Self {
        Self {
            design: task.design,
            d: task.d,
            k,
            rep: task.rep,
            d_hat: f64::NAN,
            converged: false,
            loglik: f64::NAN,
            params: None,
            error: Some(error),
        }
    }
}

/// Simulates the path for `task` and fits every configured order.
pub fn run_task<C: LagConvolver>(cfg: &StudyConfig, task: Task, conv: &mut C) -> Vec<ReplicationRecord> {
    let orders = cfg.orders();
    let sim = make_design(task.design, cfg.n_obs).and_then(|intercept| {
        let sim_cfg = SimConfig::new(ModelParams::baseline(task.d), intercept)
            .burn_in(cfg.burn_in)
            .truncation(cfg.truncation)
            .seed(cfg.base_seed, task.rep);
        simulate(&sim_cfg)
    });
    let sim = match sim {
        Ok(s) => s,
        Err(e) => return orders.iter().map(|&k| ReplicationRecord::failed(task, k, e.clone())).collect(),
    };
    let series = SeriesPair::from(&sim);
    let mut options = OptimizerOptions {
        truncation: cfg.truncation,
        ..cfg.optimizer.clone()
    };
    let mut out = Vec::with_capacity(orders.len());
    for k in orders {
        match estimate_with(&series, k, &options, &mut *conv) {
            Ok(fit) => {
                if cfg.warm_start {
                    options.warm_start = Some(fit.params.clone());
                }
                out.push(ReplicationRecord {
                    design: task.design,
                    d: task.d,
                    k,
                    rep: task.rep,
                    d_hat: fit.params.d,
                    converged: fit.converged,
                    loglik: fit.loglik,
                    params: Some(fit.params),
                    error: None,
                });
            }
            Err(e) => out.push(ReplicationRecord::failed(task, k, e)),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub design: Design,
    pub d: f64,
    pub k: usize,
    /// `mean(d_hat) - d`.
    pub bias: f64,
    /// `sqrt(mean((d_hat - d)^2))`.
    pub rmse: f64,
    /// Population standard deviation of `d_hat`.
    pub se: f64,
    pub n_converged: usize,
    /// Estimates entering the statistics.
    pub n_used: usize,
    pub n_failed: usize,
    /// Per-replication estimates in replication order, NaN for failures.
    pub d_hats: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    /// Sorted by design, then `d`, then `k`.
    pub cells: Vec<CellReport>,
    /// Sorted like `cells`, then by replication.
    pub records: Vec<ReplicationRecord>,
}

/// Bias, RMSE and population SE of `estimates` around `truth`.
pub fn summary_stats(estimates: &[f64], truth: f64) -> (f64, f64, f64) {
    if estimates.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let n = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / n;
    let var = estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / n;
    let mse = estimates.iter().map(|e| (e - truth) * (e - truth)).sum::<f64>() / n;
    (mean - truth, libm::sqrt(mse), libm::sqrt(var))
}

fn cell_order(a: &ReplicationRecord, b: &ReplicationRecord) -> core::cmp::Ordering {
    a.design
        .cmp(&b.design)
        .then(a.d.total_cmp(&b.d))
        .then(a.k.cmp(&b.k))
        .then(a.rep.cmp(&b.rep))
}

/// Deterministic ordered reduction of replication records into cells.
pub fn aggregate(cfg: &StudyConfig, mut records: Vec<ReplicationRecord>) -> MonteCarloReport {
    records.sort_by(cell_order);
    let mut cells = Vec::new();
    let mut start = 0;
    while start < records.len() {
        let head = &records[start];
        let end = start
            + records[start..]
                .iter()
                .take_while(|r| r.design == head.design && r.d == head.d && r.k == head.k)
                .count();
        let group = &records[start..end];
        let used: Vec<f64> = group
            .iter()
            .filter(|r| r.d_hat.is_finite() && (r.converged || cfg.include_nonconverged))
            .map(|r| r.d_hat)
            .collect();
        let (bias, rmse, se) = summary_stats(&used, head.d);
        cells.push(CellReport {
            design: head.design,
            d: head.d,
            k: head.k,
            bias,
            rmse,
            se,
            n_converged: group.iter().filter(|r| r.converged).count(),
            n_used: used.len(),
            n_failed: group.iter().filter(|r| r.error.is_some()).count(),
            d_hats: group.iter().map(|r| r.d_hat).collect(),
        });
        start = end;
    }
    MonteCarloReport { cells, records }
}

/// Runs every task in order on the calling thread.
pub fn run_study<C: LagConvolver>(cfg: &StudyConfig, conv: &mut C) -> Result<MonteCarloReport> {
    cfg.validate()?;
    let records = cfg.tasks().into_iter().flat_map(|t| run_task(cfg, t, conv)).collect();
    Ok(aggregate(cfg, records))
}
