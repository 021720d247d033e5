//! Parallel Monte Carlo driver on a rayon pool.

use arhygarch_core::montecarlo::{aggregate, run_task, MonteCarloReport, StudyConfig};
use rayon::prelude::*;

use crate::fft::FftConvolver;

/// Runs the study on `workers` threads (all cores when `None`).
///
/// Tasks are collected in submission order and reduced by the core's
/// ordered aggregation, so any worker count gives a bit-identical report.
pub fn run_study_parallel(cfg: &StudyConfig, workers: Option<usize>) -> arhygarch_core::Result<MonteCarloReport> {
    cfg.validate()?;
    let tasks = cfg.tasks();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w);
    }
    let pool = builder.build().expect("thread pool");
    let records: Vec<_> = pool.install(|| {
        tasks
            .par_iter()
            .map_init(FftConvolver::new, |conv, &task| {
                let recs = run_task(cfg, task, conv);
                for r in &recs {
                    if let Some(e) = &r.error {
                        log::warn!("{} d={} k={} rep={}: {e}", r.design, r.d, r.k, r.rep);
                    } else if !r.converged {
                        log::debug!("{} d={} k={} rep={}: budget exhausted", r.design, r.d, r.k, r.rep);
                    }
                }
                recs
            })
            .collect()
    });
    Ok(aggregate(cfg, records.into_iter().flatten().collect()))
}
