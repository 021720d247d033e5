//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 data error,
//! 4 numerical failure.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use arhygarch_core::inference::estimate_with;
use arhygarch_core::lagpoly::{fracdiff_coeffs, hygarch_weights};
use arhygarch_core::model::{stability_check, ModelParams, StabilityReport};
use arhygarch_core::simulate::simulate;
use arhygarch_core::Error as CoreError;
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::config::{parse_config, Command, ConfigError, ReportFormat, RunConfig};
use crate::fft::FftConvolver;
use crate::io::{fmt_f64, read_series_csv, write_simulated, IoError};
use crate::report::{audit_csv, cells_long_csv, report_tables, ReportError};
use crate::runner::run_study_parallel;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Model(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Report(_) => 2,
            CliError::Io(_) => 3,
            CliError::Model(e) => match e {
                CoreError::Data { .. } | CoreError::Length { .. } | CoreError::Index { .. } => 3,
                CoreError::Explosive { .. } | CoreError::Unstable { .. } => 4,
                CoreError::Domain { .. } | CoreError::Precondition(_) => 2,
            },
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| {
        IoError::File {
            path: path.display().to_string(),
            source,
        }
        .into()
    })
}

#[derive(Debug, Parser)]
#[command(name = "arhygarch", version, about = "Adaptive realized HYGARCH: simulate, estimate, study")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Args)]
struct Common {
    /// Flat TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Lag truncation J.
    #[arg(long = "trunc")]
    trunc: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Simulate a series and write `t,r,x[,h]` CSV.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the true conditional variance.
        #[arg(long)]
        with_h: bool,
    },
    /// Fit the model to a `t,r,x` CSV.
    Estimate {
        #[command(flatten)]
        common: Common,
        /// Input series.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Fourier order.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        starts: Option<usize>,
        /// Write the result as a flat CSV row here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the second-moment stability conditions.
    Stability {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        d: Option<f64>,
        /// Also write the report as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Dump lag weights as `j,w_j` CSV.
    Coeffs {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        /// Fractional differencing coefficients `j,phi_j` instead.
        #[arg(long)]
        fracdiff: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte Carlo study.
    Montecarlo {
        #[command(flatten)]
        common: Common,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Full-scale study (500 replications, T = 3000, J = 3000).
        #[arg(long)]
        full: bool,
        #[arg(long, value_parser = ["text", "csv", "markdown"])]
        format: Option<String>,
    },
}

fn load(common: &Common, command: Command, verbose: u8) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| IoError::File {
                path: path.display().to_string(),
                source,
            })?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(c) = cfg.command {
        if c != command {
            return Err(CliError::Usage(format!(
                "config is for `{c:?}` but subcommand is `{command:?}`"
            )));
        }
    }
    cfg.command = Some(command);
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(j) = common.trunc {
        cfg.truncation = j;
    }
    cfg.verbosity = cfg.verbosity.max(verbose);
    Ok(cfg)
}

fn finish(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate()?;
    log::info!("effective configuration:\n{}", cfg.echo());
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(IoError::from)?;
            Ok(())
        }
    }
}

pub fn stability_text(p: &ModelParams, rep: &StabilityReport) -> String {
    let mut s = String::new();
    let rows: [(&str, String); 13] = [
        ("d", format!("{}", p.d)),
        ("a", format!("{:.10}", rep.a)),
        ("b", format!("{:.10}", rep.b)),
        ("c", format!("{:.10}", rep.c)),
        ("lag_sum", format!("{:.10}", rep.lag_sum)),
        ("condition1", format!("{:.10}", rep.condition1)),
        ("condition2", format!("{:.10}", rep.condition2)),
        ("rho_closed_form", format!("{:.10}", rep.rho_closed_form)),
        ("rho_numeric", format!("{:.10}", rep.rho_numeric)),
        ("lambda2", format!("{:.10}", rep.eigenvalues.0)),
        ("lambda3", format!("{:.10}", rep.eigenvalues.1)),
        ("certified", rep.certified.to_string()),
        (
            "moment_bound",
            rep.moment_bound
                .map_or("none (rho >= 1)".to_string(), |m| format!("{:.6} {:.6} {:.6}", m[0], m[1], m[2])),
        ),
    ];
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<16} {v}");
    }
    s
}

fn stability_csv(rep: &StabilityReport) -> String {
    let m = rep.moment_bound.unwrap_or([f64::NAN; 3]);
    let vals = [
        rep.a,
        rep.b,
        rep.c,
        rep.lag_sum,
        rep.condition1,
        rep.condition2,
        rep.rho_closed_form,
        rep.rho_numeric,
        m[0],
        m[1],
        m[2],
    ];
    let mut s = String::from("a,b,c,lag_sum,condition1,condition2,rho_closed_form,rho_numeric,bound_log_h,bound_log_h1,bound_log_h_lag,certified\n");
    for v in vals {
        s.push_str(&fmt_f64(v));
        s.push(',');
    }
    let _ = writeln!(s, "{}", rep.certified);
    s
}

fn run_command(cli: Cli) -> Result<(), CliError> {
    let v = cli.verbose;
    match cli.command {
        Sub::Simulate { common, out, with_h } => {
            let mut cfg = load(&common, Command::Simulate, v)?;
            cfg.write_h |= with_h;
            if out.is_some() {
                cfg.out = out;
            }
            finish(&cfg)?;
            let sim = simulate(&cfg.sim_config()?)?;
            let mut buf = Vec::new();
            write_simulated(&mut buf, &sim, cfg.write_h)?;
            emit(cfg.out.as_deref(), &String::from_utf8(buf).expect("ascii csv"))
        }
        Sub::Estimate {
            common,
            input,
            k,
            starts,
            out,
        } => {
            let mut cfg = load(&common, Command::Estimate, v)?;
            if input.is_some() {
                cfg.input = input;
            }
            if let Some(k) = k {
                cfg.k = k;
            }
            if let Some(s) = starts {
                cfg.starts = s;
            }
            if out.is_some() {
                cfg.out = out;
            }
            finish(&cfg)?;
            let path = cfg.input.clone().ok_or_else(|| CliError::Usage("estimate needs --input".into()))?;
            let series = read_series_csv(&path)?;
            let fit = estimate_with(&series, cfg.k, &cfg.optimizer_options(), FftConvolver::new())?;
            if !fit.converged {
                log::warn!("optimizer budget exhausted; reporting the best point found");
            }
            let names = ModelParams::names(cfg.k);
            let theta = fit.params.to_vec();
            let mut text = format!(
                "observations {}\nfourier order {}\nloglik {:.6}\nconverged {}\nevaluations {}\nhessian positive definite {}\n\n{:<10} {:>14} {:>14}\n",
                series.len(),
                cfg.k,
                fit.loglik,
                fit.converged,
                fit.iterations,
                fit.hessian_positive_definite,
                "parameter",
                "estimate",
                "std.error"
            );
            for (i, n) in names.iter().enumerate() {
                let se = fit.std_errors.as_ref().map_or(f64::NAN, |s| s[i]);
                let _ = writeln!(text, "{n:<10} {:>14.6} {:>14.6}", theta[i], se);
            }
            print!("{text}");
            if let Some(p) = &cfg.out {
                let mut header = String::from("loglik,converged,evaluations,k");
                let mut row = format!("{},{},{},{}", fmt_f64(fit.loglik), fit.converged, fit.iterations, cfg.k);
                for (i, n) in names.iter().enumerate() {
                    let _ = write!(header, ",{n}");
                    let _ = write!(row, ",{}", fmt_f64(theta[i]));
                }
                for (i, n) in names.iter().enumerate() {
                    let _ = write!(header, ",se_{n}");
                    let _ = write!(row, ",{}", fmt_f64(fit.std_errors.as_ref().map_or(f64::NAN, |s| s[i])));
                }
                write_file(p, &format!("{header}\n{row}\n"))?;
            }
            Ok(())
        }
        Sub::Stability { common, d, csv } => {
            let mut cfg = load(&common, Command::Stability, v)?;
            if let Some(d) = d {
                cfg.d = d;
            }
            finish(&cfg)?;
            let params = cfg.model_params();
            let rep = stability_check(&params, cfg.truncation)?;
            print!("{}", stability_text(&params, &rep));
            if let Some(p) = csv {
                write_file(&p, &stability_csv(&rep))?;
            }
            Ok(())
        }
        Sub::Coeffs {
            common,
            d,
            beta,
            gamma,
            delta,
            fracdiff,
            out,
        } => {
            let mut cfg = load(&common, Command::Coeffs, v)?;
            for (slot, val) in [(&mut cfg.d, d), (&mut cfg.beta, beta), (&mut cfg.gamma, gamma), (&mut cfg.delta, delta)] {
                if let Some(x) = val {
                    *slot = x;
                }
            }
            if out.is_some() {
                cfg.out = out;
            }
            finish(&cfg)?;
            let mut s = String::new();
            if fracdiff {
                s.push_str("j,phi_j\n");
                let phi = fracdiff_coeffs(cfg.d, cfg.truncation)?;
                for (j, c) in phi.coeffs().iter().enumerate() {
                    let _ = writeln!(s, "{j},{}", fmt_f64(*c));
                }
            } else {
                s.push_str("j,w_j\n");
                let w = hygarch_weights(cfg.d, cfg.beta, cfg.gamma, cfg.delta, cfg.truncation)?;
                for (j, c) in w.weights().iter().enumerate().skip(1) {
                    let _ = writeln!(s, "{j},{}", fmt_f64(*c));
                }
            }
            emit(cfg.out.as_deref(), &s)
        }
        Sub::Montecarlo {
            common,
            out,
            workers,
            full,
            format,
        } => {
            let mut cfg = load(&common, Command::Montecarlo, v)?;
            if full || cfg.full {
                log::warn!("full-scale study: 500 replications of T = 3000 per cell; expect hours of runtime");
                cfg.apply_full();
            }
            if out.is_some() {
                cfg.out = out;
            }
            if workers.is_some() {
                cfg.workers = workers;
            }
            if let Some(f) = format {
                cfg.format = match f.as_str() {
                    "csv" => ReportFormat::Csv,
                    "markdown" => ReportFormat::Markdown,
                    _ => ReportFormat::Text,
                };
            }
            finish(&cfg)?;
            let dir = cfg.out.clone().ok_or_else(|| CliError::Usage("montecarlo needs --out <dir>".into()))?;
            fs::create_dir_all(&dir).map_err(|source| IoError::File {
                path: dir.display().to_string(),
                source,
            })?;
            let study = cfg.study_config();
            let report = run_study_parallel(&study, cfg.workers)?;
            // pool size and output path stay out of the echo so reruns elsewhere write identical files
            let echo = RunConfig {
                workers: None,
                out: None,
                ..cfg.clone()
            }
            .echo();
            write_file(&dir.join("config.echo"), &echo)?;
            write_file(&dir.join("report.csv"), &report_tables(&report, ReportFormat::Csv)?)?;
            write_file(&dir.join("audit.csv"), &audit_csv(&report))?;
            write_file(&dir.join("cells_long.csv"), &cells_long_csv(&report))?;
            let table = report_tables(&report, cfg.format)?;
            match cfg.format {
                ReportFormat::Markdown => write_file(&dir.join("report.md"), &table)?,
                ReportFormat::Text => write_file(&dir.join("report.txt"), &table)?,
                ReportFormat::Csv => {}
            }
            print!("{table}");
            Ok(())
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).parse_default_env().try_init();
}

/// Runs the CLI on `args` and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    init_logging(cli.verbose);
    match run_command(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
