//! Table, audit and plot-data documents for Monte Carlo reports.

use std::fmt::Write as _;

use arhygarch_core::model::ModelParams;
use arhygarch_core::montecarlo::{CellReport, MonteCarloReport};
use arhygarch_core::simulate::Design;
use thiserror::Error;

use crate::config::ReportFormat;
use crate::io::fmt_f64;

#[derive(Debug, Error, PartialEq)]
pub enum ReportError {
    #[error("report has no cells")]
    Empty,
    #[error("report csv line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub const REPORT_HEADER: [&str; 7] = ["design", "d", "k", "bias", "rmse", "se", "n_converged"];

/// One parsed row of the CSV report.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRow {
    pub design: Design,
    pub d: f64,
    pub k: usize,
    pub bias: f64,
    pub rmse: f64,
    pub se: f64,
    pub n_converged: usize,
}

impl From<&CellReport> for CellRow {
    fn from(c: &CellReport) -> Self {
        Self {
            design: c.design,
            d: c.d,
            k: c.k,
            bias: c.bias,
            rmse: c.rmse,
            se: c.se,
            n_converged: c.n_converged,
        }
    }
}

/// One row per cell, in the report's (design, d, k) order.
pub fn report_tables(report: &MonteCarloReport, format: ReportFormat) -> Result<String, ReportError> {
    if report.cells.is_empty() {
        return Err(ReportError::Empty);
    }
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str(&REPORT_HEADER.join(","));
            out.push('\n');
            for c in &report.cells {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    c.design,
                    fmt_f64(c.d),
                    c.k,
                    fmt_f64(c.bias),
                    fmt_f64(c.rmse),
                    fmt_f64(c.se),
                    c.n_converged
                );
            }
        }
        ReportFormat::Markdown => {
            out.push_str("| design | d | k | Bias | RMSE | SE | n_converged |\n");
            out.push_str("|---|---:|---:|---:|---:|---:|---:|\n");
            for c in &report.cells {
                let _ = writeln!(
                    out,
                    "| {} | {:.2} | {} | {:.4} | {:.4} | {:.4} | {}/{} |",
                    c.design,
                    c.d,
                    c.k,
                    c.bias,
                    c.rmse,
                    c.se,
                    c.n_converged,
                    c.d_hats.len()
                );
            }
        }
        ReportFormat::Text => {
            let _ = writeln!(
                out,
                "{:<6} {:>5} {:>3} {:>9} {:>9} {:>9} {:>11}",
                "design", "d", "k", "Bias", "RMSE", "SE", "n_converged"
            );
            for c in &report.cells {
                let _ = writeln!(
                    out,
                    "{:<6} {:>5.2} {:>3} {:>9.4} {:>9.4} {:>9.4} {:>11}",
                    c.design,
                    c.d,
                    c.k,
                    c.bias,
                    c.rmse,
                    c.se,
                    format!("{}/{}", c.n_converged, c.d_hats.len())
                );
            }
        }
    }
    Ok(out)
}

/// Parses the CSV form of [`report_tables`].
pub fn parse_report_csv(text: &str) -> Result<Vec<CellRow>, ReportError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == REPORT_HEADER.join(",") => {}
        _ => {
            return Err(ReportError::Parse {
                line: 1,
                reason: format!("expected header `{}`", REPORT_HEADER.join(",")),
            })
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let err = |reason: String| ReportError::Parse { line: i + 1, reason };
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != REPORT_HEADER.len() {
            return Err(err(format!("expected {} fields, found {}", REPORT_HEADER.len(), f.len())));
        }
        let real = |j: usize| f[j].parse::<f64>().map_err(|_| err(format!("bad {} value {:?}", REPORT_HEADER[j], f[j])));
        let count = |j: usize| f[j].parse::<usize>().map_err(|_| err(format!("bad {} value {:?}", REPORT_HEADER[j], f[j])));
        rows.push(CellRow {
            design: Design::from_name(f[0]).ok_or_else(|| err(format!("unknown design {:?}", f[0])))?,
            d: real(1)?,
            k: count(2)?,
            bias: real(3)?,
            rmse: real(4)?,
            se: real(5)?,
            n_converged: count(6)?,
        });
    }
    if rows.is_empty() {
        return Err(ReportError::Empty);
    }
    Ok(rows)
}

/// Per-replication audit rows with the full estimated parameter vector.
pub fn audit_csv(report: &MonteCarloReport) -> String {
    let kmax = report.records.iter().map(|r| r.k).max().unwrap_or(0);
    let names = ModelParams::names(kmax);
    let mut out = String::from("design,d,k,rep,d_hat,converged,loglik");
    for n in &names {
        out.push(',');
        out.push_str(n);
    }
    out.push_str(",error\n");
    for r in &report.records {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{}",
            r.design,
            fmt_f64(r.d),
            r.k,
            r.rep,
            fmt_f64(r.d_hat),
            r.converged,
            fmt_f64(r.loglik)
        );
        let mut theta = vec![String::new(); names.len()];
        if let Some(p) = &r.params {
            let k = p.fourier_order();
            let v = p.to_vec();
            for (i, x) in v.iter().enumerate() {
                // a_j sit at 11 + j, b_j at 11 + kmax + j in the widest layout
                let slot = if i < 11 + k { i } else { i + kmax - k };
                theta[slot] = fmt_f64(*x);
            }
        }
        for t in theta {
            out.push(',');
            out.push_str(&t);
        }
        out.push(',');
        if let Some(e) = &r.error {
            out.push_str(&e.to_string().replace(',', ";"));
        }
        out.push('\n');
    }
    out
}

/// Long-format cell statistics: `design,d,k,statistic,value`.
pub fn cells_long_csv(report: &MonteCarloReport) -> String {
    let mut out = String::from("design,d,k,statistic,value\n");
    for c in &report.cells {
        for (name, v) in [
            ("bias", c.bias),
            ("rmse", c.rmse),
            ("se", c.se),
            ("n_converged", c.n_converged as f64),
            ("n_used", c.n_used as f64),
        ] {
            let _ = writeln!(out, "{},{},{},{},{}", c.design, fmt_f64(c.d), c.k, name, fmt_f64(v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(design: Design, d: f64, k: usize, hats: Vec<f64>) -> CellReport {
        let (bias, rmse, se) = arhygarch_core::montecarlo::summary_stats(&hats, d);
        CellReport {
            design,
            d,
            k,
            bias,
            rmse,
            se,
            n_converged: hats.len(),
            n_used: hats.len(),
            n_failed: 0,
            d_hats: hats,
        }
    }

    fn report(cells: Vec<CellReport>) -> MonteCarloReport {
        MonteCarloReport { cells, records: vec![] }
    }

    #[test]
    fn empty_is_error() {
        for f in [ReportFormat::Text, ReportFormat::Csv, ReportFormat::Markdown] {
            assert_eq!(report_tables(&report(vec![]), f), Err(ReportError::Empty));
        }
    }

    #[test]
    fn single_cell_single_row() {
        let r = report(vec![cell(Design::M1, 0.45, 0, vec![0.5])]);
        for f in [ReportFormat::Text, ReportFormat::Csv] {
            assert_eq!(report_tables(&r, f).unwrap().lines().count(), 2);
        }
        // markdown carries the separator line too
        assert_eq!(report_tables(&r, ReportFormat::Markdown).unwrap().lines().count(), 3);
    }

    #[test]
    fn csv_round_trip_full_precision() {
        let r = report(vec![
            cell(Design::M1, 0.45, 0, vec![0.41, 0.52, 1.0 / 3.0]),
            cell(Design::M3, 0.25, 3, vec![0.27, 0.2999999999999999]),
        ]);
        let rows = parse_report_csv(&report_tables(&r, ReportFormat::Csv).unwrap()).unwrap();
        let want: Vec<CellRow> = r.cells.iter().map(CellRow::from).collect();
        assert_eq!(rows.len(), want.len());
        for (a, b) in rows.iter().zip(&want) {
            assert_eq!(a.bias.to_bits(), b.bias.to_bits());
            assert_eq!(a.rmse.to_bits(), b.rmse.to_bits());
            assert_eq!(a.se.to_bits(), b.se.to_bits());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_report_csv("a,b\n"), Err(ReportError::Parse { line: 1, .. })));
        let bad = format!("{}\nm1,0.4,0,x,1,1,1\n", REPORT_HEADER.join(","));
        assert!(matches!(parse_report_csv(&bad), Err(ReportError::Parse { line: 2, .. })));
    }
}
