//! CSV emission. Every table starts with a header row.

use std::io::Write;

use wpcr_core::baselines::SchemeReport;
use wpcr_core::SolverOutcome64;

use crate::error::Result;
use crate::scenario::Fig3Row;
use crate::sweep::SweepRow;

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().flexible(true).from_writer(out)
}

/// `k,tau_k` rows followed by a `mu1,mu2,r_sum,r1,branch` block for the
/// proposed scheme. An infeasible outcome leaves the numeric fields empty.
pub fn write_solve<W: Write>(out: W, outcome: &SolverOutcome64) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["k", "tau_k"])?;
    if let Some(sol) = outcome.solution() {
        for (k, t) in sol.tau.as_slice().iter().enumerate() {
            w.write_record([k.to_string(), t.to_string()])?;
        }
    }
    w.write_record(["mu1", "mu2", "r_sum", "r1", "branch"])?;
    match outcome.solution() {
        Some(sol) => w.write_record([
            sol.mu1.to_string(),
            sol.mu2.to_string(),
            sol.r_sum.to_string(),
            sol.r1().to_string(),
            outcome.branch().to_string(),
        ])?,
        None => w.write_record(["", "", "", "", &outcome.branch().to_string()])?,
    }
    w.flush()?;
    Ok(())
}

/// Same layout for a baseline scheme, which has no multipliers; the last
/// column names the scheme.
pub fn write_scheme<W: Write>(out: W, report: &SchemeReport<f64>) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["k", "tau_k"])?;
    for (k, t) in report.tau.as_slice().iter().enumerate() {
        w.write_record([k.to_string(), t.to_string()])?;
    }
    w.write_record(["mu1", "mu2", "r_sum", "r1", "branch"])?;
    w.write_record([
        "",
        "",
        &report.r_sum.to_string(),
        &report.r1.to_string(),
        report.scheme.as_str(),
    ])?;
    w.flush()?;
    Ok(())
}

pub fn write_sweep<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = writer(out);
    w.write_record([
        "sweep_name",
        "sweep_value",
        "trial",
        "scheme",
        "r_sum",
        "r1",
        "meets_delta",
    ])?;
    for r in rows {
        w.write_record([
            r.sweep_name.to_string(),
            r.sweep_value.to_string(),
            r.trial
                .map_or_else(|| "mean".to_string(), |t| t.to_string()),
            r.scheme.to_string(),
            r.r_sum.to_string(),
            r.r1.to_string(),
            r.meets_delta.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_fig3<W: Write>(out: W, rows: &[Fig3Row]) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["tau0", "r_sum", "r1", "feasible"])?;
    for r in rows {
        w.write_record([
            r.tau0.to_string(),
            r.r_sum.to_string(),
            r.r1.to_string(),
            r.feasible.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
