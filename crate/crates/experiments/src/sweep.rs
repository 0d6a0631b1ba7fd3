//! Monte Carlo parameter sweeps and improvement summaries.

use rayon::prelude::*;
use wpcr_core::baselines::Scheme;

use crate::config::{ScenarioConfig, SweepName};
use crate::error::{ExperimentError, Result};
use crate::placement::build_topology;
use crate::scenario::run_scenario;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep_name: SweepName,
    pub sweep_value: f64,
    /// Trial index, or `None` for the mean over trials.
    pub trial: Option<usize>,
    pub scheme: Scheme,
    pub r_sum: f64,
    pub r1: f64,
    pub meets_delta: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    /// One row per (value, scheme), averaged over trials.
    pub means: Vec<SweepRow>,
    /// One row per (value, trial, scheme).
    pub trials: Vec<SweepRow>,
}

/// Seed of trial `t`; trials share seeds across sweep values.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

/// Runs every (value, trial) pair, in parallel, and returns rows in
/// (value, trial, scheme) order. An infeasible proposed scheme is recorded
/// with zero rates and `meets_delta = false`.
pub fn run_sweep(cfg: &ScenarioConfig, seed: u64) -> Result<SweepOutput> {
    let sweep = cfg.sweep.as_ref().ok_or_else(|| {
        ExperimentError::Usage(
            "config has no sweep (set sweep_name, sweep_min, sweep_max, sweep_steps)".into(),
        )
    })?;
    let values = sweep.values();
    let jobs: Vec<(usize, usize)> = (0..values.len())
        .flat_map(|v| (0..cfg.trials).map(move |t| (v, t)))
        .collect();
    let results: Vec<Result<Vec<SweepRow>>> = jobs
        .par_iter()
        .map(|&(v, t)| {
            let value = values[v];
            let params = sweep.name.apply(&cfg.params, value);
            let topo = build_topology(&params, &cfg.placement, trial_seed(seed, t))?;
            let res = run_scenario(&params, &topo, cfg.xi, cfg.benchmark_design)?;
            Ok(Scheme::ALL
                .iter()
                .map(|&scheme| {
                    let (r_sum, r1, meets_delta) = match res.report(scheme) {
                        Some(r) => (r.r_sum, r.r1, r.meets_delta),
                        None => (0.0, 0.0, false),
                    };
                    SweepRow {
                        sweep_name: sweep.name,
                        sweep_value: value,
                        trial: Some(t),
                        scheme,
                        r_sum,
                        r1,
                        meets_delta,
                    }
                })
                .collect())
        })
        .collect();

    let mut trials = Vec::with_capacity(jobs.len() * Scheme::ALL.len());
    for r in results {
        trials.extend(r?);
    }
    let per_value = cfg.trials * Scheme::ALL.len();
    let mut means = Vec::with_capacity(values.len() * Scheme::ALL.len());
    for (v, chunk) in trials.chunks(per_value).enumerate() {
        for (s, &scheme) in Scheme::ALL.iter().enumerate() {
            let rows: Vec<&SweepRow> = chunk.iter().skip(s).step_by(Scheme::ALL.len()).collect();
            let n = rows.len() as f64;
            means.push(SweepRow {
                sweep_name: sweep.name,
                sweep_value: values[v],
                trial: None,
                scheme,
                r_sum: rows.iter().map(|r| r.r_sum).sum::<f64>() / n,
                r1: rows.iter().map(|r| r.r1).sum::<f64>() / n,
                meets_delta: rows.iter().all(|r| r.meets_delta),
            });
        }
    }
    Ok(SweepOutput { means, trials })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Improvement {
    pub baseline: Scheme,
    /// Mean of `(r_prop - r_base) / r_base * 100` over sweep points.
    pub percent: f64,
    /// Points with a positive baseline rate that entered the mean.
    pub points: usize,
}

/// Mean relative gain of the proposed scheme over each baseline. Rows are
/// matched by sweep value and trial; points where the baseline rate is zero
/// are skipped.
pub fn improvement_summary(rows: &[SweepRow]) -> Result<Vec<Improvement>> {
    if rows.is_empty() {
        return Err(ExperimentError::EmptyRows);
    }
    let key = |r: &SweepRow| (r.sweep_value.to_bits(), r.trial);
    let mut out = Vec::new();
    for baseline in [Scheme::Benchmark, Scheme::Uniform] {
        let mut sum = 0.0;
        let mut points = 0;
        for p in rows.iter().filter(|r| r.scheme == Scheme::Proposed) {
            let Some(b) = rows
                .iter()
                .find(|r| r.scheme == baseline && key(r) == key(p))
            else {
                continue;
            };
            if b.r_sum > 0.0 {
                sum += (p.r_sum - b.r_sum) / b.r_sum * 100.0;
                points += 1;
            }
        }
        if points == 0 {
            return Err(ExperimentError::EmptyRows);
        }
        out.push(Improvement {
            baseline,
            percent: sum / points as f64,
            points,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(scheme: Scheme, value: f64, r_sum: f64) -> SweepRow {
        SweepRow {
            sweep_name: SweepName::L,
            sweep_value: value,
            trial: None,
            scheme,
            r_sum,
            r1: 0.0,
            meets_delta: true,
        }
    }

    #[test]
    fn summary_arithmetic() {
        let rows = vec![
            row(Scheme::Proposed, 1.0, 3.0),
            row(Scheme::Benchmark, 1.0, 2.0),
            row(Scheme::Uniform, 1.0, 1.5),
            row(Scheme::Proposed, 2.0, 2.0),
            row(Scheme::Benchmark, 2.0, 2.0),
            row(Scheme::Uniform, 2.0, 1.0),
        ];
        let s = improvement_summary(&rows).unwrap();
        assert_eq!(s[0].baseline, Scheme::Benchmark);
        assert!((s[0].percent - 25.0).abs() < 1e-12);
        assert!((s[1].percent - 100.0).abs() < 1e-12);
    }

    #[test]
    fn identical_schemes_give_zero() {
        let rows = vec![
            row(Scheme::Proposed, 1.0, 2.0),
            row(Scheme::Benchmark, 1.0, 2.0),
            row(Scheme::Uniform, 1.0, 2.0),
        ];
        assert!(improvement_summary(&rows)
            .unwrap()
            .iter()
            .all(|i| i.percent == 0.0));
    }

    #[test]
    fn empty_rows_error() {
        assert!(matches!(
            improvement_summary(&[]),
            Err(ExperimentError::EmptyRows)
        ));
    }
}
