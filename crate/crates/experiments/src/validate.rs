//! Oracle checks on one configured scenario.

use std::io::Write;

use wpcr_core::oracle::{ascent_oracle, grid_oracle, kkt_residuals, AscentConfig, GRID_MAX_SU};
use wpcr_core::solver::{f_of_gamma, phi, solve, Branch};
use wpcr_core::GammaVector64;

use crate::error::Result;
use crate::scenario::gsls_config;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Check {
    Check {
        name: name.into(),
        value,
        threshold,
        pass: value <= threshold,
    }
}

const GRID_RESOLUTION: usize = 200;

/// Compares the solver with the oracles at the configured target and at `delta = 0`.
pub fn validate_gamma(gamma: &GammaVector64, delta: f64, xi: f64, seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let ga = gamma.total();
    let f = f_of_gamma(ga)?;
    checks.push(at_most(
        "lambert_identity",
        (phi(f - 1.0)? * f - ga).abs() / ga.max(1.0),
        1e-10,
    ));

    for (label, d) in [("delta0", 0.0), ("target", delta)] {
        let outcome = solve(gamma, d, &gsls_config(xi))?;
        let Some(sol) = outcome.solution() else {
            checks.push(Check {
                name: format!("{label}_feasible"),
                value: 0.0,
                threshold: 1.0,
                pass: true,
            });
            continue;
        };
        let asc = ascent_oracle(
            gamma,
            d,
            &AscentConfig {
                seed,
                ..AscentConfig::default()
            },
        )?;
        let gap = asc
            .best_run()
            .map_or(f64::INFINITY, |b| (b.r_sum - sol.r_sum).abs() / sol.r_sum);
        checks.push(at_most(format!("{label}_ascent_gap"), gap, 1e-4));
        if outcome.branch() == Branch::Boundary {
            checks.push(at_most(
                format!("{label}_r1_minus_delta"),
                (sol.r1() - d).abs(),
                1e-6,
            ));
        }
        if sol.mu1.is_finite() && sol.mu2.is_finite() {
            let kkt = kkt_residuals(gamma, d, &outcome)?;
            checks.push(at_most(
                format!("{label}_kkt_stationarity"),
                kkt.stationarity_norm,
                1e-6,
            ));
        }
        if gamma.n_su() <= GRID_MAX_SU {
            if let Ok(g) = grid_oracle(gamma, d, GRID_RESOLUTION) {
                checks.push(at_most(
                    format!("{label}_grid_excess"),
                    g.r_sum - sol.r_sum,
                    1e-9 * sol.r_sum,
                ));
            }
        }
    }
    Ok(checks)
}

pub fn write_checks<W: Write>(out: W, checks: &[Check]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["check", "value", "threshold", "pass"])?;
    for c in checks {
        w.write_record([
            c.name.clone(),
            c.value.to_string(),
            c.threshold.to_string(),
            c.pass.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passes_on_small_instance() {
        let gamma = GammaVector64::new(vec![30.0, 12.0]).unwrap();
        let r1a = wpcr_core::solver::solve_unconstrained(&gamma).unwrap().r1();
        let r_th = wpcr_core::solver::feasibility_threshold(30.0).unwrap();
        let checks = validate_gamma(&gamma, 0.5 * (r1a + r_th), 1e-9, 3).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        assert!(checks.iter().any(|c| c.name == "target_r1_minus_delta"));
        assert!(checks.iter().any(|c| c.name == "delta0_grid_excess"));
    }
}
