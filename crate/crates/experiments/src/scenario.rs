//! One placement: gains, coefficients, the three schemes and the Fig. 3 style curve.

use wpcr_core::baselines::{benchmark_ta, evaluate_scheme, uniform_ta, BenchmarkDesign, Scheme};
use wpcr_core::model::{effective_snr_vector, gains_from_topology, throughput};
use wpcr_core::solver::{solve, GslsConfig};
use wpcr_core::{GammaVector64, SchemeReport64, SolverOutcome64, SystemParams64, Topology64};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub gamma: GammaVector64,
    pub outcome: SolverOutcome64,
    /// Absent when the PU target is infeasible.
    pub proposed: Option<SchemeReport64>,
    pub benchmark: SchemeReport64,
    pub uniform: SchemeReport64,
}

impl ScenarioResult {
    pub fn report(&self, scheme: Scheme) -> Option<&SchemeReport64> {
        match scheme {
            Scheme::Proposed => self.proposed.as_ref(),
            Scheme::Benchmark => Some(&self.benchmark),
            Scheme::Uniform => Some(&self.uniform),
        }
    }
}

pub fn gsls_config(xi: f64) -> GslsConfig<f64> {
    GslsConfig::with_xi(xi)
}

/// Solves the placement and evaluates all schemes under the full harvesting model.
pub fn run_scenario(
    params: &SystemParams64,
    topo: &Topology64,
    xi: f64,
    design: BenchmarkDesign,
) -> Result<ScenarioResult> {
    params.validate()?;
    let gains = gains_from_topology(topo, params)?;
    let gamma = effective_snr_vector(&gains, params)?;
    let delta = params.delta;
    let outcome = solve(&gamma, delta, &gsls_config(xi))?;
    let proposed = match outcome.solution() {
        Some(sol) => Some(evaluate_scheme(
            Scheme::Proposed,
            sol.tau.clone(),
            &gamma,
            delta,
        )?),
        None => None,
    };
    let benchmark = evaluate_scheme(
        Scheme::Benchmark,
        benchmark_ta(&gains, params, design)?,
        &gamma,
        delta,
    )?;
    let uniform = evaluate_scheme(Scheme::Uniform, uniform_ta(params.n), &gamma, delta)?;
    Ok(ScenarioResult {
        gamma,
        outcome,
        proposed,
        benchmark,
        uniform,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig3Row {
    pub tau0: f64,
    pub r_sum: f64,
    pub r1: f64,
    pub feasible: bool,
}

/// Best allocation of the data time `1 - tau0`: shares proportional to the
/// coefficients, unless that leaves the PU short of `delta`, in which case
/// the PU phase is lengthened until `R_1 = delta` and the SUs split the rest
/// proportionally.
pub fn inner_allocation(gamma: &GammaVector64, delta: f64, tau0: f64) -> Vec<f64> {
    let g = gamma.as_slice();
    let rest = 1.0 - tau0;
    let total = gamma.total();
    let mut tau = vec![tau0];
    tau.extend(g.iter().map(|v| rest * v / total));
    if throughput(g[0], tau0, tau[1]) >= delta || g.len() == 1 {
        return tau;
    }
    let (mut lo, mut hi) = (tau[1], rest);
    if throughput(g[0], tau0, hi) < delta {
        lo = hi;
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if throughput(g[0], tau0, mid) >= delta {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo = hi;
    }
    let su_rest = (rest - lo).max(0.0);
    let su_total = gamma.su_total();
    tau[1] = lo;
    for (slot, v) in tau[2..].iter_mut().zip(gamma.su()) {
        *slot = su_rest * v / su_total;
    }
    tau
}

/// `R_sum` against `tau0` on the grid `k / grid`, `k = 1 .. grid - 1`.
pub fn fig3_sweep(gamma: &GammaVector64, delta: f64, grid: usize) -> Vec<Fig3Row> {
    let g = gamma.as_slice();
    (1..grid)
        .map(|k| {
            let tau0 = k as f64 / grid as f64;
            let tau = inner_allocation(gamma, delta, tau0);
            let r1 = throughput(g[0], tau0, tau[1]);
            let r_sum = g
                .iter()
                .enumerate()
                .map(|(i, v)| throughput(*v, tau0, tau[i + 1]))
                .sum();
            Fig3Row {
                tau0,
                r_sum,
                r1,
                feasible: r1 >= delta - wpcr_core::baselines::DELTA_TOLERANCE,
            }
        })
        .collect()
}

/// Feasible row with the largest `R_sum`, first on ties.
pub fn fig3_argmax(rows: &[Fig3Row]) -> Option<Fig3Row> {
    rows.iter()
        .filter(|r| r.feasible)
        .fold(None, |best: Option<Fig3Row>, r| match best {
            Some(b) if b.r_sum >= r.r_sum => Some(b),
            _ => Some(*r),
        })
}

/// Whether the feasible part of the curve rises then falls, allowing flat
/// steps of relative size `tol`.
pub fn is_unimodal(rows: &[Fig3Row], tol: f64) -> bool {
    let vals: Vec<f64> = rows
        .iter()
        .filter(|r| r.feasible)
        .map(|r| r.r_sum)
        .collect();
    let mut falling = false;
    for w in vals.windows(2) {
        let slack = tol * w[0].abs().max(w[1].abs());
        if w[1] > w[0] + slack {
            if falling {
                return false;
            }
        } else if w[1] < w[0] - slack {
            falling = true;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use wpcr_core::solver::{solve_unconstrained, Branch};

    fn gv(v: &[f64]) -> GammaVector64 {
        GammaVector64::new(v.to_vec()).unwrap()
    }

    #[test]
    fn inner_allocation_uses_whole_slot() {
        let gamma = gv(&[5.0, 20.0, 40.0]);
        for &d in &[0.0, 1.0, 2.0, 50.0] {
            for k in 1..20 {
                let tau = inner_allocation(&gamma, d, k as f64 / 20.0);
                let s: f64 = tau.iter().sum();
                assert!((s - 1.0).abs() < 1e-12);
                assert!(tau.iter().all(|v| *v >= 0.0));
            }
        }
    }

    #[test]
    fn interior_argmax_within_one_step() {
        let gamma = gv(&[30.0, 12.0, 80.0]);
        let rows = fig3_sweep(&gamma, 0.0, 1000);
        assert_eq!(rows.len(), 999);
        let best = fig3_argmax(&rows).unwrap();
        let tau0 = solve_unconstrained(&gamma).unwrap().tau.wpt();
        assert!((best.tau0 - tau0).abs() <= 1e-3);
        assert!(is_unimodal(&rows, 1e-12));
    }

    #[test]
    fn constrained_argmax_within_one_step() {
        let gamma = gv(&[30.0, 12.0, 80.0]);
        let delta = 2.0;
        let out = solve(&gamma, delta, &gsls_config(1e-9)).unwrap();
        assert_eq!(out.branch(), Branch::Boundary);
        let rows = fig3_sweep(&gamma, delta, 1000);
        let best = fig3_argmax(&rows).unwrap();
        assert!((best.tau0 - out.solution().unwrap().tau.wpt()).abs() <= 1e-3);
        assert!(best.r_sum <= out.r_sum().unwrap() + 1e-12);
        assert!(is_unimodal(&rows, 1e-12));
    }

    #[test]
    fn feasible_region_shrinks_with_delta() {
        let gamma = gv(&[30.0, 12.0]);
        let mut prev = usize::MAX;
        for d in [0.0, 1.0, 2.0, 3.0, 3.5] {
            let n = fig3_sweep(&gamma, d, 200)
                .iter()
                .filter(|r| r.feasible)
                .count();
            assert!(n <= prev);
            prev = n;
        }
        assert!(prev < 199);
    }

    #[test]
    fn unimodality_detector() {
        let mk = |v: &[f64]| {
            v.iter()
                .map(|r| Fig3Row {
                    tau0: 0.0,
                    r_sum: *r,
                    r1: 0.0,
                    feasible: true,
                })
                .collect::<Vec<_>>()
        };
        assert!(is_unimodal(&mk(&[1.0, 2.0, 3.0, 2.0, 1.0]), 0.0));
        assert!(!is_unimodal(&mk(&[1.0, 3.0, 2.0, 3.0]), 0.0));
    }
}
