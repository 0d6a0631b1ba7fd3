//! KKT residuals of a candidate allocation and its multipliers.

use crate::error::{invalid, Error, Result};
use crate::model::{throughput, GammaVector, TimeAllocation};
use crate::scalar::Scalar;
use crate::solver::{Solution, SolverOutcome};

use super::derivatives::rate_gradient;

#[derive(Debug, Clone, PartialEq)]
pub struct KktReport<T> {
    /// Gradient of the Lagrangian, one entry per phase.
    pub stationarity: Vec<T>,
    /// Euclidean norm of `stationarity`.
    pub stationarity_norm: T,
    /// `R_1 - delta`, nonnegative when the PU target is met.
    pub c1_slack: T,
    /// `1 - sum(tau)`, nonnegative when the slot budget is met.
    pub budget_slack: T,
    /// `mu1 * (delta - R_1)`.
    pub comp_c1: T,
    /// `mu2 * (sum(tau) - 1)`.
    pub comp_c3: T,
}

impl<T: Scalar> KktReport<T> {
    /// Largest absolute residual among stationarity and complementarity.
    pub fn max_residual(&self) -> T {
        self.stationarity_norm
            .max(self.comp_c1.abs())
            .max(self.comp_c3.abs())
    }
}

/// Residuals at an arbitrary point `(tau, mu1, mu2)`.
pub fn kkt_residuals_at<T: Scalar>(
    gamma: &GammaVector<T>,
    delta: T,
    tau: &TimeAllocation<T>,
    mu1: T,
    mu2: T,
) -> Result<KktReport<T>> {
    if tau.len() != gamma.len() + 1 {
        return Err(Error::DimensionMismatch {
            expected: gamma.len() + 1,
            got: tau.len(),
        });
    }
    if !(mu1.is_finite() && mu2.is_finite()) {
        return Err(invalid(
            "mu",
            "multipliers must be finite to evaluate residuals",
        ));
    }
    let t = tau.as_slice();
    let g = gamma.as_slice();
    let mut grad = vec![-mu2; t.len()];
    for (i, gi) in g.iter().enumerate() {
        let (d0, di) = rate_gradient(*gi, t[0], t[i + 1]);
        let weight = if i == 0 { T::one() + mu1 } else { T::one() };
        grad[0] = grad[0] + weight * d0;
        grad[i + 1] = grad[i + 1] + weight * di;
    }
    let stationarity_norm = grad.iter().fold(T::zero(), |acc, v| acc.hypot(*v));
    let r1 = throughput(g[0], t[0], t[1]);
    let total = tau.total();
    Ok(KktReport {
        stationarity: grad,
        stationarity_norm,
        c1_slack: r1 - delta,
        budget_slack: T::one() - total,
        comp_c1: mu1 * (delta - r1),
        comp_c3: mu2 * (total - T::one()),
    })
}

/// Residuals of a solver solution.
pub fn kkt_residuals_solution<T: Scalar>(
    gamma: &GammaVector<T>,
    delta: T,
    sol: &Solution<T>,
) -> Result<KktReport<T>> {
    kkt_residuals_at(gamma, delta, &sol.tau, sol.mu1, sol.mu2)
}

/// Residuals of a solver outcome; an infeasible outcome has none.
pub fn kkt_residuals<T: Scalar>(
    gamma: &GammaVector<T>,
    delta: T,
    outcome: &SolverOutcome<T>,
) -> Result<KktReport<T>> {
    match outcome.solution() {
        Some(sol) => kkt_residuals_solution(gamma, delta, sol),
        None => Err(invalid(
            "outcome",
            "infeasible outcomes carry no allocation",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve, GslsConfig};

    #[test]
    fn interior_solution_is_stationary() {
        let gamma = GammaVector::new(vec![40.0_f64, 25.0, 60.0]).unwrap();
        let out = solve(&gamma, 0.0, &GslsConfig::default()).unwrap();
        let rep = kkt_residuals(&gamma, 0.0, &out).unwrap();
        assert!(rep.stationarity_norm < 1e-9, "{rep:?}");
        assert!(rep.budget_slack.abs() < 1e-12);
        assert!(rep.c1_slack > 0.0);
        assert_eq!(rep.comp_c1, 0.0);
    }

    #[test]
    fn perturbed_multiplier_breaks_stationarity() {
        let gamma = GammaVector::new(vec![40.0, 25.0]).unwrap();
        let out = solve(&gamma, 0.0, &GslsConfig::default()).unwrap();
        let sol = out.solution().unwrap();
        let rep = kkt_residuals_at(&gamma, 0.0, &sol.tau, 0.0, sol.mu2 * 1.01).unwrap();
        assert!(rep.stationarity_norm > 1e-3);
    }

    #[test]
    fn rejects_infeasible_and_bad_shapes() {
        let gamma = GammaVector::new(vec![1.0, 2.0]).unwrap();
        let out = solve(&gamma, 50.0, &GslsConfig::default()).unwrap();
        assert!(kkt_residuals(&gamma, 50.0, &out).is_err());
        let tau = TimeAllocation::new(vec![0.5, 0.5]).unwrap();
        assert!(kkt_residuals_at(&gamma, 0.0, &tau, 0.0, 1.0).is_err());
    }
}
