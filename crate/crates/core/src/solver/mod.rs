//! Globally optimal time allocation.
//!
//! The problem is concave, so its KKT point is the optimum. Three cases:
//!
//! * the PU target exceeds what the PU achieves with the whole slot: infeasible;
//! * the target is slack at the unconstrained optimum: every data phase gets
//!   the same per-phase SNR and the allocation is closed form via Lambert W;
//! * otherwise the PU rate is pinned to the target, the SUs share the rest of
//!   the slot at a common SNR, and the PU-phase duration is the root of a
//!   single scalar equation located by golden-section search.

mod gsls;
mod lambert;

pub use gsls::{
    gsls_bound, gsls_iterations, gsls_minimize_abs, gsls_root, GslsConfig, GslsTrace,
    GOLDEN_CONJUGATE,
};
pub(crate) use lambert::phi_unchecked;
pub use lambert::{f_of_gamma, lambert_w0, phi};

use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::model::{rates, GammaVector, TimeAllocation};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Infeasible,
    /// PU constraint slack, `mu1 = 0`.
    Interior,
    /// PU constraint tight.
    Boundary,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Infeasible => "infeasible",
            Branch::Interior => "interior",
            Branch::Boundary => "boundary",
        })
    }
}

/// Optimal allocation together with its KKT multipliers.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T> {
    pub tau: TimeAllocation<T>,
    /// Multiplier of the PU rate constraint.
    pub mu1: T,
    /// Multiplier of the slot budget.
    pub mu2: T,
    /// `R_1 .. R_{N+1}`.
    pub rates: Vec<T>,
    pub r_sum: T,
    /// Golden-section diagnostics, present on the constrained branch.
    pub gsls: Option<GslsTrace<T>>,
}

impl<T: Scalar> Solution<T> {
    pub fn r1(&self) -> T {
        self.rates[0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverOutcome<T> {
    Infeasible { r1_threshold: T },
    Interior(Solution<T>),
    Boundary(Solution<T>),
}

impl<T: Scalar> SolverOutcome<T> {
    pub fn branch(&self) -> Branch {
        match self {
            Self::Infeasible { .. } => Branch::Infeasible,
            Self::Interior(_) => Branch::Interior,
            Self::Boundary(_) => Branch::Boundary,
        }
    }

    pub fn solution(&self) -> Option<&Solution<T>> {
        match self {
            Self::Infeasible { .. } => None,
            Self::Interior(s) | Self::Boundary(s) => Some(s),
        }
    }

    pub fn into_solution(self) -> Option<Solution<T>> {
        match self {
            Self::Infeasible { .. } => None,
            Self::Interior(s) | Self::Boundary(s) => Some(s),
        }
    }

    pub fn r_sum(&self) -> Option<T> {
        self.solution().map(|s| s.r_sum)
    }
}

fn finish<T: Scalar>(
    gamma: &GammaVector<T>,
    tau: Vec<T>,
    mu1: T,
    mu2: T,
    gsls: Option<GslsTrace<T>>,
) -> Result<Solution<T>> {
    let tau = TimeAllocation::new(tau)?;
    let rates = rates(gamma, &tau)?;
    let r_sum = rates.iter().copied().sum();
    Ok(Solution {
        tau,
        mu1,
        mu2,
        rates,
        r_sum,
        gsls,
    })
}

/// Optimum when the PU constraint is slack: all data phases share the SNR
/// `f(G_a) - 1`, with `G_a` the sum of the coefficients.
pub fn solve_unconstrained<T: Scalar>(gamma: &GammaVector<T>) -> Result<Solution<T>> {
    let g_a = gamma.total();
    let f = f_of_gamma(g_a)?;
    let denom = g_a + f - T::one();
    let mut tau = Vec::with_capacity(gamma.len() + 1);
    tau.push((f - T::one()) / denom);
    tau.extend(gamma.as_slice().iter().map(|g| *g / denom));
    let mu2 = g_a / (T::LN_2() * f);
    finish(gamma, tau, T::zero(), mu2, None)
}

/// WPT and PU durations when the whole slot serves the PU alone.
pub fn threshold_allocation<T: Scalar>(gamma1: T) -> Result<(T, T)> {
    let f = f_of_gamma(gamma1)?;
    let denom = gamma1 + f - T::one();
    Ok(((f - T::one()) / denom, gamma1 / denom))
}

/// Largest PU rate attainable in the slot; targets above it are infeasible.
pub fn feasibility_threshold<T: Scalar>(gamma1: T) -> Result<T> {
    let f = f_of_gamma(gamma1)?;
    let tau1 = gamma1 / (gamma1 + f - T::one());
    Ok(tau1 * f.log2())
}

/// WPT duration that makes the PU rate exactly `delta` for PU duration `tau1`.
#[inline]
pub fn tau0_of_tau1<T: Scalar>(tau1: T, delta: T, gamma1: T) -> T {
    tau1 / gamma1 * (delta * T::LN_2() / tau1).exp_m1()
}

/// Scalar stationarity residual of the constrained branch as a function of
/// the PU duration. Its root is the optimal `tau1`; it is positive left of
/// the root and negative right of it.
pub fn constrained_residual<T: Scalar>(tau1: T, delta: T, gamma1: T, gamma_b: T) -> Result<T> {
    let snr1 = (delta * T::LN_2() / tau1).exp_m1();
    let tau0 = tau1 / gamma1 * snr1;
    let rest = T::one() - (tau0 + tau1);
    if !(rest > T::zero()) {
        return Err(Error::BracketViolation {
            used: (tau0 + tau1).to_f64().unwrap_or(f64::INFINITY),
        });
    }
    let g = gamma_b * tau0 / rest;
    let s = T::one() + snr1;
    let pu_term = T::one() - gamma1 / (s * phi_unchecked(snr1));
    Ok(phi_unchecked(g) * pu_term - gamma_b / (T::one() + g))
}

/// Bisection for the crossing of `tau0(tau1) + tau1 = 1` between `inside`
/// (sum below one) and `outside`.
fn budget_edge<T: Scalar>(mut inside: T, mut outside: T, delta: T, gamma1: T) -> T {
    for _ in 0..200 {
        let mid = (inside + outside) / T::two();
        if mid == inside || mid == outside {
            break;
        }
        if tau0_of_tau1(mid, delta, gamma1) + mid < T::one() {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// Optimum with the PU rate pinned to `delta`.
///
/// Requires `R_1a <= delta <= R_1^th`. The PU duration is searched inside
/// the interval where the WPT and PU phases leave time for the SUs.
pub fn solve_constrained<T: Scalar>(
    gamma: &GammaVector<T>,
    delta: T,
    cfg: &GslsConfig<T>,
) -> Result<SolverOutcome<T>> {
    cfg.validate()?;
    if !(delta > T::zero()) {
        return Err(invalid(
            "delta",
            "the constrained branch needs a positive PU target",
        ));
    }
    let gamma1 = gamma.pu();
    let gamma_b = gamma.su_total();
    let r_th = feasibility_threshold(gamma1)?;
    if delta > r_th {
        return Ok(SolverOutcome::Infeasible { r1_threshold: r_th });
    }

    let boundary_point = |gamma: &GammaVector<T>| -> Result<SolverOutcome<T>> {
        // The whole slot goes to WPT and the PU; the SU multipliers diverge.
        let (t0, t1) = threshold_allocation(gamma1)?;
        let mut tau = vec![t0, t1];
        tau.extend(std::iter::repeat_n(T::zero(), gamma.n_su()));
        let (mu1, mu2) = if gamma.n_su() == 0 {
            (T::zero(), phi_unchecked(gamma1 * t0 / t1) / T::LN_2())
        } else {
            (T::infinity(), T::infinity())
        };
        Ok(SolverOutcome::Boundary(finish(gamma, tau, mu1, mu2, None)?))
    };

    if gamma.n_su() == 0 {
        // With the PU alone the unconstrained optimum is the threshold point.
        return boundary_point(gamma);
    }

    // tau0(tau1) + tau1 is convex with its minimum at delta / log2 f(gamma1).
    let f1 = f_of_gamma(gamma1)?;
    let centre = (delta / f1.log2()).max(cfg.bracket_lo).min(cfg.bracket_hi);
    if !(tau0_of_tau1(centre, delta, gamma1) + centre < T::one()) {
        return boundary_point(gamma);
    }
    let lo = if tau0_of_tau1(cfg.bracket_lo, delta, gamma1) + cfg.bracket_lo < T::one() {
        cfg.bracket_lo
    } else {
        budget_edge(centre, cfg.bracket_lo, delta, gamma1)
    };
    let hi = if tau0_of_tau1(cfg.bracket_hi, delta, gamma1) + cfg.bracket_hi < T::one() {
        cfg.bracket_hi
    } else {
        budget_edge(centre, cfg.bracket_hi, delta, gamma1)
    };
    if !(hi > lo) {
        return boundary_point(gamma);
    }

    let residual = |t: T| constrained_residual(t, delta, gamma1, gamma_b).unwrap_or(T::nan());
    let trace = gsls_minimize_abs(lo, hi, cfg.xi, cfg.max_iters, residual)?;

    // Polish inside the final interval when it still brackets a sign change.
    let mut tau1 = trace.x;
    let (mut a, mut b) = (trace.lo, trace.hi);
    let (fa, fb) = (residual(a), residual(b));
    if fa.is_finite() && fb.is_finite() && fa.signum() != fb.signum() {
        for _ in 0..200 {
            let mid = (a + b) / T::two();
            if mid == a || mid == b {
                break;
            }
            let fm = residual(mid);
            if fm == T::zero() {
                a = mid;
                b = mid;
                break;
            }
            if fm.signum() == fa.signum() {
                a = mid;
            } else {
                b = mid;
            }
        }
        tau1 = if residual(a).abs() <= residual(b).abs() {
            a
        } else {
            b
        };
    }

    let tau0 = tau0_of_tau1(tau1, delta, gamma1);
    let rest = T::one() - tau0 - tau1;
    let k_b = gamma_b / rest;
    let mut tau = Vec::with_capacity(gamma.len() + 1);
    tau.push(tau0);
    tau.push(tau1);
    tau.extend(gamma.su().iter().map(|g| *g * rest / gamma_b));
    let mu2 = phi_unchecked(k_b * tau0) / T::LN_2();
    // Tiny negative values only arise from rounding at the branch switch.
    let mu1 = (mu2 * T::LN_2() / phi_unchecked(gamma1 * tau0 / tau1) - T::one()).max(T::zero());
    Ok(SolverOutcome::Boundary(finish(
        gamma,
        tau,
        mu1,
        mu2,
        Some(trace),
    )?))
}

/// Globally optimal allocation for coefficients `gamma` and PU target `delta`.
pub fn solve<T: Scalar>(
    gamma: &GammaVector<T>,
    delta: T,
    cfg: &GslsConfig<T>,
) -> Result<SolverOutcome<T>> {
    if !(delta >= T::zero() && delta.is_finite()) {
        return Err(invalid(
            "delta",
            format!("must be nonnegative and finite, got {delta}"),
        ));
    }
    let r_th = feasibility_threshold(gamma.pu())?;
    if delta > r_th {
        return Ok(SolverOutcome::Infeasible { r1_threshold: r_th });
    }
    let free = solve_unconstrained(gamma)?;
    if delta < free.r1() {
        return Ok(SolverOutcome::Interior(free));
    }
    solve_constrained(gamma, delta, cfg)
}
