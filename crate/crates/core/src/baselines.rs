//! Comparison schemes and their evaluation under the full harvesting model.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::model::{
    effective_snr_vector, rates, wpt_only_snr_vector, ChannelGains, GammaVector, SystemParams,
    TimeAllocation,
};
use crate::scalar::Scalar;
use crate::solver::solve_unconstrained;

/// Slack below `delta` still counted as meeting the PU target.
pub const DELTA_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Proposed,
    Benchmark,
    Uniform,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Proposed, Scheme::Benchmark, Scheme::Uniform];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Proposed => "proposed",
            Scheme::Benchmark => "benchmark",
            Scheme::Uniform => "uniform",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "proposed" => Ok(Scheme::Proposed),
            "benchmark" => Ok(Scheme::Benchmark),
            "uniform" => Ok(Scheme::Uniform),
            other => Err(invalid(
                "scheme",
                format!("expected proposed, benchmark or uniform, got `{other}`"),
            )),
        }
    }
}

/// Harvesting model the benchmark designs its allocation for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BenchmarkDesign {
    /// Only the dedicated WPT phase is harvested.
    #[default]
    PbsOnly,
    /// Ambient harvesting included; isolates the effect of ignoring `delta`.
    FullHarvest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeReport<T> {
    pub scheme: Scheme,
    pub tau: TimeAllocation<T>,
    pub r_sum: T,
    pub r1: T,
    pub meets_delta: bool,
}

/// Equal share `1 / (N + 2)` for the WPT phase and every data phase.
pub fn uniform_ta<T: Scalar>(n: usize) -> TimeAllocation<T> {
    let share = T::one() / T::from_count(n + 2);
    TimeAllocation::new(vec![share; n + 2]).expect("uniform split is a valid allocation")
}

/// Allocation of a scheme that ignores the PU target and optimises for the
/// chosen harvesting model.
pub fn benchmark_ta<T: Scalar>(
    gains: &ChannelGains<T>,
    params: &SystemParams<T>,
    design: BenchmarkDesign,
) -> Result<TimeAllocation<T>> {
    let gamma = match design {
        BenchmarkDesign::PbsOnly => wpt_only_snr_vector(gains, params)?,
        BenchmarkDesign::FullHarvest => effective_snr_vector(gains, params)?,
    };
    Ok(solve_unconstrained(&gamma)?.tau)
}

/// Rates of `tau` under the full harvesting coefficients.
pub fn evaluate_scheme<T: Scalar>(
    scheme: Scheme,
    tau: TimeAllocation<T>,
    gamma_full: &GammaVector<T>,
    delta: T,
) -> Result<SchemeReport<T>> {
    let r = rates(gamma_full, &tau)?;
    let r1 = r[0];
    let r_sum = r.into_iter().sum();
    Ok(SchemeReport {
        scheme,
        tau,
        r_sum,
        r1,
        meets_delta: r1 >= delta - T::lit(DELTA_TOLERANCE),
    })
}
