//! Golden-section line search used to locate the PU-phase duration when the
//! PU rate constraint is tight.

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Golden ratio conjugate `(sqrt(5) - 1) / 2`.
pub const GOLDEN_CONJUGATE: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, PartialEq)]
pub struct GslsConfig<T> {
    /// Absolute tolerance on the final interval width (s).
    pub xi: T,
    pub bracket_lo: T,
    pub bracket_hi: T,
    pub max_iters: usize,
}

impl<T: Scalar> Default for GslsConfig<T> {
    fn default() -> Self {
        Self {
            xi: T::lit(1e-9),
            bracket_lo: T::lit(1e-6),
            bracket_hi: T::lit(1.0 - 1e-6),
            max_iters: 200,
        }
    }
}

impl<T: Scalar> GslsConfig<T> {
    pub fn with_xi(xi: T) -> Self {
        Self {
            xi,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bracket_lo > T::zero()
            && self.bracket_lo < self.bracket_hi
            && self.bracket_hi < T::one())
        {
            return Err(invalid(
                "bracket",
                format!(
                    "need 0 < lo < hi < 1, got [{}, {}]",
                    self.bracket_lo, self.bracket_hi
                ),
            ));
        }
        if !(self.xi > T::zero() && self.xi < self.bracket_hi - self.bracket_lo) {
            return Err(invalid(
                "xi",
                format!("need 0 < xi < bracket width, got {}", self.xi),
            ));
        }
        if self.max_iters == 0 {
            return Err(invalid("max_iters", "must be at least 1"));
        }
        Ok(())
    }
}

/// Outcome of one golden-section run.
#[derive(Debug, Clone, PartialEq)]
pub struct GslsTrace<T> {
    /// Best point found.
    pub x: T,
    /// Interval shrink steps taken.
    pub iterations: usize,
    /// Residual evaluations, two initial probes plus one per step.
    pub evaluations: usize,
    pub initial_lo: T,
    pub initial_hi: T,
    /// Final interval.
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> GslsTrace<T> {
    pub fn initial_width(&self) -> T {
        self.initial_hi - self.initial_lo
    }

    pub fn final_width(&self) -> T {
        self.hi - self.lo
    }
}

/// Evaluation budget `ceil(2 - 2.08 ln(xi / width))` of golden-section search.
pub fn gsls_bound<T: Scalar>(xi: T, width: T) -> usize {
    let n = (T::two() - T::lit(2.08) * (xi / width).ln()).ceil();
    n.to_usize().unwrap_or(usize::MAX).max(2)
}

/// Evaluation budget for the configured bracket.
pub fn gsls_iterations<T: Scalar>(cfg: &GslsConfig<T>) -> usize {
    gsls_bound(cfg.xi, cfg.bracket_hi - cfg.bracket_lo)
}

/// Minimises `|residual|` over `[lo, hi]` by golden-section search until the
/// interval is no wider than `xi`. Non-finite residuals count as `+inf`.
pub fn gsls_minimize_abs<T: Scalar, F>(
    lo: T,
    hi: T,
    xi: T,
    max_iters: usize,
    mut residual: F,
) -> Result<GslsTrace<T>>
where
    F: FnMut(T) -> T,
{
    let r = T::lit(GOLDEN_CONJUGATE);
    let mut score = |x: T| {
        let v = residual(x).abs();
        if v.is_finite() {
            v
        } else {
            T::infinity()
        }
    };

    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = score(c);
    let mut fd = score(d);
    let mut iterations = 0;
    let mut any_finite = fc.is_finite() || fd.is_finite();

    while b - a > xi && iterations < max_iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = score(c);
            any_finite |= fc.is_finite();
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = score(d);
            any_finite |= fd.is_finite();
        }
        iterations += 1;
    }

    if !any_finite {
        return Err(Error::InfeasibleBracket {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    let x = if fc <= fd { c } else { d };
    Ok(GslsTrace {
        x,
        iterations,
        evaluations: iterations + 2,
        initial_lo: lo,
        initial_hi: hi,
        lo: a,
        hi: b,
    })
}

/// Golden-section search for the root of `residual` on the configured bracket.
pub fn gsls_root<T: Scalar, F>(cfg: &GslsConfig<T>, residual: F) -> Result<GslsTrace<T>>
where
    F: FnMut(T) -> T,
{
    cfg.validate()?;
    gsls_minimize_abs(
        cfg.bracket_lo,
        cfg.bracket_hi,
        cfg.xi,
        cfg.max_iters,
        residual,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_formula() {
        assert_eq!(gsls_bound(1.0, 1.0), 2);
        assert_eq!(gsls_bound(1e-4, 1.0), 22);
        for k in 1..30 {
            let xi = 10f64.powf(-(k as f64) / 3.0);
            let extra = gsls_bound(xi / 2.0, 1.0) - gsls_bound(xi, 1.0);
            assert!(extra <= 2, "xi = {xi}");
        }
    }

    #[test]
    fn finds_known_minimiser() {
        let cfg = GslsConfig {
            xi: 1e-6,
            bracket_lo: 1e-9,
            bracket_hi: 1.0 - 1e-9,
            max_iters: 500,
        };
        let t = gsls_root(&cfg, |x: f64| (x - 0.3).abs()).unwrap();
        assert!((t.x - 0.3).abs() <= 1e-6);
        assert!(t.final_width() <= 1e-6);
        assert!(t.evaluations <= gsls_iterations(&cfg));
    }

    #[test]
    fn shrink_ratio_is_golden() {
        let t = gsls_minimize_abs(0.0, 1.0, 1e-8, 1000, |x: f64| x - 0.71).unwrap();
        let predicted = GOLDEN_CONJUGATE.powi(t.iterations as i32);
        assert!((t.final_width() / predicted - 1.0).abs() < 1e-6);
        let one = gsls_minimize_abs(0.0, 1.0, 0.7, 1000, |x: f64| x - 0.71).unwrap();
        assert_eq!(one.iterations, 1);
        assert!((one.final_width() - GOLDEN_CONJUGATE).abs() < 1e-15);
    }

    #[test]
    fn respects_budget_at_1e_4() {
        let cfg = GslsConfig {
            xi: 1e-4,
            bracket_lo: 1e-12,
            bracket_hi: 1.0 - 1e-12,
            max_iters: 500,
        };
        let t = gsls_root(&cfg, |x: f64| x * x - 0.2).unwrap();
        assert!(t.evaluations <= 22);
        assert!((t.x - 0.2f64.sqrt()).abs() <= 1e-4);
    }

    #[test]
    fn rejects_bracket_without_finite_residual() {
        let cfg = GslsConfig::<f64>::with_xi(1e-6);
        assert!(matches!(
            gsls_root(&cfg, |_| f64::NAN),
            Err(Error::InfeasibleBracket { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(GslsConfig::<f64>::default().validate().is_ok());
        assert!(GslsConfig {
            xi: 2.0,
            ..GslsConfig::<f64>::default()
        }
        .validate()
        .is_err());
        assert!(GslsConfig {
            bracket_lo: 0.0,
            ..GslsConfig::<f64>::default()
        }
        .validate()
        .is_err());
        assert!(GslsConfig {
            bracket_hi: 1.0,
            ..GslsConfig::<f64>::default()
        }
        .validate()
        .is_err());
    }
}
