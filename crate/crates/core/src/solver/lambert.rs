//! Principal-branch Lambert W and the two scalar functions built on it that
//! characterise the unconstrained optimum.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_HALLEY_ITERS: usize = 50;

fn domain<T: Scalar>(function: &'static str, x: T) -> Error {
    Error::Domain {
        function,
        value: x.to_f64().unwrap_or(f64::NAN),
    }
}

/// Principal branch `W0(x)`, the solution `w >= -1` of `w * e^w = x`.
///
/// Halley iteration started from the branch-point series near `-1/e`, from
/// `x` itself for small arguments and from the asymptotic `ln x - ln ln x`
/// expansion for large ones.
pub fn lambert_w0<T: Scalar>(x: T) -> Result<T> {
    let e = T::E();
    let branch = -T::one() / e;
    if x.is_nan() || x < branch {
        // Admit arguments that round just below the branch point.
        if x.is_nan() || x < branch - T::lit(4.0) * T::epsilon() {
            return Err(domain("lambert_w0", x));
        }
        return Ok(-T::one());
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    if x == T::infinity() {
        return Ok(x);
    }

    let one = T::one();
    let q = e * x + one;
    let mut w = if q < T::lit(0.5) {
        let p = (T::two() * q).sqrt();
        -one + p - p * p / T::lit(3.0) + T::lit(11.0 / 72.0) * p * p * p
    } else if x < T::lit(3.0) {
        x.ln_1p()
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };

    let tol = T::lit(4.0) * T::epsilon();
    for _ in 0..MAX_HALLEY_ITERS {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + one;
        if wp1 == T::zero() {
            break;
        }
        let denom = ew * wp1 - (w + T::two()) * f / (T::two() * wp1);
        if denom == T::zero() || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        w = w - step;
        if w < -one {
            w = -one;
        }
        if step.abs() <= tol * (one + w.abs()) {
            break;
        }
    }
    Ok(w)
}

/// `Phi(x) = ln(1 + x) - x / (1 + x)`, the marginal throughput of a data
/// phase at per-phase SNR `x`.
pub fn phi<T: Scalar>(x: T) -> Result<T> {
    if !(x >= T::zero()) {
        return Err(domain("phi", x));
    }
    Ok(phi_unchecked(x))
}

#[inline]
pub(crate) fn phi_unchecked<T: Scalar>(x: T) -> T {
    if x == T::infinity() {
        return x;
    }
    if x.abs() < T::lit(1e-2) {
        // x^2/2 - 2x^3/3 + 3x^4/4 - ... ; the closed form cancels here.
        let mut term = x;
        let mut sum = T::zero();
        let mut sign = T::one();
        for k in 2..12 {
            term = term * x;
            let kf = T::from_count(k);
            sum = sum + sign * (kf - T::one()) / kf * term;
            sign = -sign;
        }
        return sum;
    }
    x.ln_1p() - x / (T::one() + x)
}

/// `f(G) = (G - 1) / W0((G - 1) / e)`, the common value of `1 + gamma_k tau0 / tau_k`
/// at the unconstrained optimum with aggregate coefficient `G`.
///
/// Evaluated as `exp(1 + W0((G - 1) / e))`, which equals the quotient and is
/// free of the `0 / 0` at `G = 1`, where it returns `e`.
pub fn f_of_gamma<T: Scalar>(gamma: T) -> Result<T> {
    if !(gamma > T::zero()) || !gamma.is_finite() {
        return Err(domain("f_of_gamma", gamma));
    }
    let w = lambert_w0((gamma - T::one()) / T::E())?;
    Ok((T::one() + w).exp())
}
