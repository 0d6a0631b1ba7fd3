//! Analytic first and second derivatives of the per-node rates, plus the
//! small dense linear algebra needed to inspect them.
//!
//! Rates are in bits, so every derivative carries the `1 / ln 2` factor of
//! the base-2 logarithm.

use crate::error::{Error, Result};
use crate::model::{GammaVector, TimeAllocation};
use crate::scalar::Scalar;
use crate::solver::phi_unchecked;

/// Smallest phase duration used when differentiating at the `tau_i = 0` edge.
fn floor<T: Scalar>() -> T {
    T::min_positive_value().sqrt()
}

/// `(dR_i/dtau0, dR_i/dtau_i)`.
pub fn rate_gradient<T: Scalar>(gamma_i: T, tau0: T, tau_i: T) -> (T, T) {
    let t = tau_i.max(floor());
    let x = gamma_i * tau0 / t;
    (
        gamma_i / ((T::one() + x) * T::LN_2()),
        phi_unchecked(x) / T::LN_2(),
    )
}

fn check_dims<T: Scalar>(gamma: &GammaVector<T>, tau: &TimeAllocation<T>) -> Result<()> {
    if tau.len() != gamma.len() + 1 {
        return Err(Error::DimensionMismatch {
            expected: gamma.len() + 1,
            got: tau.len(),
        });
    }
    Ok(())
}

/// Gradient of the sum throughput over `tau_0 .. tau_{N+1}`.
pub fn sum_throughput_gradient<T: Scalar>(
    gamma: &GammaVector<T>,
    tau: &TimeAllocation<T>,
) -> Result<Vec<T>> {
    check_dims(gamma, tau)?;
    Ok(sum_gradient_raw(gamma.as_slice(), tau.as_slice()))
}

pub(crate) fn sum_gradient_raw<T: Scalar>(gamma: &[T], tau: &[T]) -> Vec<T> {
    let mut grad = vec![T::zero(); tau.len()];
    for (i, g) in gamma.iter().enumerate() {
        let (d0, di) = rate_gradient(*g, tau[0], tau[i + 1]);
        grad[0] = grad[0] + d0;
        grad[i + 1] = di;
    }
    grad
}

/// Nonzero entries of the Hessian of `R_i` in the `(tau0, tau_i)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateHessian<T> {
    pub d_tau0_tau0: T,
    pub d_tau0_taui: T,
    pub d_taui_taui: T,
}

impl<T: Scalar> RateHessian<T> {
    pub fn det(&self) -> T {
        self.d_tau0_tau0 * self.d_taui_taui - self.d_tau0_taui * self.d_tau0_taui
    }
}

fn rate_hessian_at<T: Scalar>(gamma_i: T, tau0: T, tau_i: T) -> RateHessian<T> {
    let omega = T::one() + gamma_i * tau0 / tau_i;
    let c = gamma_i * gamma_i / (omega * omega * T::LN_2());
    RateHessian {
        d_tau0_tau0: -c / tau_i,
        d_tau0_taui: c * tau0 / (tau_i * tau_i),
        d_taui_taui: -c * tau0 * tau0 / (tau_i * tau_i * tau_i),
    }
}

/// Hessian entries of `R_i` for data node `i` (1 is the PU, `j + 1` is SU `j`).
pub fn hessian_r_i<T: Scalar>(
    gamma: &GammaVector<T>,
    tau: &TimeAllocation<T>,
    i: usize,
) -> Result<RateHessian<T>> {
    check_dims(gamma, tau)?;
    if i == 0 || i > gamma.len() {
        return Err(Error::DimensionMismatch {
            expected: gamma.len(),
            got: i,
        });
    }
    let t = tau.as_slice();
    if !(t[i] > T::zero()) {
        return Err(Error::Domain {
            function: "hessian_r_i",
            value: 0.0,
        });
    }
    Ok(rate_hessian_at(gamma.as_slice()[i - 1], t[0], t[i]))
}

/// The full `(N+2) x (N+2)` Hessian of `R_i`, zero outside rows/columns 0 and `i`.
pub fn hessian_matrix<T: Scalar>(
    gamma: &GammaVector<T>,
    tau: &TimeAllocation<T>,
    i: usize,
) -> Result<Vec<Vec<T>>> {
    let h = hessian_r_i(gamma, tau, i)?;
    let n = tau.len();
    let mut m = vec![vec![T::zero(); n]; n];
    m[0][0] = h.d_tau0_tau0;
    m[0][i] = h.d_tau0_taui;
    m[i][0] = h.d_tau0_taui;
    m[i][i] = h.d_taui_taui;
    Ok(m)
}

/// Hessian of `delta - R_1` in `(tau0, tau1)`.
pub fn constraint_hessian<T: Scalar>(gamma1: T, tau0: T, tau1: T) -> [[T; 2]; 2] {
    let h = rate_hessian_at(gamma1, tau0, tau1);
    [
        [-h.d_tau0_tau0, -h.d_tau0_taui],
        [-h.d_tau0_taui, -h.d_taui_taui],
    ]
}

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
pub fn symmetric_eigenvalues_2x2<T: Scalar>(m: &[[T; 2]; 2]) -> (T, T) {
    let mean = (m[0][0] + m[1][1]) / T::two();
    let half_diff = (m[0][0] - m[1][1]) / T::two();
    let r = half_diff.hypot(m[0][1]);
    (mean - r, mean + r)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant<T: Scalar>(m: &[Vec<T>]) -> T {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m.iter().map(|r| r[..n].to_vec()).collect();
    let mut det = T::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| {
                a[p][col]
                    .abs()
                    .partial_cmp(&a[q][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        if a[pivot][col] == T::zero() {
            return T::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det = det * a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] = a[row][k] - factor * v;
            }
        }
    }
    det
}

/// Leading principal minors, each divided by the Hadamard bound (product of
/// its row norms) so that values are comparable with a unit tolerance.
pub fn scaled_leading_minors<T: Scalar>(m: &[Vec<T>]) -> Vec<T> {
    (1..=m.len())
        .map(|k| {
            let sub: Vec<Vec<T>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
            let bound: T = sub
                .iter()
                .map(|r| r.iter().fold(T::zero(), |acc, v| acc.hypot(*v)))
                .fold(T::one(), |a, b| a * b);
            if bound == T::zero() {
                T::zero()
            } else {
                determinant(&sub) / bound
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::throughput;

    #[test]
    fn gradient_matches_difference_quotient() {
        let (g, t0, ti) = (37.0_f64, 0.3, 0.2);
        let (d0, di) = rate_gradient(g, t0, ti);
        let h = 1e-6;
        let fd0 = (throughput(g, t0 + h, ti) - throughput(g, t0 - h, ti)) / (2.0 * h);
        let fdi = (throughput(g, t0, ti + h) - throughput(g, t0, ti - h)) / (2.0 * h);
        assert!((d0 - fd0).abs() < 1e-8 * d0.abs());
        assert!((di - fdi).abs() < 1e-8 * di.abs());
    }

    #[test]
    fn gradient_at_zero_duration_is_finite() {
        let (d0, di) = rate_gradient(10.0f64, 0.4, 0.0);
        assert!(d0.is_finite() && di.is_finite() && di > 0.0);
        let (d0, di) = rate_gradient(10.0f64, 0.0, 0.3);
        assert!((d0 - 10.0 / std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(di, 0.0);
    }

    #[test]
    fn determinant_small_cases() {
        let m = vec![
            vec![2.0_f64, 1.0, 0.0],
            vec![1.0, 3.0, 1.0],
            vec![0.0, 1.0, 4.0],
        ];
        assert!((determinant(&m) - 18.0).abs() < 1e-12);
        let sing = vec![vec![1.0_f64, 2.0], vec![2.0, 4.0]];
        assert!(determinant(&sing).abs() < 1e-15);
        let swap = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(determinant(&swap), -1.0);
    }

    #[test]
    fn eigenvalues_2x2() {
        let (a, b) = symmetric_eigenvalues_2x2(&[[2.0_f64, 1.0], [1.0, 2.0]]);
        assert!((a - 1.0).abs() < 1e-15 && (b - 3.0).abs() < 1e-15);
    }

    #[test]
    fn hessian_index_checks() {
        let gamma = GammaVector::new(vec![3.0, 4.0]).unwrap();
        let tau = TimeAllocation::new(vec![0.3, 0.3, 0.4]).unwrap();
        assert!(hessian_r_i(&gamma, &tau, 0).is_err());
        assert!(hessian_r_i(&gamma, &tau, 3).is_err());
        let zero = TimeAllocation::new(vec![0.6, 0.4, 0.0]).unwrap();
        assert!(hessian_r_i(&gamma, &zero, 2).is_err());
        let m = hessian_matrix(&gamma, &tau, 2).unwrap();
        assert_eq!(m[1], vec![0.0; 3]);
        assert_eq!(m[0][2], m[2][0]);
    }
}
