//! Direct numerical searches over the simplex, independent of the closed form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::model::{throughput, GammaVector, TimeAllocation};
use crate::scalar::Scalar;

use super::derivatives::{rate_gradient, sum_gradient_raw};

/// Largest number of SUs the exhaustive grid accepts.
pub const GRID_MAX_SU: usize = 2;

/// Best feasible point found by a search.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleBest<T> {
    pub tau: TimeAllocation<T>,
    pub r_sum: T,
    pub r1: T,
}

fn sum_rate<T: Scalar>(gamma: &[T], tau: &[T]) -> T {
    gamma
        .iter()
        .enumerate()
        .map(|(i, g)| throughput(*g, tau[0], tau[i + 1]))
        .sum()
}

fn visit_compositions(
    parts: usize,
    total: usize,
    prefix: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if parts == 1 {
        prefix.push(total);
        visit(prefix);
        prefix.pop();
        return;
    }
    for k in 0..=total {
        prefix.push(k);
        visit_compositions(parts - 1, total - k, prefix, visit);
        prefix.pop();
    }
}

/// Exhaustive search over allocations with every phase a multiple of
/// `1 / resolution` and the whole slot used, keeping points with `R_1 >= delta`.
pub fn grid_oracle<T: Scalar>(
    gamma: &GammaVector<T>,
    delta: T,
    resolution: usize,
) -> Result<OracleBest<T>> {
    if gamma.n_su() > GRID_MAX_SU {
        return Err(invalid(
            "n",
            format!(
                "grid search supports at most {GRID_MAX_SU} SUs, got {}",
                gamma.n_su()
            ),
        ));
    }
    if resolution == 0 {
        return Err(invalid("resolution", "must be positive"));
    }
    let g = gamma.as_slice();
    let m = T::from_count(resolution);
    let mut best: Option<(T, T, Vec<T>)> = None;
    let mut visit = |c: &[usize]| {
        let tau: Vec<T> = c.iter().map(|k| T::from_count(*k) / m).collect();
        let r1 = throughput(g[0], tau[0], tau[1]);
        if r1 < delta {
            return;
        }
        let r = sum_rate(g, &tau);
        if best.as_ref().is_none_or(|(b, _, _)| r > *b) {
            best = Some((r, r1, tau));
        }
    };
    visit_compositions(
        g.len() + 1,
        resolution,
        &mut Vec::with_capacity(g.len() + 1),
        &mut visit,
    );
    let (r_sum, r1, tau) = best.ok_or(Error::EmptyFeasibleGrid { resolution })?;
    Ok(OracleBest {
        tau: TimeAllocation::new(tau)?,
        r_sum,
        r1,
    })
}

/// Projection onto `{y >= 0, sum y = 1}` in the metric `sum (y_i - z_i)^2 / w_i`:
/// `y_i = max(0, z_i - w_i theta)` with `theta` fixing the sum.
pub fn project_simplex_weighted<T: Scalar>(z: &[T], w: &[T]) -> Vec<T> {
    let mut order: Vec<usize> = (0..z.len()).collect();
    let key = |i: usize| z[i] / w[i];
    order.sort_by(|&a, &b| {
        key(b)
            .partial_cmp(&key(a))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let (mut sz, mut sw) = (T::zero(), T::zero());
    let mut theta = T::zero();
    for &i in &order {
        sz = sz + z[i];
        sw = sw + w[i];
        let t = (sz - T::one()) / sw;
        if key(i) > t {
            theta = t;
        }
    }
    z.iter()
        .zip(w)
        .map(|(zi, wi)| (*zi - *wi * theta).max(T::zero()))
        .collect()
}

/// Euclidean projection onto `{x >= 0, sum x = 1}`.
pub fn project_simplex<T: Scalar>(v: &[T]) -> Vec<T> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cum = T::zero();
    let mut theta = T::zero();
    for (j, uj) in u.iter().enumerate() {
        cum = cum + *uj;
        let t = (cum - T::one()) / T::from_count(j + 1);
        if *uj - t > T::zero() {
            theta = t;
        }
    }
    v.iter().map(|x| (*x - theta).max(T::zero())).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AscentConfig {
    /// Independent random starts.
    pub restarts: usize,
    pub seed: u64,
    pub max_outer: usize,
    pub max_inner: usize,
    /// Stop an inner run once a step moves no entry more than this.
    pub step_tol: f64,
    /// Accepted PU-constraint violation before restoration.
    pub violation_tol: f64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self {
            restarts: 4,
            seed: 0,
            max_outer: 40,
            max_inner: 20000,
            step_tol: 1e-15,
            violation_tol: 1e-10,
        }
    }
}

/// One restart of the ascent.
#[derive(Debug, Clone, PartialEq)]
pub struct AscentRun<T> {
    pub start: Vec<T>,
    /// Merit value after each accepted step, one list per multiplier update.
    pub merit_trace: Vec<Vec<T>>,
    pub tau: Vec<T>,
    pub r_sum: T,
    pub r1: T,
    /// Final multiplier estimate for the PU constraint.
    pub mu1: T,
    /// Whether `R_1 >= delta` holds after restoration.
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AscentResult<T> {
    /// Best feasible run, lowest index on ties.
    pub best: Option<usize>,
    pub runs: Vec<AscentRun<T>>,
}

impl<T: Scalar> AscentResult<T> {
    pub fn best_run(&self) -> Option<&AscentRun<T>> {
        self.best.map(|i| &self.runs[i])
    }
}

struct Problem<'a, T> {
    gamma: &'a [T],
    delta: T,
}

impl<T: Scalar> Problem<'_, T> {
    fn r1(&self, x: &[T]) -> T {
        throughput(self.gamma[0], x[0], x[1])
    }

    fn merit(&self, x: &[T], lambda: T, rho: T) -> T {
        let c = self.delta - self.r1(x);
        let p = (lambda + rho * c).max(T::zero());
        sum_rate(self.gamma, x) - (p * p - lambda * lambda) / (T::two() * rho)
    }

    fn merit_grad(&self, x: &[T], lambda: T, rho: T) -> Vec<T> {
        let mut g = sum_gradient_raw(self.gamma, x);
        let p = (lambda + rho * (self.delta - self.r1(x))).max(T::zero());
        if p > T::zero() {
            let (d0, d1) = rate_gradient(self.gamma[0], x[0], x[1]);
            g[0] = g[0] + p * d0;
            g[1] = g[1] + p * d1;
        }
        g
    }

    /// Magnitude of the diagonal of the merit Hessian, used as the metric
    /// of the projection step.
    fn curvature(&self, x: &[T], lambda: T, rho: T) -> Vec<T> {
        let lo = T::lit(1e-12);
        let ln2 = T::LN_2();
        let mut d = vec![T::zero(); x.len()];
        let p = (lambda + rho * (self.delta - self.r1(x))).max(T::zero());
        for (i, g) in self.gamma.iter().enumerate() {
            let t = x[i + 1].max(lo);
            let omega = T::one() + *g * x[0] / t;
            let c = *g * *g / (omega * omega * ln2);
            let weight = if i == 0 { T::one() + p } else { T::one() };
            d[0] = d[0] + weight * c / t;
            d[i + 1] = weight * c * x[0] * x[0] / (t * t * t);
        }
        if p > T::zero() {
            let (d0, d1) = rate_gradient(self.gamma[0], x[0], x[1]);
            d[0] = d[0] + rho * d0 * d0;
            d[1] = d[1] + rho * d1 * d1;
        }
        let top = d.iter().fold(T::zero(), |m, v| m.max(*v));
        let floor = (top * T::lit(1e-12)).max(T::lit(1e-12));
        d.iter().map(|v| v.max(floor)).collect()
    }

    /// Projected gradient ascent in the metric of the Hessian diagonal, with
    /// Armijo backtracking along the projection arc. Every accepted step
    /// raises the merit.
    fn inner(&self, x: &mut Vec<T>, lambda: T, rho: T, cfg: &AscentConfig, trace: &mut Vec<T>) {
        let armijo = T::lit(1e-4);
        let step_tol = T::lit(cfg.step_tol);
        let mut step = T::one();
        let mut fx = self.merit(x, lambda, rho);
        trace.push(fx);
        for _ in 0..cfg.max_inner {
            let gx = self.merit_grad(x, lambda, rho);
            let dx = self.curvature(x, lambda, rho);
            let mut t = step;
            let mut accepted = None;
            while t > T::lit(1e-30) {
                let w: Vec<T> = dx.iter().map(|d| t / *d).collect();
                let z: Vec<T> = x
                    .iter()
                    .zip(&gx)
                    .zip(&w)
                    .map(|((a, g), wi)| *a + *wi * *g)
                    .collect();
                let cand = project_simplex_weighted(&z, &w);
                let d: Vec<T> = cand.iter().zip(x.iter()).map(|(c, a)| *c - *a).collect();
                if d.iter().all(|v| v.abs() <= T::epsilon() * T::lit(0.5)) {
                    break;
                }
                let gain: T = d.iter().zip(&gx).map(|(a, b)| *a * *b).sum();
                let fc = self.merit(&cand, lambda, rho);
                if fc >= fx + armijo * gain && fc >= fx {
                    accepted = Some((cand, d, fc));
                    break;
                }
                t = t / T::two();
            }
            let Some((cand, s, fc)) = accepted else { break };
            step = (t * T::two()).min(T::one());
            let moved = s.iter().fold(T::zero(), |m, v| m.max(v.abs()));
            *x = cand;
            fx = fc;
            trace.push(fx);
            if moved <= step_tol {
                break;
            }
        }
    }

    fn run(&self, start: Vec<T>, cfg: &AscentConfig) -> AscentRun<T> {
        let mut x = start.clone();
        let mut lambda = T::zero();
        let mut rho = T::lit(1e2);
        let rho_max = T::lit(1e10);
        let tol = T::lit(cfg.violation_tol) * (T::one() + self.delta);
        let mut prev_violation = T::infinity();
        let mut merit_trace = Vec::new();
        for _ in 0..cfg.max_outer.max(1) {
            let mut trace = Vec::new();
            self.inner(&mut x, lambda, rho, cfg, &mut trace);
            merit_trace.push(trace);
            let c = self.delta - self.r1(&x);
            let violation = c.max(T::zero());
            let next = (lambda + rho * c).max(T::zero());
            let settled = (next - lambda).abs() <= T::lit(1e-8) * (T::one() + lambda);
            lambda = next;
            if violation <= tol && settled {
                break;
            }
            if violation > prev_violation / T::lit(4.0) {
                rho = (rho * T::lit(10.0)).min(rho_max);
            }
            prev_violation = violation;
        }
        let feasible = self.restore(&mut x);
        AscentRun {
            start,
            merit_trace,
            r_sum: sum_rate(self.gamma, &x),
            r1: self.r1(&x),
            tau: x,
            mu1: lambda,
            feasible,
        }
    }

    /// Moves SU time into the WPT and PU phases in proportion until
    /// `R_1 >= delta`. `R_1` is homogeneous of degree one in `(tau0, tau1)`.
    fn restore(&self, x: &mut [T]) -> bool {
        let r1 = self.r1(x);
        if r1 >= self.delta {
            return true;
        }
        if !(r1 > T::zero()) {
            return false;
        }
        let head = x[0] + x[1];
        let su: T = x[2..].iter().copied().sum();
        let need = head * (self.delta / r1 - T::one());
        if su <= T::zero() || need > su {
            return false;
        }
        let scale = T::one() + need / head;
        x[0] = x[0] * scale;
        x[1] = x[1] * scale;
        let keep = T::one() - need / su;
        for v in x[2..].iter_mut() {
            *v = *v * keep;
        }
        self.r1(x) >= self.delta * (T::one() - T::lit(4.0) * T::epsilon())
    }
}

fn dirichlet_start<T: Scalar>(rng: &mut ChaCha8Rng, dim: usize) -> Vec<T> {
    let draws: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = draws.iter().sum();
    draws.iter().map(|d| T::lit(d / total)).collect()
}

/// Multi-start projected gradient ascent on an augmented Lagrangian of the
/// PU constraint. Each restart draws a uniform point on the simplex from a
/// generator seeded by `seed` and the restart index.
pub fn ascent_oracle<T: Scalar>(
    gamma: &GammaVector<T>,
    delta: T,
    cfg: &AscentConfig,
) -> Result<AscentResult<T>> {
    if cfg.restarts == 0 {
        return Err(invalid("restarts", "must be at least 1"));
    }
    if !(delta >= T::zero() && delta.is_finite()) {
        return Err(invalid("delta", "must be nonnegative and finite"));
    }
    let problem = Problem {
        gamma: gamma.as_slice(),
        delta,
    };
    let dim = gamma.len() + 1;
    let runs: Vec<AscentRun<T>> = (0..cfg.restarts)
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(
                cfg.seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            problem.run(dirichlet_start(&mut rng, dim), cfg)
        })
        .collect();
    let mut best: Option<usize> = None;
    for (i, run) in runs.iter().enumerate() {
        if run.feasible && best.is_none_or(|b| run.r_sum > runs[b].r_sum) {
            best = Some(i);
        }
    }
    Ok(AscentResult { best, runs })
}
