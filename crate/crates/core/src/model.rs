//! Physical scenario: node geometry, path-loss gains, harvested energy and
//! the effective SNR coefficients that turn the slot into a pure time
//! allocation problem.
//!
//! Every node harvests over the phase of the transmitter it listens to, so
//! the phase durations cancel out of the harvested power and each link is
//! summarised by a constant coefficient `gamma_i`. The throughput of node `i`
//! is then `tau_i * log2(1 + gamma_i * tau_0 / tau_i)`.

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Speed of light used in the free-space reference attenuation.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams<T> {
    /// PBS transmit power (W).
    pub p0: T,
    /// Rectification efficiency.
    pub eta: T,
    /// Receiver noise variance (W).
    pub sigma2: T,
    /// Minimum PU rate (bits/s/Hz).
    pub delta: T,
    /// Side of the square field (m).
    pub l: T,
    /// Number of SU pairs.
    pub n: usize,
    /// Carrier frequency (Hz).
    pub nu: T,
    /// Path-loss exponent.
    pub zeta_pl: T,
    /// Slot duration (s); always one.
    pub t: T,
    /// Minimum separation between any two nodes (m).
    pub d_min: T,
}

impl<T: Scalar> Default for SystemParams<T> {
    /// The reference scenario: 21 m field, four SU pairs, 10 W PBS at
    /// 915 MHz, -100 dBm noise, 50% rectification, 18 bits/s/Hz PU target.
    fn default() -> Self {
        Self {
            p0: T::lit(10.0),
            eta: T::lit(0.5),
            sigma2: T::lit(1e-13),
            delta: T::lit(18.0),
            l: T::lit(21.0),
            n: 4,
            nu: T::lit(915e6),
            zeta_pl: T::lit(3.0),
            t: T::one(),
            d_min: T::one(),
        }
    }
}

impl<T: Scalar> SystemParams<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(
                    name,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        positive("p0", self.p0)?;
        positive("sigma2", self.sigma2)?;
        positive("l", self.l)?;
        positive("nu", self.nu)?;
        positive("d_min", self.d_min)?;
        if !(self.eta > T::zero() && self.eta < T::one()) {
            return Err(invalid(
                "eta",
                format!("must lie in (0, 1), got {}", self.eta),
            ));
        }
        if !(self.delta >= T::zero() && self.delta.is_finite()) {
            return Err(invalid(
                "delta",
                format!("must be nonnegative, got {}", self.delta),
            ));
        }
        if !(self.zeta_pl >= T::two() && self.zeta_pl.is_finite()) {
            return Err(invalid(
                "zeta_pl",
                format!("must be at least 2, got {}", self.zeta_pl),
            ));
        }
        if self.t != T::one() {
            return Err(invalid(
                "t",
                format!("slot duration is fixed at 1 s, got {}", self.t),
            ));
        }
        Ok(())
    }

    /// Free-space attenuation at the 1 m reference distance, `(c / (4 pi nu))^2`.
    pub fn alpha(&self) -> T {
        let a = T::lit(SPEED_OF_LIGHT) / (T::lit(4.0) * T::PI() * self.nu);
        a * a
    }
}

/// A point in the field (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn translate(&self, dx: T, dy: T) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Topology<T> {
    pub pbs: Point<T>,
    pub pu_tx: Point<T>,
    pub pu_rx: Point<T>,
    pub su_tx: Vec<Point<T>>,
    pub su_rx: Vec<Point<T>>,
}

impl<T: Scalar> Topology<T> {
    pub fn n(&self) -> usize {
        self.su_tx.len()
    }

    /// All nodes in a fixed order: PBS, PU^T, PU^R, then `S^T_j, S^R_j` per pair.
    pub fn nodes(&self) -> Vec<Point<T>> {
        let mut out = vec![self.pbs, self.pu_tx, self.pu_rx];
        for (tx, rx) in self.su_tx.iter().zip(&self.su_rx) {
            out.push(*tx);
            out.push(*rx);
        }
        out
    }

    pub fn translate(&self, dx: T, dy: T) -> Self {
        Self {
            pbs: self.pbs.translate(dx, dy),
            pu_tx: self.pu_tx.translate(dx, dy),
            pu_rx: self.pu_rx.translate(dx, dy),
            su_tx: self.su_tx.iter().map(|p| p.translate(dx, dy)).collect(),
            su_rx: self.su_rx.iter().map(|p| p.translate(dx, dy)).collect(),
        }
    }

    /// Checks the placement invariants: PBS at the field centre, every node
    /// inside the field and every pair of nodes at least `d_min` apart.
    pub fn validate(&self, params: &SystemParams<T>) -> Result<()> {
        if self.su_tx.len() != self.su_rx.len() {
            return Err(Error::DimensionMismatch {
                expected: self.su_tx.len(),
                got: self.su_rx.len(),
            });
        }
        if self.n() != params.n {
            return Err(Error::DimensionMismatch {
                expected: params.n,
                got: self.n(),
            });
        }
        let half = params.l / T::two();
        let tol = T::epsilon().sqrt() * params.l;
        if (self.pbs.x - half).abs() > tol || (self.pbs.y - half).abs() > tol {
            return Err(invalid("topology", "PBS must sit at the field centre"));
        }
        let nodes = self.nodes();
        for p in &nodes {
            let inside = |v: T| v >= T::zero() && v <= params.l;
            if !(inside(p.x) && inside(p.y)) {
                return Err(invalid(
                    "topology",
                    format!("node ({}, {}) lies outside the field", p.x, p.y),
                ));
            }
        }
        for (i, a) in nodes.iter().enumerate() {
            for b in &nodes[i + 1..] {
                let d = a.distance(b);
                if d < params.d_min {
                    return Err(too_close(d, params.d_min));
                }
            }
        }
        Ok(())
    }
}

fn too_close<T: Scalar>(d: T, d_min: T) -> Error {
    Error::TooClose {
        distance: d.to_f64().unwrap_or(f64::NAN),
        d_min: d_min.to_f64().unwrap_or(f64::NAN),
    }
}

/// Path-loss power gains of every link the harvesting model uses.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelGains<T> {
    /// PBS to PU^R; also the PU data link.
    pub g_bp: T,
    /// PBS to `S^R_j`.
    pub g_bs: Vec<T>,
    /// PU^T to `S^R_j`.
    pub g_ps: Vec<T>,
    /// SU to SU gains; the diagonal holds the desired data links.
    pub g_ss: Vec<Vec<T>>,
}

impl<T: Scalar> ChannelGains<T> {
    /// Builds a gain set from raw values. Desired links (`g_bp`, `g_bs`, the
    /// diagonal of `g_ss`) must be positive; cross links may be zero.
    pub fn new(g_bp: T, g_bs: Vec<T>, g_ps: Vec<T>, g_ss: Vec<Vec<T>>) -> Result<Self> {
        let n = g_bs.len();
        if g_ps.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g_ps.len(),
            });
        }
        if g_ss.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g_ss.len(),
            });
        }
        if let Some(row) = g_ss.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
        let pos = |v: &T| *v > T::zero() && v.is_finite();
        let nonneg = |v: &T| *v >= T::zero() && v.is_finite();
        if !pos(&g_bp) || !g_bs.iter().all(pos) || !(0..n).all(|j| pos(&g_ss[j][j])) {
            return Err(invalid("gains", "desired-link gains must be positive"));
        }
        if !g_ps.iter().all(nonneg) || !g_ss.iter().flatten().all(nonneg) {
            return Err(invalid("gains", "cross-link gains must be nonnegative"));
        }
        Ok(Self {
            g_bp,
            g_bs,
            g_ps,
            g_ss,
        })
    }

    pub fn n(&self) -> usize {
        self.g_bs.len()
    }
}

/// Effective SNR coefficients; entry 0 belongs to the PU, entry `j` to SU pair `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaVector<T>(Vec<T>);

impl<T: Scalar> GammaVector<T> {
    pub fn new(gamma: Vec<T>) -> Result<Self> {
        if gamma.is_empty() {
            return Err(invalid("gamma", "at least the PU coefficient is required"));
        }
        if let Some(g) = gamma.iter().find(|g| !(**g > T::zero() && g.is_finite())) {
            return Err(invalid(
                "gamma",
                format!("coefficients must be positive and finite, got {g}"),
            ));
        }
        Ok(Self(gamma))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of SU pairs.
    pub fn n_su(&self) -> usize {
        self.0.len() - 1
    }

    pub fn pu(&self) -> T {
        self.0[0]
    }

    pub fn su(&self) -> &[T] {
        &self.0[1..]
    }

    /// Sum over every data node.
    pub fn total(&self) -> T {
        self.0.iter().copied().sum()
    }

    /// Sum over the SU pairs only.
    pub fn su_total(&self) -> T {
        self.su().iter().copied().sum()
    }

    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::new(self.0.iter().map(|g| *g * c).collect())
    }
}

/// Phase durations on the unit slot: index 0 is WPT, 1 the PU, `2..` the SUs.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeAllocation<T>(Vec<T>);

impl<T: Scalar> TimeAllocation<T> {
    pub fn new(tau: Vec<T>) -> Result<Self> {
        if tau.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: tau.len(),
            });
        }
        let tol = T::lit(1e-9);
        if let Some(t) = tau
            .iter()
            .find(|t| !(**t >= T::zero() && **t <= T::one()) || !t.is_finite())
        {
            return Err(invalid(
                "tau",
                format!("durations must lie in [0, 1], got {t}"),
            ));
        }
        let total: T = tau.iter().copied().sum();
        if total > T::one() + tol {
            return Err(invalid("tau", format!("durations sum to {total} > 1")));
        }
        Ok(Self(tau))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn wpt(&self) -> T {
        self.0[0]
    }

    /// Data-phase durations, PU first.
    pub fn data(&self) -> &[T] {
        &self.0[1..]
    }

    pub fn total(&self) -> T {
        self.0.iter().copied().sum()
    }
}

/// Path-loss gain `alpha * d^-zeta` at distance `d`.
pub fn channel_gain<T: Scalar>(d: T, params: &SystemParams<T>) -> Result<T> {
    if !(d >= params.d_min) {
        return Err(too_close(d, params.d_min));
    }
    Ok(params.alpha() * d.powf(-params.zeta_pl))
}

/// Gains for every modelled link of a topology.
///
/// SU-to-SU cross gains use the distance between the two SU transmitters so
/// the matrix is exactly reciprocal.
pub fn gains_from_topology<T: Scalar>(
    topo: &Topology<T>,
    params: &SystemParams<T>,
) -> Result<ChannelGains<T>> {
    if topo.su_tx.len() != topo.su_rx.len() {
        return Err(Error::DimensionMismatch {
            expected: topo.su_tx.len(),
            got: topo.su_rx.len(),
        });
    }
    let n = topo.n();
    let gain = |a: &Point<T>, b: &Point<T>| channel_gain(a.distance(b), params);

    let g_bp = gain(&topo.pbs, &topo.pu_rx)?;
    let g_bs = topo
        .su_rx
        .iter()
        .map(|rx| gain(&topo.pbs, rx))
        .collect::<Result<Vec<_>>>()?;
    let g_ps = topo
        .su_rx
        .iter()
        .map(|rx| gain(&topo.pu_tx, rx))
        .collect::<Result<Vec<_>>>()?;
    let mut g_ss = vec![vec![T::zero(); n]; n];
    for j in 0..n {
        g_ss[j][j] = gain(&topo.su_tx[j], &topo.su_rx[j])?;
        for k in j + 1..n {
            let g = gain(&topo.su_tx[j], &topo.su_tx[k])?;
            g_ss[j][k] = g;
            g_ss[k][j] = g;
        }
    }
    ChannelGains::new(g_bp, g_bs, g_ps, g_ss)
}

/// Energy harvested from the dedicated WPT phase, `eta * P0 * g * tau0`.
pub fn harvested_energy_wpt<T: Scalar>(params: &SystemParams<T>, g: T, tau0: T) -> Result<T> {
    if !(g >= T::zero()) {
        return Err(Error::Domain {
            function: "harvested_energy_wpt",
            value: g.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !(tau0 >= T::zero()) {
        return Err(Error::Domain {
            function: "harvested_energy_wpt",
            value: tau0.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(params.eta * params.p0 * g * tau0)
}

/// Effective SNR coefficients including ambient harvesting from every other
/// node's information transfer.
pub fn effective_snr_vector<T: Scalar>(
    gains: &ChannelGains<T>,
    params: &SystemParams<T>,
) -> Result<GammaVector<T>> {
    let n = gains.n();
    let scale = params.eta * params.p0 / params.sigma2;

    let pu_harvest = gains.g_bp + (0..n).map(|j| gains.g_bs[j] * gains.g_ps[j]).sum::<T>();
    let mut gamma = Vec::with_capacity(n + 1);
    gamma.push(scale * pu_harvest * gains.g_bp);
    for j in 0..n {
        let ambient: T = (0..n)
            .filter(|&k| k != j)
            .map(|k| gains.g_bs[k] * gains.g_ss[k][j])
            .sum();
        let harvest = gains.g_bs[j] + gains.g_bp * gains.g_ps[j] + ambient;
        gamma.push(scale * harvest * gains.g_ss[j][j]);
    }
    GammaVector::new(gamma)
}

/// Benchmark coefficients: only the dedicated WPT contribution is harvested.
pub fn wpt_only_snr_vector<T: Scalar>(
    gains: &ChannelGains<T>,
    params: &SystemParams<T>,
) -> Result<GammaVector<T>> {
    let scale = params.eta * params.p0 / params.sigma2;
    let mut gamma = Vec::with_capacity(gains.n() + 1);
    gamma.push(scale * gains.g_bp * gains.g_bp);
    gamma.extend((0..gains.n()).map(|j| scale * gains.g_bs[j] * gains.g_ss[j][j]));
    GammaVector::new(gamma)
}

/// Throughput of one node, `tau_i * log2(1 + gamma_i * tau0 / tau_i)`, with
/// the continuous extension 0 at `tau_i = 0`.
#[inline]
pub fn throughput<T: Scalar>(gamma_i: T, tau0: T, tau_i: T) -> T {
    if tau_i <= T::zero() {
        return T::zero();
    }
    tau_i * (gamma_i * tau0 / tau_i).ln_1p() / T::LN_2()
}

/// Per-node rates `R_1 .. R_{N+1}`.
pub fn rates<T: Scalar>(gamma: &GammaVector<T>, tau: &TimeAllocation<T>) -> Result<Vec<T>> {
    if tau.len() != gamma.len() + 1 {
        return Err(Error::DimensionMismatch {
            expected: gamma.len() + 1,
            got: tau.len(),
        });
    }
    let tau0 = tau.wpt();
    Ok(gamma
        .as_slice()
        .iter()
        .zip(tau.data())
        .map(|(g, t)| throughput(*g, tau0, *t))
        .collect())
}

pub fn sum_throughput<T: Scalar>(gamma: &GammaVector<T>, tau: &TimeAllocation<T>) -> Result<T> {
    Ok(rates(gamma, tau)?.into_iter().sum())
}
