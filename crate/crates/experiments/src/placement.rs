//! Node placement in the square field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wpcr_core::{Point64, SystemParams64, Topology64};

use crate::config::Placement;
use crate::error::{ExperimentError, Result};

/// Draws allowed per node before placement gives up.
pub const MAX_DRAWS: usize = 10_000;

/// PBS at the centre, then PU^T, PU^R and each `(S^T_j, S^R_j)` drawn
/// uniformly in `[0, L]^2`, redrawing any point closer than `d_min` to a
/// node already placed. Nodes are drawn in that order from a single stream,
/// so the first `k` pairs do not depend on `N`.
pub fn place_nodes(params: &SystemParams64, seed: u64) -> Result<Topology64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = params.l;
    let mut nodes = vec![Point64::new(l / 2.0, l / 2.0)];
    for node in 1..=2 + 2 * params.n {
        let mut draws = 0;
        let p = loop {
            if draws == MAX_DRAWS {
                return Err(ExperimentError::Placement {
                    node,
                    d_min: params.d_min,
                    attempts: MAX_DRAWS,
                });
            }
            draws += 1;
            let p = Point64::new(rng.gen::<f64>() * l, rng.gen::<f64>() * l);
            if nodes.iter().all(|q| q.distance(&p) >= params.d_min) {
                break p;
            }
        };
        nodes.push(p);
    }
    Ok(assemble(&nodes))
}

fn assemble(nodes: &[Point64]) -> Topology64 {
    let pairs = &nodes[3..];
    Topology64 {
        pbs: nodes[0],
        pu_tx: nodes[1],
        pu_rx: nodes[2],
        su_tx: pairs.iter().step_by(2).copied().collect(),
        su_rx: pairs.iter().skip(1).step_by(2).copied().collect(),
    }
}

/// Topology for the configured placement; `seed` is used only for random placement.
pub fn build_topology(
    params: &SystemParams64,
    placement: &Placement,
    seed: u64,
) -> Result<Topology64> {
    let topo = match placement {
        Placement::Random => place_nodes(params, seed)?,
        Placement::Explicit(points) => {
            let mut nodes = vec![Point64::new(params.l / 2.0, params.l / 2.0)];
            nodes.extend(points.iter().map(|(x, y)| Point64::new(*x, *y)));
            if nodes.len() != 3 + 2 * params.n {
                return Err(ExperimentError::Usage(format!(
                    "explicit placement has {} points, need {} for n_su = {}",
                    points.len(),
                    2 + 2 * params.n,
                    params.n
                )));
            }
            assemble(&nodes)
        }
    };
    topo.validate(params)?;
    Ok(topo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let p = SystemParams64::default();
        let a = place_nodes(&p, 1).unwrap();
        assert_eq!(a, place_nodes(&p, 1).unwrap());
        assert_ne!(a, place_nodes(&p, 2).unwrap());
        assert_eq!(a.nodes().len(), 11);
        a.validate(&p).unwrap();
    }

    #[test]
    fn pairs_are_nested_in_n() {
        let small = SystemParams64 {
            n: 2,
            ..SystemParams64::default()
        };
        let big = SystemParams64 {
            n: 5,
            ..SystemParams64::default()
        };
        let a = place_nodes(&small, 9).unwrap();
        let b = place_nodes(&big, 9).unwrap();
        assert_eq!(a.su_tx[..], b.su_tx[..2]);
        assert_eq!(a.pu_rx, b.pu_rx);
    }

    #[test]
    fn crowded_field_fails() {
        let p = SystemParams64 {
            l: 2.0,
            n: 10,
            ..SystemParams64::default()
        };
        assert!(matches!(
            place_nodes(&p, 0),
            Err(ExperimentError::Placement { .. })
        ));
    }

    #[test]
    fn explicit_layout() {
        let p = SystemParams64 {
            n: 1,
            ..SystemParams64::default()
        };
        let pts = vec![(10.5, 4.0), (12.5, 10.5), (2.0, 2.0), (5.0, 6.0)];
        let t = build_topology(&p, &Placement::Explicit(pts), 0).unwrap();
        assert_eq!(t.su_rx[0], Point64::new(5.0, 6.0));
        let clash = vec![(10.5, 4.0), (10.5, 4.2), (2.0, 2.0), (5.0, 6.0)];
        assert!(build_topology(&p, &Placement::Explicit(clash), 0).is_err());
    }
}
