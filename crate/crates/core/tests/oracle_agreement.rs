use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wpcr_core::model::GammaVector;
use wpcr_core::oracle::{ascent_oracle, grid_oracle, kkt_residuals, AscentConfig};
use wpcr_core::solver::{feasibility_threshold, solve, solve_unconstrained, Branch, GslsConfig};

fn random_gamma(rng: &mut ChaCha8Rng, n: usize) -> GammaVector<f64> {
    GammaVector::new(
        (0..=n)
            .map(|_| 10f64.powf(rng.gen_range(0.0..4.0)))
            .collect(),
    )
    .unwrap()
}

#[test]
fn ascent_agrees_on_interior_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..20 {
        let n = rng.gen_range(1..=6);
        let gamma = random_gamma(&mut rng, n);
        let exact = solve(&gamma, 0.0, &GslsConfig::default()).unwrap();
        assert_eq!(exact.branch(), Branch::Interior);
        let r = exact.r_sum().unwrap();
        let cfg = AscentConfig {
            seed: trial,
            ..AscentConfig::default()
        };
        let asc = ascent_oracle(&gamma, 0.0, &cfg).unwrap();
        let best = asc.best_run().unwrap();
        assert!(
            (best.r_sum - r).abs() <= 1e-8 * r,
            "trial {trial}: {} vs {r}",
            best.r_sum
        );
        assert!(best.r_sum <= r + 1e-9 * r);
    }
}

#[test]
fn ascent_agrees_on_constrained_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..20 {
        let n = rng.gen_range(1..=6);
        let gamma = random_gamma(&mut rng, n);
        let r1a = solve_unconstrained(&gamma).unwrap().r1();
        let r_th = feasibility_threshold(gamma.pu()).unwrap();
        let delta = r1a + rng.gen_range(0.05..0.95) * (r_th - r1a);
        let exact = solve(&gamma, delta, &GslsConfig::default()).unwrap();
        assert_eq!(exact.branch(), Branch::Boundary);
        let sol = exact.solution().unwrap();
        assert!((sol.r1() - delta).abs() <= 1e-6);
        assert!(sol.mu1 >= 0.0);
        let kkt = kkt_residuals(&gamma, delta, &exact).unwrap();
        assert!(kkt.stationarity_norm <= 1e-6, "trial {trial}: {kkt:?}");

        let cfg = AscentConfig {
            seed: trial,
            ..AscentConfig::default()
        };
        let asc = ascent_oracle(&gamma, delta, &cfg).unwrap();
        let best = asc.best_run().unwrap();
        assert!(best.r1 >= delta - 1e-9);
        let gap = (best.r_sum - sol.r_sum).abs() / sol.r_sum;
        assert!(gap <= 1e-6, "trial {trial}: gap {gap}");
        assert!(
            (best.mu1 - sol.mu1).abs() <= 1e-3 * (1.0 + sol.mu1),
            "trial {trial}: mu1 {} vs {}",
            best.mu1,
            sol.mu1
        );
    }
}

#[test]
fn grid_never_beats_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let n = rng.gen_range(1..=2);
        let gamma = random_gamma(&mut rng, n);
        let r1a = solve_unconstrained(&gamma).unwrap().r1();
        let r_th = feasibility_threshold(gamma.pu()).unwrap();
        for delta in [0.0, r1a + 0.5 * (r_th - r1a)] {
            let exact = solve(&gamma, delta, &GslsConfig::default())
                .unwrap()
                .r_sum()
                .unwrap();
            if let Ok(g) = grid_oracle(&gamma, delta, 120) {
                assert!(g.r_sum <= exact + 1e-9 * exact);
            }
        }
    }
}
