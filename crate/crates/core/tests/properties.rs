use proptest::prelude::*;
use wpcr_core::model::{sum_throughput, throughput, GammaVector, TimeAllocation};
use wpcr_core::oracle::{
    constraint_hessian, hessian_r_i, scaled_leading_minors, sum_throughput_gradient,
};
use wpcr_core::solver::{
    f_of_gamma, feasibility_threshold, phi, solve, solve_unconstrained, GslsConfig,
};

fn gamma_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..4.0, 2..7)
        .prop_map(|v| v.into_iter().map(|e| 10f64.powf(e)).collect())
}

fn simplex_point(weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    weights.iter().map(|w| w / total).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sum_rate_is_concave_along_segments(g in gamma_strategy(), a in prop::collection::vec(0.01f64..1.0, 7), b in prop::collection::vec(0.01f64..1.0, 7)) {
        let gamma = GammaVector::new(g.clone()).unwrap();
        let x = simplex_point(&a[..=g.len()]);
        let y = simplex_point(&b[..=g.len()]);
        let mid: Vec<f64> = x.iter().zip(&y).map(|(p, q)| 0.5 * (p + q)).collect();
        let r = |v: Vec<f64>| sum_throughput(&gamma, &TimeAllocation::new(v).unwrap()).unwrap();
        let (rx, ry, rm) = (r(x), r(y), r(mid));
        prop_assert!(rm >= 0.5 * (rx + ry) - 1e-12 * (rx + ry));
    }

    #[test]
    fn optimum_grows_with_transmit_power(g in gamma_strategy(), c in 1.01f64..10.0) {
        let gamma = GammaVector::new(g).unwrap();
        let base = solve_unconstrained(&gamma).unwrap().r_sum;
        let boosted = solve_unconstrained(&gamma.scaled(c).unwrap()).unwrap().r_sum;
        prop_assert!(boosted > base);
    }

    #[test]
    fn lambert_identity(big_gamma in 1e-3f64..1e8) {
        let f = f_of_gamma(big_gamma).unwrap();
        let lhs = phi(f - 1.0).unwrap() * f;
        prop_assert!((lhs - big_gamma).abs() <= 1e-10 * big_gamma.max(1.0));
    }

    #[test]
    fn gradient_matches_central_differences(g in gamma_strategy(), w in prop::collection::vec(0.05f64..1.0, 7)) {
        let gamma = GammaVector::new(g.clone()).unwrap();
        let x = simplex_point(&w[..=g.len()]);
        let grad = sum_throughput_gradient(&gamma, &TimeAllocation::new(x.clone()).unwrap()).unwrap();
        let h = 1e-6;
        let f = |v: &[f64]| -> f64 { g.iter().enumerate().map(|(i, gi)| throughput(*gi, v[0], v[i + 1])).sum() };
        for k in 0..x.len() {
            let mut p = x.clone();
            let mut m = x.clone();
            p[k] += h;
            m[k] -= h;
            let fd = (f(&p) - f(&m)) / (2.0 * h);
            prop_assert!((fd - grad[k]).abs() <= 1e-6 * grad[k].abs().max(1.0), "k={k}: {fd} vs {}", grad[k]);
        }
    }

    #[test]
    fn rate_hessians_are_negative_semidefinite(g in gamma_strategy(), w in prop::collection::vec(0.05f64..1.0, 7)) {
        let gamma = GammaVector::new(g.clone()).unwrap();
        let tau = TimeAllocation::new(simplex_point(&w[..=g.len()])).unwrap();
        for i in 1..=g.len() {
            let h = hessian_r_i(&gamma, &tau, i).unwrap();
            prop_assert!(h.d_tau0_tau0 <= 0.0 && h.d_taui_taui <= 0.0);
            let scale = h.d_tau0_tau0.abs().max(h.d_taui_taui.abs()).powi(2);
            prop_assert!(h.det().abs() <= 1e-12 * scale);
        }
        let t = tau.as_slice();
        let c = constraint_hessian(g[0], t[0], t[1]);
        prop_assert!(c[0][0] > 0.0 && c[1][1] > 0.0);
        let m: Vec<Vec<f64>> = c.iter().map(|r| r.to_vec()).collect();
        prop_assert!(scaled_leading_minors(&m)[1].abs() <= 1e-12);
    }

    #[test]
    fn solver_dominates_random_feasible_points(g in gamma_strategy(), frac in 0.0f64..1.0, w in prop::collection::vec(0.01f64..1.0, 7)) {
        let gamma = GammaVector::new(g.clone()).unwrap();
        let delta = frac * feasibility_threshold(gamma.pu()).unwrap();
        let best = solve(&gamma, delta, &GslsConfig::default()).unwrap().r_sum().unwrap();
        let tau = TimeAllocation::new(simplex_point(&w[..=g.len()])).unwrap();
        if throughput(g[0], tau.wpt(), tau.data()[0]) >= delta {
            prop_assert!(sum_throughput(&gamma, &tau).unwrap() <= best + 1e-9 * best);
        }
    }

    #[test]
    fn relabelling_sus_permutes_the_allocation(g in gamma_strategy()) {
        prop_assume!(g.len() >= 3);
        let gamma = GammaVector::new(g.clone()).unwrap();
        let mut swapped = g.clone();
        swapped.swap(1, 2);
        let a = solve_unconstrained(&gamma).unwrap();
        let b = solve_unconstrained(&GammaVector::new(swapped).unwrap()).unwrap();
        let (ta, tb) = (a.tau.as_slice(), b.tau.as_slice());
        prop_assert!((ta[2] - tb[3]).abs() <= 1e-14 && (ta[3] - tb[2]).abs() <= 1e-14);
        prop_assert!((a.r_sum - b.r_sum).abs() <= 1e-12 * a.r_sum);
    }
}
