use fsg_core::basis::{eval_expansion, mean_and_variance, GpcBasis};
use fsg_core::filter::{
    apply_filter, filter_coefficients, l2_filter_value, lasso_filter_value, lasso_threshold, FilterConfig,
};
use fsg_core::ipm::{dual_gradient, dual_objective, BoundedBarrier, Entropy, EulerEntropy};
use fsg_core::physics::{hll, Direction, EulerState, Physics};
use fsg_core::quadrature::QuadratureRule;
use proptest::prelude::*;

fn coeff_vec(max_order: usize) -> impl Strategy<Value = Vec<f64>> {
    (1..=max_order).prop_flat_map(|n| prop::collection::vec(-10.0..10.0f64, n + 1))
}

proptest! {
    #[test]
    fn projection_reproduces_polynomials(c in coeff_vec(12), xi in -1.0..1.0f64) {
        let n = c.len() - 1;
        let basis = GpcBasis::new(n, n + 1).unwrap();
        let projected = basis.project_scalar(|x| eval_expansion(&c, x).unwrap());
        for (a, b) in projected.iter().zip(&c) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()) * (n as f64 + 1.0));
        }
        let u = eval_expansion(&c, xi).unwrap();
        let v = basis.eval_expansion(&projected, xi).unwrap();
        prop_assert!((u - v).abs() <= 1e-11 * (1.0 + u.abs()));
    }

    #[test]
    fn variance_ignores_signs(c in coeff_vec(10), flip in 1usize..10) {
        let mut d = c.clone();
        let k = 1 + flip % (c.len() - 1);
        d[k] = -d[k];
        prop_assert_eq!(mean_and_variance(&c), mean_and_variance(&d));
        prop_assert!(mean_and_variance(&c).1 >= 0.0);
    }

    #[test]
    fn lasso_value_non_increasing_in_order(u in 0.001..10.0f64, lambda in 0.0..0.1f64) {
        let basis = GpcBasis::new(20, 21).unwrap();
        for i in 1..20 {
            prop_assert!(lasso_filter_value(i + 1, u, lambda, &basis) <= lasso_filter_value(i, u, lambda, &basis));
        }
    }

    #[test]
    fn l2_value_strictly_decreasing(lambda in 1e-9..1.0f64) {
        for i in 0..30 {
            prop_assert!(l2_filter_value(i + 1, lambda) < l2_filter_value(i, lambda));
        }
    }

    #[test]
    fn adaptive_filter_is_idempotent(c in coeff_vec(15)) {
        let n = c.len() - 1;
        let basis = GpcBasis::new(n, 2 * n + 1).unwrap();
        let config = FilterConfig::lasso_adaptive();
        let mut once = c.clone();
        filter_coefficients(&config, &basis, &mut once);
        prop_assert_eq!(once[n], 0.0);
        let mut twice = once.clone();
        filter_coefficients(&config, &basis, &mut twice);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn filtered_coefficients_shrink(c in coeff_vec(15), lambda in 0.0..0.5f64) {
        let n = c.len() - 1;
        let basis = GpcBasis::new(n, n + 1).unwrap();
        for config in [FilterConfig::l2(lambda).unwrap(), FilterConfig::lasso(lambda).unwrap(), FilterConfig::lasso_adaptive()] {
            let mut f = c.clone();
            filter_coefficients(&config, &basis, &mut f);
            prop_assert_eq!(f[0], c[0]);
            for i in 1..=n {
                prop_assert!(f[i].abs() <= c[i].abs());
                prop_assert!(f[i] == 0.0 || f[i].signum() == c[i].signum());
            }
        }
    }

    #[test]
    fn lasso_zero_band(i in 1usize..15, lambda in 1e-4..1.0f64, frac in 0.0..1.0f64, neg in any::<bool>()) {
        let basis = GpcBasis::new(15, 16).unwrap();
        let t = lasso_threshold(i, lambda, &basis);
        let u = if neg { -frac * t } else { frac * t };
        let mut c = vec![0.0; 16];
        c[i] = u;
        filter_coefficients(&FilterConfig::lasso(lambda).unwrap(), &basis, &mut c);
        prop_assert_eq!(c[i], 0.0);
    }

    #[test]
    fn apply_filter_is_thread_independent(cells in 1usize..50, seed in 0u64..1000) {
        let n = 6;
        let basis = GpcBasis::new(n, n + 1).unwrap();
        let mut data: Vec<f64> = (0..cells * (n + 1))
            .map(|k| ((k as u64 * 2654435761 + seed) % 1000) as f64 / 100.0 - 5.0)
            .collect();
        let mut expected = data.clone();
        for block in expected.chunks_mut(n + 1) {
            filter_coefficients(&FilterConfig::lasso_adaptive(), &basis, block);
        }
        apply_filter(&FilterConfig::lasso_adaptive(), &basis, &mut data);
        prop_assert_eq!(data, expected);
    }

    #[test]
    fn quadrature_exactness(n in 1usize..25, k in 0usize..48) {
        let rule = QuadratureRule::gauss_legendre(n).unwrap();
        prop_assume!(k < 2 * n);
        let exact = if k % 2 == 1 { 0.0 } else { 1.0 / (k as f64 + 1.0) };
        let got = rule.integrate(|x| x.powi(k as i32));
        prop_assert!((got - exact).abs() <= 1e-12);
    }

    #[test]
    fn dual_gradient_matches_finite_differences(c in prop::collection::vec(-1.0..1.0f64, 4), m in prop::collection::vec(-0.5..0.5f64, 4)) {
        let basis = GpcBasis::with_rule(3, QuadratureRule::gauss_lobatto(12).unwrap()).unwrap();
        let entropy = BoundedBarrier::new(1.0, 12.0).unwrap();
        let moments = vec![6.5 + m[0], m[1], m[2], m[3]];
        let g = dual_gradient(&c, &moments, &entropy, &basis);
        for i in 0..4 {
            let h = 1e-5;
            let mut cp = c.clone();
            let mut cm = c.clone();
            cp[i] += h;
            cm[i] -= h;
            let fd = (dual_objective(&cp, &moments, &entropy, &basis) - dual_objective(&cm, &moments, &entropy, &basis)) / (2.0 * h);
            prop_assert!((fd - g[i]).abs() <= 1e-5 * (1.0 + g[i].abs()));
        }
    }

    #[test]
    fn euler_entropy_round_trip(rho in 0.1..5.0f64, u in -2.0..2.0f64, v in -2.0..2.0f64, p in 0.1..5.0f64) {
        let e = EulerEntropy::new(1.4, 4).unwrap();
        let st = EulerState::from_primitive(rho, &[u, v], p, 1.4);
        let mut w = [0.0; 4];
        e.entropy_variables(&st.conserved, &mut w).unwrap();
        let mut back = [0.0; 4];
        prop_assert!(e.conserved(&w, &mut back));
        for s in 0..4 {
            prop_assert!((back[s] - st.conserved[s]).abs() <= 1e-9 * (1.0 + st.conserved[s].abs()));
        }
    }

    #[test]
    fn hll_consistency(rho in 0.1..5.0f64, u in -3.0..3.0f64, v in -3.0..3.0f64, p in 0.1..5.0f64) {
        let st = EulerState::from_primitive(rho, &[u, v], p, 1.4);
        let physics = Physics::Euler2d { gamma: 1.4 };
        for dir in [Direction::X, Direction::Y] {
            let mut f = [0.0; 4];
            let mut exact = [0.0; 4];
            hll(&st.conserved, &st.conserved, 1.4, dir, &mut f).unwrap();
            physics.flux(&st.conserved, dir, &mut exact).unwrap();
            for s in 0..4 {
                prop_assert!((f[s] - exact[s]).abs() <= 1e-12 * (1.0 + exact[s].abs()));
            }
        }
    }

    #[test]
    fn hll_rotational_consistency(
        l in (0.1..3.0f64, -2.0..2.0f64, -2.0..2.0f64, 0.1..3.0f64),
        r in (0.1..3.0f64, -2.0..2.0f64, -2.0..2.0f64, 0.1..3.0f64),
    ) {
        let ul = EulerState::from_primitive(l.0, &[l.1, l.2], l.3, 1.4).conserved;
        let ur = EulerState::from_primitive(r.0, &[r.1, r.2], r.3, 1.4).conserved;
        let swap = |u: &[f64]| [u[0], u[2], u[1], u[3]];
        let mut fx = [0.0; 4];
        let mut fy = [0.0; 4];
        hll(&swap(&ul), &swap(&ur), 1.4, Direction::X, &mut fx).unwrap();
        hll(&ul, &ur, 1.4, Direction::Y, &mut fy).unwrap();
        let fy_swapped = swap(&fy);
        for s in 0..4 {
            prop_assert!((fx[s] - fy_swapped[s]).abs() <= 1e-12 * (1.0 + fx[s].abs()));
        }
    }
}
