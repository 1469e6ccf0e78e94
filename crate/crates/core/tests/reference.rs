mod common;

use common::ExactRiemann;
use fsg_core::quadrature::QuadratureRule;
use fsg_core::reference::{collocation_reference, expectation_error, loglog_slope, variance_error};
use fsg_core::Scenario;

/// Exact Burgers solution for the ramp before the shock forms at t = 1/11.
fn ramp_exact(x: f64, t: f64, a: f64, b: f64) -> f64 {
    let (ul, ur) = (12.0, 1.0);
    let xa = a + ul * t;
    let xb = b + ur * t;
    if x < xa {
        ul
    } else if x <= xb {
        ul + (ur - ul) * (x - xa) / (xb - xa)
    } else {
        ur
    }
}

fn exact_moments(sc: &Scenario, t: f64) -> (Vec<f64>, Vec<f64>) {
    let rule = QuadratureRule::composite(200, 4).unwrap();
    let mesh = sc.mesh().unwrap();
    let mut mean = Vec::new();
    let mut var = Vec::new();
    for j in 0..mesh.cells() {
        let x = mesh.center(j)[0];
        let m = rule.integrate(|xi| ramp_exact(x, t, 0.5 + 0.2 * xi, 1.5 + 0.2 * xi));
        let m2 = rule.integrate(|xi| ramp_exact(x, t, 0.5 + 0.2 * xi, 1.5 + 0.2 * xi).powi(2));
        mean.push(m);
        var.push((m2 - m * m).max(0.0));
    }
    (mean, var)
}

fn burgers_at(nx: usize, t: f64) -> Scenario {
    let mut sc = Scenario::burgers();
    sc.domain.nx = nx;
    sc.solver.t_end = t;
    sc
}

#[test]
fn smooth_burgers_reference_matches_characteristics() {
    let t = 0.05;
    let mut mean_errs = Vec::new();
    let mut var_errs = Vec::new();
    let mut sizes = Vec::new();
    for nx in [200, 400, 800] {
        let sc = burgers_at(nx, t);
        let reference = collocation_reference(&sc, 40, 1).unwrap();
        let (mean, var) = exact_moments(&sc, t);
        assert_eq!(expectation_error(&reference.mean(0), &reference, 0).unwrap(), 0.0);
        mean_errs.push(expectation_error(&mean, &reference, 0).unwrap());
        var_errs.push(variance_error(&var, &reference, 0).unwrap());
        sizes.push(3.0 / nx as f64);
    }
    // first order away from the kinks, half order at them
    for errs in [&mean_errs, &var_errs] {
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        let order = loglog_slope(&sizes, errs).unwrap();
        assert!(order > 0.8, "observed order {order}, errors {errs:?}");
    }
    assert!(mean_errs[2] < 0.05, "{mean_errs:?}");
    assert!(var_errs[2] < 0.2, "{var_errs:?}");
}

#[test]
fn more_collocation_nodes_barely_move_the_reference() {
    let sc = burgers_at(400, 0.11);
    let a = collocation_reference(&sc, 40, 1).unwrap();
    let b = collocation_reference(&sc, 50, 1).unwrap();
    let d_mean = expectation_error(&a.mean(0), &b, 0).unwrap();
    let d_var = variance_error(&a.variance(0), &b, 0).unwrap();
    assert!(d_mean < 1e-3, "{d_mean}");
    assert!(d_var < 1e-2, "{d_var}");
}

#[test]
fn refined_reference_restricts_to_the_coarse_mesh() {
    let sc = burgers_at(100, 0.05);
    let coarse = collocation_reference(&sc, 10, 1).unwrap();
    let fine = collocation_reference(&sc, 10, 4).unwrap();
    assert_eq!(fine.cells(), coarse.cells());
    let d = expectation_error(&coarse.mean(0), &fine, 0).unwrap();
    assert!(d > 0.0 && d < 0.3, "{d}");
}

#[test]
fn exact_riemann_reproduces_sod() {
    let sod = ExactRiemann::new(1.4, (1.0, 0.0, 1.0), (0.125, 0.0, 0.1));
    assert!((sod.p_star - 0.30313).abs() < 1e-5, "{}", sod.p_star);
    assert!((sod.u_star - 0.92745).abs() < 1e-5, "{}", sod.u_star);
    assert!((sod.right_shock_speed() - 1.75216).abs() < 1e-5, "{}", sod.right_shock_speed());
    assert!((sod.right_star_density() - 0.26557).abs() < 1e-5, "{}", sod.right_star_density());
}

#[test]
fn euler_reference_shock_sits_where_the_exact_solution_puts_it() {
    let mut sc = Scenario::euler1d();
    sc.domain.nx = 400;
    let reference = collocation_reference(&sc.at_node(0.0), 2, 1).unwrap();
    let exact = ExactRiemann::new(1.4, (1.0, 0.0, 1.0), (0.3, 0.0, 0.3));
    let rho = reference.mean(0);
    let mid = 0.5 * (exact.right_star_density() + 0.3);
    let j = (0..rho.len()).rev().find(|&j| rho[j] > mid).unwrap();
    let x = (j as f64 + 0.5) / 400.0;
    let expected = 0.5 + exact.right_shock_speed() * 0.14;
    assert!((x - expected).abs() < 0.01, "shock at {x}, exact {expected}");
}
