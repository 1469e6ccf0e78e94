use fsg_core::basis::GpcBasis;
use fsg_core::error::Error;
use fsg_core::filter::FilterConfig;
use fsg_core::physics::{hll, lax_friedrichs_scalar, burgers_flux, Direction, EulerState, Physics};
use fsg_core::scenario::{FluxPath, InitialCondition, Scenario};
use fsg_core::solver::burgers_tensor_flux;
use fsg_core::{ClosureKind, Solver};

fn small_burgers(nx: usize, order: usize) -> Scenario {
    let mut sc = Scenario::burgers();
    sc.domain.nx = nx;
    sc.solver.order = order;
    sc.solver.filter = FilterConfig::none();
    sc
}

#[test]
fn zero_end_time_returns_projected_ic() {
    let mut sc = small_burgers(120, 6);
    sc.solver.t_end = 0.0;
    let solver = Solver::new(&sc).unwrap();
    let sol = solver.run().unwrap();
    assert_eq!(sol.report.steps, 0);
    assert_eq!(sol.field, solver.initial_field().unwrap());
}

#[test]
fn initial_moments() {
    let sc = small_burgers(300, 5);
    let solver = Solver::new(&sc).unwrap();
    let field = solver.initial_field().unwrap();
    // x < x0 - σ
    assert_eq!(field.coeffs(0, 10), &[12.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    // x > x1 + σ
    assert_eq!(field.coeffs(0, 299), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    // straddling the random ramp start
    let j = solver.mesh().locate(0.5, 0.0).unwrap();
    assert!(field.get(0, 1, j).abs() > 1e-3);

    let mut e = Scenario::euler1d();
    e.domain.nx = 100;
    e.solver.order = 4;
    let solver = Solver::new(&e).unwrap();
    let field = solver.initial_field().unwrap();
    let right = EulerState::from_primitive(0.3, &[0.0], 0.3, 1.4).conserved;
    for s in 0..3 {
        assert_eq!(field.get(s, 0, 95), right[s]);
        assert!((1..=4).all(|i| field.get(s, i, 95) == 0.0));
    }
}

#[test]
fn tensor_and_quadrature_paths_agree() {
    let basis = GpcBasis::new(8, 17).unwrap();
    let ul = basis.project_scalar(|x| 6.0 + 5.0 * (3.0 * x).tanh());
    let ur = basis.project_scalar(|x| 3.0 - 2.0 * x * x);
    let alpha = 17.0;
    let mut tensor = vec![0.0; 9];
    burgers_tensor_flux(&basis, &ul, &ur, alpha, &mut tensor);
    let mut nl = vec![0.0; 17];
    let mut nr = vec![0.0; 17];
    basis.eval_nodal(&ul, 1, &mut nl);
    basis.eval_nodal(&ur, 1, &mut nr);
    let fq: Vec<f64> = nl.iter().zip(&nr).map(|(&a, &b)| lax_friedrichs_scalar(a, b, burgers_flux, alpha)).collect();
    let mut quad = vec![0.0; 9];
    basis.project_nodal(&fq, 1, &mut quad);
    for (a, b) in tensor.iter().zip(&quad) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    let mut zero = vec![1.0; 9];
    burgers_tensor_flux(&basis, &[0.0; 9], &[0.0; 9], alpha, &mut zero);
    assert!(zero.iter().all(|&v| v == 0.0));
}

#[test]
fn tensor_path_run_matches_quadrature_run() {
    let mut sc = small_burgers(200, 6);
    sc.solver.t_end = 0.05;
    let a = Solver::new(&sc).unwrap().run().unwrap().field;
    sc.solver.flux_path = FluxPath::Tensor;
    let b = Solver::new(&sc).unwrap().run().unwrap().field;
    for (x, y) in a.data().iter().zip(b.data()) {
        assert!((x - y).abs() < 1e-10);
    }
    let mut bad = Scenario::euler1d();
    bad.solver.flux_path = FluxPath::Tensor;
    assert!(matches!(Solver::new(&bad), Err(Error::Config(_))));
}

#[test]
fn constant_state_is_steady() {
    let mut sc = small_burgers(50, 4);
    sc.ic = InitialCondition::BurgersRamp { x0: 0.5, x1: 1.5, u_left: 3.0, u_right: 3.0, sigma: 0.2 };
    sc.solver.t_end = 0.2;
    let sol = Solver::new(&sc).unwrap().run().unwrap();
    for j in 0..50 {
        assert_eq!(sol.field.coeffs(0, j), &[3.0, 0.0, 0.0, 0.0, 0.0]);
    }
}

#[test]
fn disabled_filter_reproduces_plain_sg() {
    let mut sc = small_burgers(150, 7);
    sc.solver.t_end = 0.04;
    let plain = Solver::new(&sc).unwrap().run().unwrap().field;
    sc.solver.filter = FilterConfig::l2(0.0).unwrap();
    let zero_l2 = Solver::new(&sc).unwrap().run().unwrap().field;
    sc.solver.filter = FilterConfig::lasso(0.0).unwrap();
    let zero_lasso = Solver::new(&sc).unwrap().run().unwrap().field;
    assert_eq!(plain, zero_l2);
    assert_eq!(plain, zero_lasso);
}

#[test]
fn adaptive_lasso_drops_top_order_and_keeps_mass() {
    let mut sc = small_burgers(400, 15);
    sc.solver.filter = FilterConfig::lasso_adaptive();
    sc.solver.t_end = 0.11;
    let solver = Solver::new(&sc).unwrap();
    let mut ic = solver.initial_field().unwrap();
    fsg_core::filter::apply_filter(&sc.solver.filter, solver.basis(), ic.data_mut());
    assert!((0..ic.cells()).all(|j| ic.get(0, 15, j) == 0.0));

    let sol = solver.run().unwrap();
    assert!(sol.field.is_finite());
    assert_eq!(sol.report.final_time, 0.11);
    assert!((0..sol.field.cells()).all(|j| sol.field.get(0, 15, j) == 0.0));
    let drift = sol.report.conservation_drift();
    assert!(drift[0].abs() < 1e-12, "{drift:?}");
}

#[test]
fn final_step_lands_on_end_time() {
    let mut sc = small_burgers(100, 3);
    sc.solver.t_end = 0.0123;
    let sol = Solver::new(&sc).unwrap().run().unwrap();
    assert_eq!(sol.report.final_time, 0.0123);
    assert!(sol.report.min_dt <= sol.report.max_dt);
}

#[test]
fn snapshots_arrive_at_the_requested_cadence() {
    let mut sc = small_burgers(100, 3);
    sc.solver.t_end = 0.05;
    let mut seen = Vec::new();
    let sol = Solver::new(&sc).unwrap().run_with(3, |step, t, _| seen.push((step, t))).unwrap();
    assert_eq!(seen.len(), sol.report.steps / 3);
    assert!(seen.iter().all(|(s, _)| s % 3 == 0));
    assert!(seen.windows(2).all(|w| w[0].1 < w[1].1));
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let mut sc = Scenario::obstacles2d();
    sc.domain.nx = 40;
    sc.domain.ny = 40;
    sc.solver.order = 3;
    sc.solver.t_end = 0.02;
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| Solver::new(&sc).unwrap().run().unwrap().field)
    };
    let one = run(1);
    let four = run(4);
    assert!(one.data().iter().zip(four.data()).all(|(a, b)| a.to_bits() == b.to_bits()));
}

#[test]
fn closed_box_conserves_mass_and_energy_exactly_up_to_rounding() {
    let mut sc = Scenario::obstacles2d();
    sc.domain.nx = 50;
    sc.domain.ny = 50;
    sc.domain.boundaries = fsg_core::mesh::Boundaries::all(fsg_core::mesh::BoundaryKind::SlipWall);
    sc.solver.order = 2;
    sc.solver.t_end = 0.1;
    let sol = Solver::new(&sc).unwrap().run().unwrap();
    let r = &sol.report;
    for s in [0, 3] {
        assert!(r.outflow[s].abs() < 1e-14, "wall flux of state {s}: {}", r.outflow[s]);
        assert!(((r.final_totals[s] - r.initial_totals[s]) / r.initial_totals[s]).abs() < 1e-12);
    }
}

#[test]
fn slip_wall_has_no_normal_mass_flux() {
    // tangential flow along a wall with normal x
    let physics = Physics::Euler2d { gamma: 1.4 };
    let inside = EulerState::from_primitive(0.7, &[0.0, 1.3], 0.4, 1.4).conserved;
    let mut ghost = inside.clone();
    physics.reflect(&mut ghost, Direction::X);
    let mut f = [0.0; 4];
    hll(&inside, &ghost, 1.4, Direction::X, &mut f).unwrap();
    assert_eq!(f[0], 0.0);
    assert_eq!(f[2], 0.0);
    assert_eq!(f[3], 0.0);
    assert!((f[1] - 0.4).abs() < 1e-12, "{}", f[1]);
}

#[test]
fn hll_keeps_shock_tube_positive() {
    let mut sc = Scenario::euler1d().at_node(0.0);
    sc.domain.nx = 200;
    sc.solver.cfl = 0.9;
    let sol = Solver::new(&sc).unwrap().run().unwrap();
    for j in 0..200 {
        let u: Vec<f64> = (0..3).map(|s| sol.field.get(s, 0, j)).collect();
        assert!(u[0] > 0.0);
        assert!(fsg_core::physics::pressure(&u, 1.4).unwrap() > 0.0);
    }
}

#[test]
fn ipm_and_sg_share_the_zeroth_moment_update() {
    // identical SG-reconstructed data: with u_N(ξ) already in the image of the
    // IPM map, one step of both must move û_0 identically up to the dual tolerance
    let mut sc = small_burgers(80, 0);
    sc.solver.t_end = 0.002;
    let sg = Solver::new(&sc).unwrap().run().unwrap();
    sc.solver.closure = ClosureKind::Ipm;
    let ipm = Solver::new(&sc).unwrap().run().unwrap();
    for j in 0..80 {
        assert!((sg.field.get(0, 0, j) - ipm.field.get(0, 0, j)).abs() < 1e-6);
    }
}

#[test]
fn ipm_burgers_respects_maximum_principle() {
    let mut sc = small_burgers(150, 5);
    sc.solver.closure = ClosureKind::Ipm;
    sc.solver.t_end = 0.11;
    let solver = Solver::new(&sc).unwrap();
    let sol = solver.run().unwrap();
    assert!(sol.report.dual_iterations > 0);
    let nodes: Vec<f64> = solver.basis().nodes().to_vec();
    let values = solver.sample(&sol.field, &nodes).unwrap();
    let margin = 1e-3 * 11.0;
    assert!(values.iter().all(|&u| u > 1.0 - margin && u < 12.0 + margin));
    // the SG solution overshoots the same bounds
    sc.solver.closure = ClosureKind::Sg;
    let solver = Solver::new(&sc).unwrap();
    let sg = solver.run().unwrap();
    let values = solver.sample(&sg.field, &nodes).unwrap();
    assert!(values.iter().any(|&u| !(1.0..=12.0).contains(&u)));
}

#[test]
fn invalid_scenarios_are_rejected() {
    let mut sc = Scenario::burgers();
    sc.solver.cfl = 0.0;
    assert!(matches!(Solver::new(&sc), Err(Error::Config(_))));
    let mut sc = Scenario::burgers();
    sc.physics = Physics::Euler1d { gamma: 1.4 };
    assert!(matches!(Solver::new(&sc), Err(Error::Config(_))));
}

#[test]
fn unfiltered_sg_reports_hyperbolicity_loss() {
    // near-vacuum right state with a wide random interface
    let mut sc = Scenario::euler1d();
    sc.domain.nx = 200;
    sc.solver.order = 8;
    sc.solver.filter = FilterConfig::none();
    sc.ic = InitialCondition::ShockTube {
        x0: 0.5,
        sigma: 0.3,
        rho_left: 1.0,
        p_left: 1.0,
        rho_right: 1e-3,
        p_right: 1e-3,
        shape: fsg_core::scenario::InterfaceShape::Planar,
    };
    let err = Solver::new(&sc).unwrap().run().unwrap_err();
    assert!(matches!(err, Error::HyperbolicityLoss { .. }), "{err}");
}
