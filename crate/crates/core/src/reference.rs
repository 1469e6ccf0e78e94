//! Collocation reference solutions and error norms.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::MomentField;
use crate::filter::FilterConfig;
use crate::quadrature::QuadratureRule;
use crate::scenario::{ClosureKind, Scenario};
use crate::solver::Solver;

/// Deterministic solutions at collocation nodes, restricted to a coarse mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceField {
    states: usize,
    cells: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `[(j * Q + q) * p + s]`.
    samples: Vec<f64>,
    /// `[j * p + s]`.
    mean: Vec<f64>,
    variance: Vec<f64>,
    active: Vec<bool>,
    volume: f64,
}

impl ReferenceField {
    /// Assemble from node samples on the coarse mesh of `scenario`.
    pub fn from_samples(scenario: &Scenario, rule: &QuadratureRule, samples: Vec<f64>) -> Result<Self> {
        let mesh = scenario.mesh()?;
        let p = scenario.physics.states();
        let nq = rule.len();
        let cells = mesh.cells();
        if samples.len() != cells * nq * p {
            return Err(Error::Config(format!(
                "expected {} reference samples, got {}",
                cells * nq * p,
                samples.len()
            )));
        }
        let mut mean = vec![0.0; cells * p];
        let mut variance = vec![0.0; cells * p];
        for j in 0..cells {
            for s in 0..p {
                let u = |q: usize| samples[(j * nq + q) * p + s];
                let base = u(0);
                let mut m = 0.0;
                for q in 1..nq {
                    m += rule.weights[q] * (u(q) - base);
                }
                let m = base + m;
                let v: f64 = (0..nq).map(|q| rule.weights[q] * (u(q) - m).powi(2)).sum();
                mean[j * p + s] = m;
                variance[j * p + s] = v;
            }
        }
        Ok(Self {
            states: p,
            cells,
            nodes: rule.nodes.clone(),
            weights: rule.weights.clone(),
            samples,
            mean,
            variance,
            active: mesh.active_mask().to_vec(),
            volume: mesh.volume(),
        })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sample(&self, s: usize, q: usize, j: usize) -> f64 {
        self.samples[(j * self.nodes.len() + q) * self.states + s]
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn mean(&self, s: usize) -> Vec<f64> {
        (0..self.cells).map(|j| self.mean[j * self.states + s]).collect()
    }

    pub fn variance(&self, s: usize) -> Vec<f64> {
        (0..self.cells).map(|j| self.variance[j * self.states + s]).collect()
    }

    pub fn is_active(&self, j: usize) -> bool {
        self.active[j]
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }
}

/// Run the deterministic solver at each node of a `nodes`-point Gauss-Lobatto
/// rule on a mesh refined by `factor`, and average back to the mesh of
/// `scenario`.
pub fn collocation_reference(scenario: &Scenario, nodes: usize, factor: usize) -> Result<ReferenceField> {
    if nodes < 2 {
        return Err(Error::Config(format!("collocation needs at least 2 nodes, got {nodes}")));
    }
    if factor == 0 {
        return Err(Error::Config("refinement factor must be positive".into()));
    }
    let rule = QuadratureRule::gauss_lobatto(nodes)?;
    let coarse = scenario.mesh()?;
    let fine_scenario = scenario.refined(factor);
    let fine = fine_scenario.mesh()?;
    let p = scenario.physics.states();

    let solves: Vec<Result<MomentField>> = rule
        .nodes
        .par_iter()
        .enumerate()
        .map(|(q, &xi)| {
            Solver::new(&fine_scenario.at_node(xi))
                .and_then(|s| s.run())
                .map(|sol| sol.field)
                .map_err(|e| Error::Collocation { node: q, xi, source: Box::new(e) })
        })
        .collect();

    let nq = rule.len();
    let cells = coarse.cells();
    let mut samples = vec![0.0; cells * nq * p];
    let per_axis_y = if coarse.dim() == 2 { factor } else { 1 };
    for (q, solve) in solves.into_iter().enumerate() {
        let field = solve?;
        for j in 0..cells {
            if !coarse.is_active(j) {
                continue;
            }
            let (cx, cy) = (j % coarse.nx(), j / coarse.nx());
            for s in 0..p {
                let mut sum = 0.0;
                let mut count = 0usize;
                for fy in 0..per_axis_y {
                    for fx in 0..factor {
                        let fj = fine.index(cx * factor + fx, cy * per_axis_y + fy);
                        if fine.is_active(fj) {
                            sum += field.get(s, 0, fj);
                            count += 1;
                        }
                    }
                }
                if count > 0 {
                    samples[(j * nq + q) * p + s] = sum / count as f64;
                }
            }
        }
    }
    ReferenceField::from_samples(scenario, &rule, samples)
}

fn check_cells(cells: usize, reference: &ReferenceField) -> Result<()> {
    if cells != reference.cells() {
        return Err(Error::Config(format!(
            "mesh mismatch: {cells} cells against a reference with {}",
            reference.cells()
        )));
    }
    Ok(())
}

/// sqrt(Σ_j Δx Σ_q w_q (u_N(ξ_q) - u(ξ_q))²) for state `s`, given the
/// solution sampled at the reference nodes (layout of [`Solver::sample`]).
pub fn l2_solution_error_samples(samples: &[f64], reference: &ReferenceField, s: usize) -> Result<f64> {
    let nq = reference.nodes().len();
    let p = reference.states();
    if samples.len() != reference.cells() * nq * p {
        return Err(Error::Config("sample layout does not match the reference".into()));
    }
    let mut total = 0.0;
    for j in 0..reference.cells() {
        if !reference.is_active(j) {
            continue;
        }
        for q in 0..nq {
            let d = samples[(j * nq + q) * p + s] - reference.sample(s, q, j);
            total += reference.weights()[q] * d * d;
        }
    }
    Ok((reference.volume() * total).sqrt())
}

/// L² solution error of a polynomial (SG) expansion against the reference.
pub fn l2_solution_error(field: &MomentField, reference: &ReferenceField, s: usize) -> Result<f64> {
    check_cells(field.cells(), reference)?;
    let size = field.order() + 1;
    let mut phi = vec![0.0; size];
    let mut total = 0.0;
    for q in 0..reference.nodes().len() {
        crate::basis::eval_basis(reference.nodes()[q], &mut phi);
        let w = reference.weights()[q];
        for j in 0..field.cells() {
            if !reference.is_active(j) {
                continue;
            }
            let c = field.coeffs(s, j);
            let u: f64 = c.iter().zip(&phi).map(|(a, b)| a * b).sum();
            let d = u - reference.sample(s, q, j);
            total += w * d * d;
        }
    }
    Ok((reference.volume() * total).sqrt())
}

fn spatial_l2(a: &[f64], b: &[f64], reference: &ReferenceField) -> Result<f64> {
    check_cells(a.len(), reference)?;
    let sum: f64 = (0..a.len())
        .filter(|&j| reference.is_active(j))
        .map(|j| (a[j] - b[j]).powi(2))
        .sum();
    Ok((reference.volume() * sum).sqrt())
}

/// ‖E[u_N] - E[u]‖ in L² over space.
pub fn expectation_error(mean: &[f64], reference: &ReferenceField, s: usize) -> Result<f64> {
    spatial_l2(mean, &reference.mean(s), reference)
}

/// ‖Var[u_N] - Var[u]‖ in L² over space.
pub fn variance_error(variance: &[f64], reference: &ReferenceField, s: usize) -> Result<f64> {
    spatial_l2(variance, &reference.variance(s), reference)
}

/// Least-squares slope of log(y) against log(x).
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Config("slope fit needs at least two matching points".into()));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::Domain("slope fit needs positive data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("slope fit needs distinct abscissae".into()));
    }
    Ok(sxy / sxx)
}

/// One method to include in a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Method {
    pub closure: ClosureKind,
    pub filter: FilterConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub order: usize,
    pub closure: ClosureKind,
    pub filter: FilterConfig,
    pub error_solution: f64,
    pub error_mean: f64,
    pub error_variance: f64,
    pub walltime_s: f64,
}

/// Run every method at every order and measure errors of state `s` against
/// `reference`.
pub fn convergence_table(
    scenario: &Scenario,
    orders: &[usize],
    methods: &[Method],
    reference: &ReferenceField,
    s: usize,
) -> Result<Vec<ConvergenceRow>> {
    if orders.is_empty() || methods.is_empty() {
        return Err(Error::Config("a convergence study needs at least one order and one method".into()));
    }
    let mut rows = Vec::new();
    for m in methods {
        for &n in orders {
            let mut sc = scenario.clone();
            sc.solver.order = n;
            sc.solver.closure = m.closure;
            sc.solver.filter = m.filter;
            let solver = Solver::new(&sc)?;
            let sol = solver.run()?;
            let samples = solver.sample(&sol.field, reference.nodes())?;
            let (mean, variance) = sampled_moments(&samples, reference, s);
            rows.push(ConvergenceRow {
                order: n,
                closure: m.closure,
                filter: m.filter,
                error_solution: l2_solution_error_samples(&samples, reference, s)?,
                error_mean: expectation_error(&mean, reference, s)?,
                error_variance: variance_error(&variance, reference, s)?,
                walltime_s: sol.report.wall_time_s,
            });
        }
    }
    Ok(rows)
}

/// Mean and variance of state `s` of the closed solution.
///
/// For SG these equal û_0 and Σ_{i≥1} û_i²; for IPM they are integrated with
/// the reference rule from samples.
fn sampled_moments(samples: &[f64], reference: &ReferenceField, s: usize) -> (Vec<f64>, Vec<f64>) {
    let nq = reference.nodes().len();
    let p = reference.states();
    let w = reference.weights();
    let mut mean = vec![0.0; reference.cells()];
    let mut variance = vec![0.0; reference.cells()];
    for j in 0..reference.cells() {
        let u = |q: usize| samples[(j * nq + q) * p + s];
        let m: f64 = (0..nq).map(|q| w[q] * u(q)).sum();
        mean[j] = m;
        variance[j] = (0..nq).map(|q| w[q] * (u(q) - m).powi(2)).sum();
    }
    (mean, variance)
}
