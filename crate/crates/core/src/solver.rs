//! First-order finite-volume solver for the moment system with forward Euler
//! time stepping.
//!
//! Each step filters the moments, evaluates the closure at the quadrature
//! nodes, lifts the pointwise numerical flux to moment space by quadrature and
//! updates all active cells.

use std::time::Instant;

use rayon::prelude::*;

use crate::basis::{eval_basis, GpcBasis};
use crate::error::{Error, Result};
use crate::field::MomentField;
use crate::filter::apply_filter;
use crate::ipm::{nodal_solution, reconstruct_moments, solve_dual, BoundedBarrier, DualSolverConfig, DualState, Entropy, EulerEntropy};
use crate::mesh::{BoundaryKind, Mesh, Side};
use crate::physics::{Direction, Physics};
use crate::quadrature::QuadratureRule;
use crate::scenario::{ClosureKind, FluxPath, Scenario};

/// What sits on one side of a face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Neighbor {
    Cell(usize),
    /// Precomputed Dirichlet ghost state.
    Ghost(usize),
    /// Mirror image of the cell on the other side (slip wall).
    Mirror,
}

#[derive(Debug, Clone, Copy)]
struct Face {
    dir: Direction,
    left: Neighbor,
    right: Neighbor,
}

impl Face {
    fn is_used(&self) -> bool {
        matches!(self.left, Neighbor::Cell(_)) || matches!(self.right, Neighbor::Cell(_))
    }

    /// +1 if the face is on the right/top of its only active cell, -1 on the
    /// left/bottom, 0 for interior faces.
    fn boundary_sign(&self) -> f64 {
        match (self.left, self.right) {
            (Neighbor::Cell(_), Neighbor::Cell(_)) => 0.0,
            (Neighbor::Cell(_), _) => 1.0,
            (_, Neighbor::Cell(_)) => -1.0,
            _ => 0.0,
        }
    }
}

enum Closure {
    Sg,
    Ipm {
        entropy: Box<dyn Entropy>,
        config: DualSolverConfig,
    },
}

/// Summary of a completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub steps: usize,
    pub final_time: f64,
    pub wall_time_s: f64,
    pub min_dt: f64,
    pub max_dt: f64,
    /// Σ over active cells of û_s0 times the cell volume, at t = 0.
    pub initial_totals: Vec<f64>,
    pub final_totals: Vec<f64>,
    /// Time-integrated flux of û_s0 leaving the domain through boundary and wall faces.
    pub outflow: Vec<f64>,
    /// Newton iterations summed over all dual solves (IPM only).
    pub dual_iterations: usize,
}

impl RunReport {
    /// |final + outflow - initial| / max(|initial|, 1e-300) per state.
    pub fn conservation_drift(&self) -> Vec<f64> {
        (0..self.initial_totals.len())
            .map(|s| {
                let balance = self.final_totals[s] + self.outflow[s] - self.initial_totals[s];
                balance.abs() / self.initial_totals[s].abs().max(1e-300)
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub field: MomentField,
    pub report: RunReport,
}

pub struct Solver {
    scenario: Scenario,
    mesh: Mesh,
    basis: GpcBasis,
    closure: Closure,
    faces: Vec<Face>,
    x_faces: usize,
    /// Ghost nodal values, `[g][q * p + s]`.
    ghosts: Vec<f64>,
    /// Ghost moments (SG) used for the tensor path, `[g][s * (N+1) + i]`.
    ghost_moments: Vec<f64>,
}

impl Solver {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        scenario.validate()?;
        let mesh = scenario.mesh()?;
        let cfg = &scenario.solver;
        let n = cfg.order;
        let p = scenario.physics.states();

        let (basis, closure) = match cfg.closure {
            ClosureKind::Sg => {
                let rule = QuadratureRule::new(cfg.quadrature.kind, cfg.flux_points())?;
                (GpcBasis::with_rule(n, rule)?, Closure::Sg)
            }
            ClosureKind::Ipm => {
                let rule = QuadratureRule::new(cfg.ipm.quadrature.kind, cfg.ipm_points())?;
                let basis = GpcBasis::with_rule(n, rule)?;
                let entropy: Box<dyn Entropy> = match scenario.physics {
                    Physics::Burgers => {
                        let (lo, hi) = scenario
                            .ic
                            .scalar_bounds()
                            .ok_or_else(|| Error::Config("IPM needs scalar bounds".into()))?;
                        let margin = cfg.ipm.bound_margin * (hi - lo).max(f64::MIN_POSITIVE);
                        Box::new(BoundedBarrier::new(lo - margin, hi + margin)?)
                    }
                    Physics::Euler1d { gamma } | Physics::Euler2d { gamma } => Box::new(EulerEntropy::new(gamma, p)?),
                };
                let config = DualSolverConfig {
                    tolerance: cfg.ipm.tolerance,
                    max_iterations: cfg.ipm.max_iterations,
                    ..DualSolverConfig::default()
                };
                (basis, Closure::Ipm { entropy, config })
            }
        };
        if cfg.flux_path == FluxPath::Tensor && (scenario.physics != Physics::Burgers || cfg.closure != ClosureKind::Sg) {
            return Err(Error::Config("the tensor flux path is only available for SG Burgers".into()));
        }

        let mut solver = Self {
            scenario: scenario.clone(),
            mesh,
            basis,
            closure,
            faces: Vec::new(),
            x_faces: 0,
            ghosts: Vec::new(),
            ghost_moments: Vec::new(),
        };
        solver.build_faces()?;
        Ok(solver)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    /// Basis whose rule is used for flux integrals (and the dual problem for IPM).
    pub fn basis(&self) -> &GpcBasis {
        &self.basis
    }

    fn states(&self) -> usize {
        self.scenario.physics.states()
    }

    fn projection_basis(&self) -> Result<GpcBasis> {
        let n = self.scenario.solver.order;
        let rule = QuadratureRule::composite(self.scenario.solver.projection_panels, n + 1)?;
        GpcBasis::with_rule(n, rule)
    }

    /// Moments of the initial condition evaluated at `x`.
    fn project_point(&self, proj: &GpcBasis, x: [f64; 2]) -> Vec<f64> {
        let ic = self.scenario.ic;
        let physics = self.scenario.physics;
        proj.project(self.states(), |xi, out| ic.eval(&physics, x, xi, out))
    }

    fn build_faces(&mut self) -> Result<()> {
        let mesh = &self.mesh;
        let (nx, ny) = (mesh.nx(), mesh.ny());
        let (x0, x1) = mesh.x_range();
        let (y0, y1) = mesh.y_range();
        let bounds = *mesh.boundaries();
        let mut ghost_centers: Vec<[f64; 2]> = Vec::new();
        let mut outside = |side: Side, center: [f64; 2]| match bounds.get(side) {
            BoundaryKind::Dirichlet => {
                ghost_centers.push(center);
                Neighbor::Ghost(ghost_centers.len() - 1)
            }
            BoundaryKind::SlipWall => Neighbor::Mirror,
        };
        let cell = |j: usize| {
            if mesh.is_active(j) {
                Neighbor::Cell(j)
            } else {
                Neighbor::Mirror
            }
        };

        let mut faces = Vec::with_capacity(ny * (nx + 1) + nx * (ny + 1));
        for iy in 0..ny {
            let yc = mesh.center(mesh.index(0, iy))[1];
            for ix in 0..=nx {
                let left = if ix == 0 {
                    None
                } else {
                    Some(cell(mesh.index(ix - 1, iy)))
                };
                let right = if ix == nx { None } else { Some(cell(mesh.index(ix, iy))) };
                let used = matches!(left, Some(Neighbor::Cell(_))) || matches!(right, Some(Neighbor::Cell(_)));
                let (left, right) = if !used {
                    (Neighbor::Mirror, Neighbor::Mirror)
                } else {
                    let l = left.unwrap_or_else(|| outside(Side::Left, [x0 - 0.5 * mesh.dx(), yc]));
                    let r = right.unwrap_or_else(|| outside(Side::Right, [x1 + 0.5 * mesh.dx(), yc]));
                    (l, r)
                };
                faces.push(Face { dir: Direction::X, left, right });
            }
        }
        let x_faces = faces.len();
        if mesh.dim() == 2 {
            for iy in 0..=ny {
                for ix in 0..nx {
                    let xc = mesh.center(mesh.index(ix, 0))[0];
                    let below = if iy == 0 {
                        None
                    } else {
                        Some(cell(mesh.index(ix, iy - 1)))
                    };
                    let above = if iy == ny { None } else { Some(cell(mesh.index(ix, iy))) };
                    let used = matches!(below, Some(Neighbor::Cell(_))) || matches!(above, Some(Neighbor::Cell(_)));
                    let (left, right) = if !used {
                        (Neighbor::Mirror, Neighbor::Mirror)
                    } else {
                        let l = below.unwrap_or_else(|| outside(Side::Bottom, [xc, y0 - 0.5 * mesh.dy()]));
                        let r = above.unwrap_or_else(|| outside(Side::Top, [xc, y1 + 0.5 * mesh.dy()]));
                        (l, r)
                    };
                    faces.push(Face { dir: Direction::Y, left, right });
                }
            }
        }

        let p = self.states();
        let nq = self.basis.rule().len();
        let size = self.basis.size();
        let mut ghosts = vec![0.0; ghost_centers.len() * nq * p];
        let mut ghost_moments = vec![0.0; ghost_centers.len() * p * size];
        let proj = self.projection_basis()?;
        let ic = self.scenario.ic;
        let physics = self.scenario.physics;
        for (g, &c) in ghost_centers.iter().enumerate() {
            let nodal = &mut ghosts[g * nq * p..(g + 1) * nq * p];
            match self.closure {
                Closure::Sg => {
                    let m = self.project_point(&proj, c);
                    self.basis.eval_nodal(&m, p, nodal);
                    ghost_moments[g * p * size..(g + 1) * p * size].copy_from_slice(&m);
                }
                Closure::Ipm { .. } => {
                    for (q, &xi) in self.basis.nodes().iter().enumerate() {
                        ic.eval(&physics, c, xi, &mut nodal[q * p..(q + 1) * p]);
                    }
                }
            }
        }
        self.faces = faces;
        self.x_faces = x_faces;
        self.ghosts = ghosts;
        self.ghost_moments = ghost_moments;
        Ok(())
    }

    /// Projected initial moments; inactive cells hold zeros.
    pub fn initial_field(&self) -> Result<MomentField> {
        let p = self.states();
        let mut field = MomentField::zeros(p, self.scenario.solver.order, self.mesh.cells());
        let proj = self.projection_basis()?;
        let mesh = &self.mesh;
        field.data_mut().par_chunks_mut(p * proj.size()).enumerate().for_each(|(j, block)| {
            if mesh.is_active(j) {
                block.copy_from_slice(&self.project_point(&proj, mesh.center(j)));
            }
        });
        Ok(field)
    }

    pub fn run(&self) -> Result<Solution> {
        self.run_with(0, |_, _, _| {})
    }

    /// Integrate to t_end, calling `snapshot(step, t, field)` every
    /// `snapshot_every` steps (never if 0).
    pub fn run_with(&self, snapshot_every: usize, mut snapshot: impl FnMut(usize, f64, &MomentField)) -> Result<Solution> {
        let start = Instant::now();
        let cfg = &self.scenario.solver;
        let mesh = &self.mesh;
        let p = self.states();
        let size = self.basis.size();
        let block = p * size;
        let nq = self.basis.rule().len();
        let cells = mesh.cells();
        let nx = mesh.nx();
        let dim = mesh.dim();
        let (dx, dy) = (mesh.dx(), mesh.dy());
        let mask = mesh.active_mask();

        let mut field = self.initial_field()?;
        let initial_totals = self.totals(&field);
        let mut outflow = vec![0.0; p];
        let mut nodal = vec![0.0; cells * nq * p];
        let mut fluxes = vec![0.0; self.faces.len() * block];
        let mut speeds = vec![[0.0; 2]; cells];
        let mut duals: Vec<DualState> = match &self.closure {
            Closure::Sg => Vec::new(),
            Closure::Ipm { .. } => vec![DualState::zeros(p, size); cells],
        };
        let mut dual_iterations = 0usize;

        let mut t = 0.0;
        let mut step = 0usize;
        let mut min_dt = f64::INFINITY;
        let mut max_dt = 0.0f64;

        while t < cfg.t_end {
            apply_filter(&cfg.filter, &self.basis, field.data_mut());

            // closure: nodal conserved values of every active cell
            match &self.closure {
                Closure::Sg => {
                    let basis = &self.basis;
                    nodal
                        .par_chunks_mut(nq * p)
                        .zip(field.data().par_chunks(block))
                        .enumerate()
                        .for_each(|(j, (out, m))| {
                            if mask[j] {
                                basis.eval_nodal(m, p, out);
                            }
                        });
                }
                Closure::Ipm { entropy, config } => {
                    let basis = &self.basis;
                    let entropy = entropy.as_ref();
                    let failure = nodal
                        .par_chunks_mut(nq * p)
                        .zip(field.data_mut().par_chunks_mut(block))
                        .zip(duals.par_iter_mut())
                        .enumerate()
                        .filter_map(|(j, ((out, m), dual))| {
                            if !mask[j] {
                                return None;
                            }
                            match solve_dual(m, entropy, basis, config, dual) {
                                Ok(d) => {
                                    *dual = d;
                                    m.copy_from_slice(&reconstruct_moments(dual, entropy, basis));
                                    nodal_solution(dual, entropy, basis, out);
                                    None
                                }
                                Err(e) => Some((j, e)),
                            }
                        })
                        .min_by_key(|(j, _)| *j);
                    if let Some((j, e)) = failure {
                        return Err(e.at(j, step));
                    }
                    dual_iterations += duals.iter().zip(mask).filter(|(_, &a)| a).map(|(d, _)| d.iterations).sum::<usize>();
                }
            }

            // time step from the largest wave speed over cells and ghosts
            let (lx, ly) = self.max_speeds(&nodal, &mut speeds, step)?;
            let rate = if dim == 1 { lx / dx } else { lx / dx + ly / dy };
            let mut dt = if rate > 0.0 { cfg.cfl / rate } else { cfg.t_end - t };
            let last = t + dt >= cfg.t_end;
            if last {
                dt = cfg.t_end - t;
            }

            self.face_fluxes(&field, &nodal, dt, &mut fluxes, step)?;

            // boundary ledger
            for (f, face) in self.faces.iter().enumerate() {
                let sign = face.boundary_sign();
                if sign == 0.0 {
                    continue;
                }
                let area = match (dim, face.dir) {
                    (1, _) => 1.0,
                    (_, Direction::X) => dy,
                    (_, Direction::Y) => dx,
                };
                for s in 0..p {
                    outflow[s] += sign * dt * area * fluxes[f * block + s * size];
                }
            }

            // conservative update
            let x_faces = self.x_faces;
            let fluxes_ref = &fluxes;
            let bad = field
                .data_mut()
                .par_chunks_mut(block)
                .enumerate()
                .filter_map(|(j, u)| {
                    if !mask[j] {
                        return None;
                    }
                    let ix = j % nx;
                    let iy = j / nx;
                    let fw = (iy * (nx + 1) + ix) * block;
                    let fe = fw + block;
                    let cx = dt / dx;
                    for k in 0..block {
                        u[k] -= cx * (fluxes_ref[fe + k] - fluxes_ref[fw + k]);
                    }
                    if dim == 2 {
                        let fs = (x_faces + iy * nx + ix) * block;
                        let fn_ = (x_faces + (iy + 1) * nx + ix) * block;
                        let cy = dt / dy;
                        for k in 0..block {
                            u[k] -= cy * (fluxes_ref[fn_ + k] - fluxes_ref[fs + k]);
                        }
                    }
                    if u.iter().all(|v| v.is_finite()) {
                        None
                    } else {
                        Some(j)
                    }
                })
                .min();
            if let Some(cell) = bad {
                return Err(Error::NonFinite { cell, step });
            }

            min_dt = min_dt.min(dt);
            max_dt = max_dt.max(dt);
            step += 1;
            t = if last { cfg.t_end } else { t + dt };
            if snapshot_every > 0 && step.is_multiple_of(snapshot_every) {
                snapshot(step, t, &field);
            }
        }

        // the returned moments are the filtered ones the next step would see
        if step > 0 {
            apply_filter(&cfg.filter, &self.basis, field.data_mut());
        }
        let final_totals = self.totals(&field);
        let report = RunReport {
            steps: step,
            final_time: t,
            wall_time_s: start.elapsed().as_secs_f64(),
            min_dt: if step > 0 { min_dt } else { 0.0 },
            max_dt,
            initial_totals,
            final_totals,
            outflow,
            dual_iterations,
        };
        Ok(Solution { field, report })
    }

    /// Values of the closed solution at arbitrary ξ nodes, laid out
    /// `[(j * nodes.len() + q) * p + s]`. SG evaluates the expansion; IPM
    /// solves the dual problem and evaluates u(λ̂·φ(ξ)). Inactive cells are 0.
    pub fn sample(&self, field: &MomentField, nodes: &[f64]) -> Result<Vec<f64>> {
        let p = self.states();
        let size = self.basis.size();
        let nn = nodes.len();
        let mut phi = vec![0.0; nn * size];
        for (q, &xi) in nodes.iter().enumerate() {
            if !(-1.0..=1.0).contains(&xi) {
                return Err(Error::Domain(format!("ξ = {xi} outside [-1, 1]")));
            }
            eval_basis(xi, &mut phi[q * size..(q + 1) * size]);
        }
        let mask = self.mesh.active_mask();
        let mut out = vec![0.0; field.cells() * nn * p];
        let failure = out
            .par_chunks_mut(nn * p)
            .enumerate()
            .filter_map(|(j, values)| {
                if !mask[j] {
                    return None;
                }
                let m = field.cell(j);
                let coeffs = match &self.closure {
                    Closure::Sg => m.to_vec(),
                    Closure::Ipm { entropy, config } => {
                        let warm = match DualState::from_mean(m, entropy.as_ref(), size) {
                            Ok(w) => w,
                            Err(e) => return Some((j, e)),
                        };
                        match solve_dual(m, entropy.as_ref(), &self.basis, config, &warm) {
                            Ok(d) => d.coeffs,
                            Err(e) => return Some((j, e)),
                        }
                    }
                };
                for q in 0..nn {
                    let ph = &phi[q * size..(q + 1) * size];
                    let v = &mut values[q * p..(q + 1) * p];
                    for s in 0..p {
                        let c = &coeffs[s * size..(s + 1) * size];
                        let mut acc = c[0];
                        for i in 1..size {
                            acc += c[i] * ph[i];
                        }
                        v[s] = acc;
                    }
                    if let Closure::Ipm { entropy, .. } = &self.closure {
                        let dual = v.to_vec();
                        if !entropy.conserved(&dual, v) {
                            return Some((j, Error::Domain("entropy variables outside the admissible set".into())));
                        }
                    }
                }
                None
            })
            .min_by_key(|(j, _)| *j);
        match failure {
            Some((_, e)) => Err(e),
            None => Ok(out),
        }
    }

    /// Σ û_s0 · volume over active cells, summed in cell order.
    pub fn totals(&self, field: &MomentField) -> Vec<f64> {
        let vol = self.mesh.volume();
        (0..self.states())
            .map(|s| {
                (0..field.cells())
                    .filter(|&j| self.mesh.is_active(j))
                    .map(|j| field.get(s, 0, j) * vol)
                    .sum()
            })
            .collect()
    }

    /// Largest wave speeds (x, y) over active cells and ghost states.
    fn max_speeds(&self, nodal: &[f64], speeds: &mut [[f64; 2]], step: usize) -> Result<(f64, f64)> {
        let physics = self.scenario.physics;
        let p = self.states();
        let nq = self.basis.rule().len();
        let mask = self.mesh.active_mask();
        let two_d = self.mesh.dim() == 2;
        let speed_of = |values: &[f64]| -> Result<[f64; 2]> {
            let mut m = [0.0f64; 2];
            for q in 0..nq {
                let u = &values[q * p..(q + 1) * p];
                m[0] = m[0].max(physics.max_speed(u, Direction::X)?);
                if two_d {
                    m[1] = m[1].max(physics.max_speed(u, Direction::Y)?);
                }
            }
            Ok(m)
        };
        let failure = speeds
            .par_iter_mut()
            .zip(nodal.par_chunks(nq * p))
            .enumerate()
            .filter_map(|(j, (sp, values))| {
                if !mask[j] {
                    *sp = [0.0; 2];
                    return None;
                }
                match speed_of(values) {
                    Ok(v) => {
                        *sp = v;
                        None
                    }
                    Err(e) => Some((j, e)),
                }
            })
            .min_by_key(|(j, _)| *j);
        if let Some((j, e)) = failure {
            return Err(e.at(j, step));
        }
        let mut lambda = speeds.iter().fold([0.0f64; 2], |a, b| [a[0].max(b[0]), a[1].max(b[1])]);
        for g in self.ghosts.chunks(nq * p) {
            let v = speed_of(g)?;
            lambda = [lambda[0].max(v[0]), lambda[1].max(v[1])];
        }
        Ok((lambda[0], lambda[1]))
    }

    fn face_fluxes(&self, field: &MomentField, nodal: &[f64], dt: f64, fluxes: &mut [f64], step: usize) -> Result<()> {
        let physics = self.scenario.physics;
        let p = self.states();
        let size = self.basis.size();
        let block = p * size;
        let nq = self.basis.rule().len();
        let basis = &self.basis;
        let tensor = self.scenario.solver.flux_path == FluxPath::Tensor;
        let (dx, dy) = (self.mesh.dx(), self.mesh.dy());

        let nodal_of = |n: Neighbor| -> Option<&[f64]> {
            match n {
                Neighbor::Cell(j) => Some(&nodal[j * nq * p..(j + 1) * nq * p]),
                Neighbor::Ghost(g) => Some(&self.ghosts[g * nq * p..(g + 1) * nq * p]),
                Neighbor::Mirror => None,
            }
        };
        let moments_of = |n: Neighbor| -> Option<&[f64]> {
            match n {
                Neighbor::Cell(j) => Some(field.cell(j)),
                Neighbor::Ghost(g) => Some(&self.ghost_moments[g * block..(g + 1) * block]),
                Neighbor::Mirror => None,
            }
        };

        let failure = fluxes
            .par_chunks_mut(block)
            .zip(self.faces.par_iter())
            .enumerate()
            .filter_map(|(f, (out, face))| {
                if !face.is_used() {
                    out.fill(0.0);
                    return None;
                }
                let alpha = match face.dir {
                    Direction::X => dx / dt,
                    Direction::Y => dy / dt,
                };
                if tensor {
                    let (ul, ur) = mirrored_pair(moments_of(face.left), moments_of(face.right), |_| {});
                    burgers_tensor_flux(basis, &ul, &ur, alpha, out);
                    return None;
                }
                let reflect = |u: &mut [f64]| {
                    for q in 0..nq {
                        physics.reflect(&mut u[q * p..(q + 1) * p], face.dir);
                    }
                };
                let (ul, ur) = mirrored_pair(nodal_of(face.left), nodal_of(face.right), reflect);
                let mut fq = vec![0.0; nq * p];
                for q in 0..nq {
                    let r = physics.numerical_flux(
                        &ul[q * p..(q + 1) * p],
                        &ur[q * p..(q + 1) * p],
                        face.dir,
                        alpha,
                        &mut fq[q * p..(q + 1) * p],
                    );
                    if let Err(e) = r {
                        let cell = match (face.left, face.right) {
                            (Neighbor::Cell(j), _) | (_, Neighbor::Cell(j)) => j,
                            _ => 0,
                        };
                        return Some((f, e.at(cell, step)));
                    }
                }
                basis.project_nodal(&fq, p, out);
                None
            })
            .min_by_key(|(f, _)| *f);
        match failure {
            Some((_, e)) => Err(e),
            None => Ok(()),
        }
    }
}

/// Resolve the two sides of a face, mirroring whichever side is a wall.
fn mirrored_pair(left: Option<&[f64]>, right: Option<&[f64]>, reflect: impl Fn(&mut [f64])) -> (Vec<f64>, Vec<f64>) {
    match (left, right) {
        (Some(l), Some(r)) => (l.to_vec(), r.to_vec()),
        (Some(l), None) => {
            let mut r = l.to_vec();
            reflect(&mut r);
            (l.to_vec(), r)
        }
        (None, Some(r)) => {
            let mut l = r.to_vec();
            reflect(&mut l);
            (l, r.to_vec())
        }
        (None, None) => unreachable!("unused faces are skipped"),
    }
}

/// Galerkin Lax-Friedrichs flux of Burgers' equation from triple products:
/// ½(⟨u_l²/2 φ_i⟩ + ⟨u_r²/2 φ_i⟩) - (α/2)(û_r,i - û_l,i).
pub fn burgers_tensor_flux(basis: &GpcBasis, ul: &[f64], ur: &[f64], alpha: f64, out: &mut [f64]) {
    let mut sq = vec![0.0; basis.size()];
    for e in basis.triple().entries() {
        let mult = if e.j == e.k { 1.0 } else { 2.0 };
        sq[e.i] += mult * e.value * (ul[e.j] * ul[e.k] + ur[e.j] * ur[e.k]);
    }
    for i in 0..basis.size() {
        out[i] = 0.25 * sq[i] - 0.5 * alpha * (ur[i] - ul[i]);
    }
}

/// Convenience wrapper: build a solver and run it to t_end.
pub fn run(scenario: &Scenario) -> Result<Solution> {
    Solver::new(scenario)?.run()
}
