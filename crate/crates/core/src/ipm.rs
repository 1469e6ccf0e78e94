//! Intrusive polynomial moment closure.
//!
//! The entropy variables v = U'(u) are expanded in the gPC basis. Given
//! moments û, the dual coefficients λ̂ minimize
//!
//! ```text
//!     ⟨U_*(λ̂·φ)⟩ - Σ_{s,i} λ̂_si û_si
//! ```
//!
//! whose gradient is ⟨u(λ̂·φ) φ_i⟩ - û_i and whose Hessian is
//! ⟨u'(λ̂·φ) φ_i φ_j⟩. The minimization is done with a damped Newton method.

use nalgebra::{DMatrix, DVector};

use crate::basis::GpcBasis;
use crate::error::{Error, Result};

/// A strictly convex entropy with its entropy-variable maps.
pub trait Entropy: Send + Sync {
    fn states(&self) -> usize;

    /// v = U'(u).
    fn entropy_variables(&self, u: &[f64], v: &mut [f64]) -> Result<()>;

    /// u(v) = (U')⁻¹(v). Returns `false` if `v` is outside the domain of the map.
    fn conserved(&self, v: &[f64], u: &mut [f64]) -> bool;

    /// Legendre transform U_*(v); `+∞` outside its domain.
    fn dual_potential(&self, v: &[f64]) -> f64;

    /// ∂u/∂v, row-major p×p.
    fn conserved_jacobian(&self, v: &[f64], jac: &mut [f64]);

    /// Cheap necessary condition for `moments` to lie in the image of the
    /// moment map.
    fn check_realizable(&self, _moments: &[f64], _size: usize) -> Result<()> {
        Ok(())
    }
}

/// s(u) = (u-u₋)ln(u-u₋) + (u₊-u)ln(u₊-u), confining u(v) to (u₋, u₊).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedBarrier {
    pub u_minus: f64,
    pub u_plus: f64,
}

impl BoundedBarrier {
    pub fn new(u_minus: f64, u_plus: f64) -> Result<Self> {
        if !(u_minus < u_plus) || !u_minus.is_finite() || !u_plus.is_finite() {
            return Err(Error::Config(format!("bounds must satisfy u₋ < u₊, got ({u_minus}, {u_plus})")));
        }
        Ok(Self { u_minus, u_plus })
    }

    fn width(&self) -> f64 {
        self.u_plus - self.u_minus
    }

    /// Entropy value s(u).
    pub fn entropy(&self, u: f64) -> Result<f64> {
        self.check_inside(u)?;
        let a = u - self.u_minus;
        let b = self.u_plus - u;
        Ok(a * a.ln() + b * b.ln())
    }

    /// U'(u) = ln((u-u₋)/(u₊-u)).
    pub fn derivative(&self, u: f64) -> Result<f64> {
        self.check_inside(u)?;
        Ok(((u - self.u_minus) / (self.u_plus - u)).ln())
    }

    /// u(v) = (u₋ + u₊eᵛ)/(1 + eᵛ), evaluated in logistic form.
    pub fn inverse(&self, v: f64) -> f64 {
        let sigma = logistic(v);
        let u = self.u_minus + self.width() * sigma;
        u.clamp(self.u_minus, self.u_plus)
    }

    /// u'(v) = (u₊-u₋) eᵛ/(1+eᵛ)².
    pub fn inverse_derivative(&self, v: f64) -> f64 {
        let sigma = logistic(v);
        self.width() * sigma * (1.0 - sigma)
    }

    /// U_*(v) = v u₋ + (u₊-u₋)·ln(1+eᵛ) - (u₊-u₋)ln(u₊-u₋).
    pub fn legendre_transform(&self, v: f64) -> f64 {
        let w = self.width();
        v * self.u_minus + w * softplus(v) - w * w.ln()
    }

    fn check_inside(&self, u: f64) -> Result<()> {
        if u > self.u_minus && u < self.u_plus {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "u = {u} outside the entropy's open interval ({}, {})",
                self.u_minus, self.u_plus
            )))
        }
    }
}

fn logistic(v: f64) -> f64 {
    if v >= 0.0 {
        1.0 / (1.0 + (-v).exp())
    } else {
        let e = v.exp();
        e / (1.0 + e)
    }
}

fn softplus(v: f64) -> f64 {
    v.max(0.0) + (-v.abs()).exp().ln_1p()
}

impl Entropy for BoundedBarrier {
    fn states(&self) -> usize {
        1
    }

    fn entropy_variables(&self, u: &[f64], v: &mut [f64]) -> Result<()> {
        v[0] = self.derivative(u[0])?;
        Ok(())
    }

    fn conserved(&self, v: &[f64], u: &mut [f64]) -> bool {
        u[0] = self.inverse(v[0]);
        v[0].is_finite()
    }

    fn dual_potential(&self, v: &[f64]) -> f64 {
        if v[0].is_finite() {
            self.legendre_transform(v[0])
        } else {
            f64::INFINITY
        }
    }

    fn conserved_jacobian(&self, v: &[f64], jac: &mut [f64]) {
        jac[0] = self.inverse_derivative(v[0]);
    }

    fn check_realizable(&self, moments: &[f64], _size: usize) -> Result<()> {
        let mean = moments[0];
        if mean > self.u_minus && mean < self.u_plus {
            Ok(())
        } else {
            Err(Error::NonRealizable(format!(
                "mean {mean} outside ({}, {})",
                self.u_minus, self.u_plus
            )))
        }
    }
}

/// Physical entropy U = -ρ s/(γ-1), s = ln(p ρ^{-γ}), for the 1D (p = 3) or
/// 2D (p = 4) Euler equations. Its dual potential is U_*(v) = ρ(v).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerEntropy {
    pub gamma: f64,
    pub states: usize,
}

impl EulerEntropy {
    pub fn new(gamma: f64, states: usize) -> Result<Self> {
        if !(gamma > 1.0) || !(states == 3 || states == 4) {
            return Err(Error::Config(format!("invalid Euler entropy: γ = {gamma}, p = {states}")));
        }
        Ok(Self { gamma, states })
    }
}

impl Entropy for EulerEntropy {
    fn states(&self) -> usize {
        self.states
    }

    fn entropy_variables(&self, u: &[f64], v: &mut [f64]) -> Result<()> {
        let g = self.gamma;
        let p = crate::physics::pressure(u, g)?;
        if !(p > 0.0) {
            return Err(Error::Domain(format!("pressure {p} is not positive")));
        }
        let rho = u[0];
        let last = self.states - 1;
        let mom2: f64 = u[1..last].iter().map(|m| m * m).sum();
        let s = p.ln() - g * rho.ln();
        v[0] = (g - s) / (g - 1.0) - 0.5 * mom2 / (rho * p);
        for k in 1..last {
            v[k] = u[k] / p;
        }
        v[last] = -rho / p;
        Ok(())
    }

    fn conserved(&self, v: &[f64], u: &mut [f64]) -> bool {
        let g = self.gamma;
        let last = self.states - 1;
        let ve = v[last];
        if !(ve < 0.0) || v.iter().any(|x| !x.is_finite()) {
            return false;
        }
        let vm2: f64 = v[1..last].iter().map(|m| m * m).sum();
        let s = g - (g - 1.0) * (v[0] - 0.5 * vm2 / ve);
        let rho = (((-ve).ln() + s) / (1.0 - g)).exp();
        let p = -rho / ve;
        u[0] = rho;
        let mut kinetic = 0.0;
        for k in 1..last {
            let vel = -v[k] / ve;
            u[k] = rho * vel;
            kinetic += vel * vel;
        }
        u[last] = p / (g - 1.0) + 0.5 * rho * kinetic;
        u.iter().all(|x| x.is_finite()) && rho > 0.0
    }

    fn dual_potential(&self, v: &[f64]) -> f64 {
        let mut u = [0.0; 4];
        if self.conserved(v, &mut u[..self.states]) {
            u[0]
        } else {
            f64::INFINITY
        }
    }

    fn conserved_jacobian(&self, v: &[f64], jac: &mut [f64]) {
        // central differences; symmetric by construction of the exact Jacobian
        let p = self.states;
        let mut vp = [0.0; 4];
        let mut vm = [0.0; 4];
        let mut up = [0.0; 4];
        let mut um = [0.0; 4];
        for c in 0..p {
            let h = 1e-6 * v[c].abs().max(1e-2);
            vp[..p].copy_from_slice(v);
            vm[..p].copy_from_slice(v);
            vp[c] += h;
            vm[c] -= h;
            self.conserved(&vp[..p], &mut up[..p]);
            self.conserved(&vm[..p], &mut um[..p]);
            for r in 0..p {
                jac[r * p + c] = (up[r] - um[r]) / (2.0 * h);
            }
        }
        for r in 0..p {
            for c in 0..r {
                let m = 0.5 * (jac[r * p + c] + jac[c * p + r]);
                jac[r * p + c] = m;
                jac[c * p + r] = m;
            }
        }
    }

    fn check_realizable(&self, moments: &[f64], size: usize) -> Result<()> {
        if moments[0] > 0.0 {
            Ok(())
        } else {
            Err(Error::NonRealizable(format!("mean density {} is not positive", moments[0])))
        }
        .and_then(|_| {
            let e = moments[(self.states - 1) * size];
            if e > 0.0 {
                Ok(())
            } else {
                Err(Error::NonRealizable(format!("mean energy {e} is not positive")))
            }
        })
    }
}

/// Newton parameters for the dual problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualSolverConfig {
    /// Stop once ‖∇‖_∞ < tolerance.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Armijo sufficient-decrease parameter.
    pub armijo: f64,
    /// Step shrink factor of the backtracking line search.
    pub shrink: f64,
}

impl Default for DualSolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-7,
            max_iterations: 200,
            armijo: 1e-4,
            shrink: 0.5,
        }
    }
}

/// Dual (entropy-variable) coefficients of one cell, laid out `[s * (N+1) + i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualState {
    pub coeffs: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl DualState {
    pub fn zeros(states: usize, size: usize) -> Self {
        Self {
            coeffs: vec![0.0; states * size],
            converged: false,
            iterations: 0,
        }
    }

    /// Initial guess reproducing the cell mean: λ̂ = (U'(û_0), 0, ..., 0).
    pub fn from_mean(moments: &[f64], entropy: &dyn Entropy, size: usize) -> Result<Self> {
        let p = entropy.states();
        let mean: Vec<f64> = (0..p).map(|s| moments[s * size]).collect();
        let mut v = vec![0.0; p];
        entropy
            .entropy_variables(&mean, &mut v)
            .map_err(|e| Error::NonRealizable(e.to_string()))?;
        let mut d = Self::zeros(p, size);
        for s in 0..p {
            d.coeffs[s * size] = v[s];
        }
        Ok(d)
    }
}

fn nodal_entropy_variables(coeffs: &[f64], basis: &GpcBasis, p: usize, q: usize, v: &mut [f64]) {
    let size = basis.size();
    let phi = basis.phi_at(q);
    for s in 0..p {
        let c = &coeffs[s * size..(s + 1) * size];
        let mut acc = c[0];
        for i in 1..size {
            acc += c[i] * phi[i];
        }
        v[s] = acc;
    }
}

/// Dual objective ⟨U_*(λ̂·φ)⟩ - λ̂·û.
pub fn dual_objective(coeffs: &[f64], moments: &[f64], entropy: &dyn Entropy, basis: &GpcBasis) -> f64 {
    let p = entropy.states();
    let mut v = [0.0; 4];
    let mut total = 0.0;
    for (q, &w) in basis.weights().iter().enumerate() {
        nodal_entropy_variables(coeffs, basis, p, q, &mut v[..p]);
        let u = entropy.dual_potential(&v[..p]);
        if !u.is_finite() {
            return f64::INFINITY;
        }
        total += w * u;
    }
    total - coeffs.iter().zip(moments).map(|(a, b)| a * b).sum::<f64>()
}

/// Gradient ⟨u(λ̂·φ) φ_i⟩ - û_i of the dual objective.
pub fn dual_gradient(coeffs: &[f64], moments: &[f64], entropy: &dyn Entropy, basis: &GpcBasis) -> Vec<f64> {
    let mut g = reconstruct_from_coeffs(coeffs, entropy, basis);
    for (gi, m) in g.iter_mut().zip(moments) {
        *gi -= m;
    }
    g
}

fn reconstruct_from_coeffs(coeffs: &[f64], entropy: &dyn Entropy, basis: &GpcBasis) -> Vec<f64> {
    let p = entropy.states();
    let size = basis.size();
    let mut v = [0.0; 4];
    let mut u = [0.0; 4];
    let mut out = vec![0.0; p * size];
    for (q, &w) in basis.weights().iter().enumerate() {
        nodal_entropy_variables(coeffs, basis, p, q, &mut v[..p]);
        entropy.conserved(&v[..p], &mut u[..p]);
        let phi = basis.phi_at(q);
        for s in 0..p {
            let wu = w * u[s];
            for i in 0..size {
                out[s * size + i] += wu * phi[i];
            }
        }
    }
    out
}

/// Solve the dual problem for the moments of one cell, starting from `warm`.
pub fn solve_dual(
    moments: &[f64],
    entropy: &dyn Entropy,
    basis: &GpcBasis,
    config: &DualSolverConfig,
    warm: &DualState,
) -> Result<DualState> {
    if !(config.tolerance > 0.0) {
        return Err(Error::Config(format!("dual tolerance must be positive, got {}", config.tolerance)));
    }
    let p = entropy.states();
    let size = basis.size();
    let n = p * size;
    if moments.len() != n || warm.coeffs.len() != n {
        return Err(Error::Config(format!(
            "dual problem expects {n} moments, got {} (warm start {})",
            moments.len(),
            warm.coeffs.len()
        )));
    }
    if moments.iter().any(|m| !m.is_finite()) {
        return Err(Error::NonRealizable("non-finite moments".into()));
    }
    entropy.check_realizable(moments, size)?;

    let mut lambda = warm.coeffs.clone();
    let mut objective = dual_objective(&lambda, moments, entropy, basis);
    if !objective.is_finite() {
        lambda = DualState::from_mean(moments, entropy, size)?.coeffs;
        objective = dual_objective(&lambda, moments, entropy, basis);
    }

    let mut v = [0.0; 4];
    let mut u = [0.0; 4];
    let mut jac = [0.0; 16];
    let mut hessian = DMatrix::<f64>::zeros(n, n);
    let mut grad = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut residual = f64::INFINITY;

    for iteration in 0..=config.max_iterations {
        // gradient and Hessian in one sweep over the nodes
        grad.iter_mut().for_each(|g| *g = 0.0);
        hessian.fill(0.0);
        for (q, &w) in basis.weights().iter().enumerate() {
            nodal_entropy_variables(&lambda, basis, p, q, &mut v[..p]);
            entropy.conserved(&v[..p], &mut u[..p]);
            entropy.conserved_jacobian(&v[..p], &mut jac[..p * p]);
            let phi = basis.phi_at(q);
            for s in 0..p {
                let wu = w * u[s];
                for i in 0..size {
                    grad[s * size + i] += wu * phi[i];
                }
                for r in 0..=s {
                    let wj = w * jac[s * p + r];
                    if wj == 0.0 {
                        continue;
                    }
                    for i in 0..size {
                        let a = wj * phi[i];
                        let row = s * size + i;
                        for k in 0..size {
                            let col = r * size + k;
                            if col <= row {
                                hessian[(row, col)] += a * phi[k];
                            }
                        }
                    }
                }
            }
        }
        for (g, m) in grad.iter_mut().zip(moments) {
            *g -= m;
        }
        residual = grad.iter().fold(0.0_f64, |acc, g| acc.max(g.abs()));
        if residual < config.tolerance {
            return Ok(DualState {
                coeffs: lambda,
                converged: true,
                iterations: iteration,
            });
        }
        if iteration == config.max_iterations {
            break;
        }
        for row in 0..n {
            for col in 0..row {
                hessian[(col, row)] = hessian[(row, col)];
            }
        }

        let g = DVector::from_column_slice(&grad);
        let direction = match hessian.clone().cholesky() {
            Some(chol) => -chol.solve(&g),
            None => -g.clone(),
        };
        let slope = direction.dot(&g);
        let direction = if slope < 0.0 { direction } else { -g.clone() };
        let slope = direction.dot(&g);

        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            for k in 0..n {
                trial[k] = lambda[k] + step * direction[k];
            }
            let f_trial = dual_objective(&trial, moments, entropy, basis);
            if f_trial <= objective + config.armijo * step * slope {
                std::mem::swap(&mut lambda, &mut trial);
                objective = f_trial;
                accepted = true;
                break;
            }
            step *= config.shrink;
        }
        if !accepted {
            // objective decrease below rounding: fall back to the full step if
            // it still shrinks the gradient
            for k in 0..n {
                trial[k] = lambda[k] + direction[k];
            }
            let trial_residual = dual_gradient(&trial, moments, entropy, basis)
                .iter()
                .fold(0.0_f64, |acc, g| acc.max(g.abs()));
            if trial_residual < residual {
                std::mem::swap(&mut lambda, &mut trial);
                objective = dual_objective(&lambda, moments, entropy, basis);
            } else {
                break;
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: config.max_iterations,
        residual,
    })
}

/// û_i = ⟨u(λ̂·φ) φ_i⟩ for a converged dual state.
pub fn reconstruct_moments(dual: &DualState, entropy: &dyn Entropy, basis: &GpcBasis) -> Vec<f64> {
    reconstruct_from_coeffs(&dual.coeffs, entropy, basis)
}

/// Conserved values u(λ̂·φ(ξ_q)) at every node, laid out `[q * p + s]`.
pub fn nodal_solution(dual: &DualState, entropy: &dyn Entropy, basis: &GpcBasis, out: &mut [f64]) {
    let p = entropy.states();
    let mut v = [0.0; 4];
    for q in 0..basis.rule().len() {
        nodal_entropy_variables(&dual.coeffs, basis, p, q, &mut v[..p]);
        entropy.conserved(&v[..p], &mut out[q * p..(q + 1) * p]);
    }
}
