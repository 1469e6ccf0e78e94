//! Orthonormal Legendre chaos for a uniform random variable on Θ = [-1, 1].
//!
//! Polynomials are normalized with respect to the density f_Ξ = 1/2, so
//! φ_i = √(2i+1) P_i and φ_0 ≡ 1. Every quadrature rule stored here carries
//! probability weights (summing to one).

use crate::error::{Error, Result};
use crate::quadrature::{integrate_interval, legendre, QuadratureRule};

/// Evaluate φ_0(ξ), ..., φ_N(ξ) into `out` (length N+1).
pub fn eval_basis(xi: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    let mut p_prev = 1.0;
    out[0] = 1.0;
    if n == 1 {
        return;
    }
    let mut p_curr = xi;
    out[1] = 3f64.sqrt() * xi;
    for k in 1..n - 1 {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * xi * p_curr - kf * p_prev) / (kf + 1.0);
        p_prev = p_curr;
        p_curr = p_next;
        out[k + 1] = (2.0 * kf + 3.0).sqrt() * p_curr;
    }
}

/// Nonzero entry of the symmetric triple-product tensor, stored for j ≤ k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

/// ∫ φ_i φ_j φ_k f_Ξ dξ, dense and as a sparse list.
#[derive(Debug, Clone)]
pub struct TripleTensor {
    size: usize,
    dense: Vec<f64>,
    sparse: Vec<TripleEntry>,
}

impl TripleTensor {
    fn build(order: usize) -> Result<Self> {
        let size = order + 1;
        let rule = QuadratureRule::gauss_legendre((3 * order + 1).div_ceil(2).max(1))?;
        let mut phi = vec![0.0; size];
        let mut dense = vec![0.0; size * size * size];
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            eval_basis(x, &mut phi);
            for i in 0..size {
                for j in 0..size {
                    for k in 0..size {
                        dense[(i * size + j) * size + k] += w * phi[i] * phi[j] * phi[k];
                    }
                }
            }
        }
        // copy every entry from its sorted-index representative so the
        // tensor is exactly symmetric
        for i in 0..size {
            for j in 0..size {
                for k in 0..size {
                    let mut idx = [i, j, k];
                    idx.sort_unstable();
                    dense[(i * size + j) * size + k] = dense[(idx[0] * size + idx[1]) * size + idx[2]];
                }
            }
        }
        let mut sparse = Vec::new();
        for i in 0..size {
            for j in 0..size {
                for k in 0..size {
                    let idx = (i * size + j) * size + k;
                    let exact_zero = (i + j + k) % 2 == 1
                        || i > j + k
                        || j > i + k
                        || k > i + j;
                    if exact_zero {
                        dense[idx] = 0.0;
                    } else if i == 0 || j == 0 || k == 0 {
                        // one factor is φ_0 = 1: orthonormality gives δ exactly
                        dense[idx] = 1.0;
                    }
                    if j <= k && dense[idx] != 0.0 {
                        sparse.push(TripleEntry { i, j, k, value: dense[idx] });
                    }
                }
            }
        }
        Ok(Self { size, dense, sparse })
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.dense[(i * self.size + j) * self.size + k]
    }

    /// Nonzero entries with j ≤ k.
    pub fn entries(&self) -> &[TripleEntry] {
        &self.sparse
    }
}

/// Orthonormal gPC basis together with the quadrature it is sampled on.
#[derive(Debug, Clone)]
pub struct GpcBasis {
    order: usize,
    rule: QuadratureRule,
    /// φ_i(ξ_q) stored row-major as `phi[q * (order + 1) + i]`.
    phi: Vec<f64>,
    l1_norms: Vec<f64>,
    triple: TripleTensor,
}

impl GpcBasis {
    /// Basis of degree `order` sampled on a `quad_order`-point Gauss-Legendre rule.
    pub fn new(order: usize, quad_order: usize) -> Result<Self> {
        if quad_order < order + 1 {
            return Err(Error::Config(format!(
                "quadrature with {quad_order} nodes cannot resolve a degree-{order} basis (need at least {})",
                order + 1
            )));
        }
        Self::with_rule(order, QuadratureRule::gauss_legendre(quad_order)?)
    }

    /// Basis sampled on an arbitrary rule; the rule must integrate φ_i φ_j exactly.
    pub fn with_rule(order: usize, rule: QuadratureRule) -> Result<Self> {
        if rule.exactness < 2 * order {
            return Err(Error::Config(format!(
                "{} rule with {} nodes is exact to degree {}, degree {} needed for orthonormality",
                rule.kind.name(),
                rule.len(),
                rule.exactness,
                2 * order
            )));
        }
        let size = order + 1;
        let mut phi = vec![0.0; rule.len() * size];
        for (q, &x) in rule.nodes.iter().enumerate() {
            eval_basis(x, &mut phi[q * size..(q + 1) * size]);
        }
        let l1_norms = (0..size).map(l1_norm).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            order,
            rule,
            phi,
            l1_norms,
            triple: TripleTensor::build(order)?,
        })
    }

    /// One-node basis of degree zero, used for deterministic solves.
    pub fn deterministic() -> Self {
        Self::new(0, 1).expect("degree-zero basis is always valid")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of basis functions, N + 1.
    pub fn size(&self) -> usize {
        self.order + 1
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn nodes(&self) -> &[f64] {
        &self.rule.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.rule.weights
    }

    /// φ_0(ξ_q), ..., φ_N(ξ_q).
    pub fn phi_at(&self, q: usize) -> &[f64] {
        let size = self.size();
        &self.phi[q * size..(q + 1) * size]
    }

    pub fn l1_norms(&self) -> &[f64] {
        &self.l1_norms
    }

    pub fn l1_norm(&self, i: usize) -> f64 {
        self.l1_norms[i]
    }

    pub fn triple(&self) -> &TripleTensor {
        &self.triple
    }

    /// Σ_i coeffs[i] φ_i(ξ).
    pub fn eval_expansion(&self, coeffs: &[f64], xi: f64) -> Result<f64> {
        eval_expansion(coeffs, xi)
    }

    /// Moments of a vector-valued function `u(ξ, out)` with `states` components,
    /// laid out as `[s * (N+1) + i]`.
    pub fn project(&self, states: usize, u: impl Fn(f64, &mut [f64])) -> Vec<f64> {
        let nq = self.rule.len();
        let mut nodal = vec![0.0; nq * states];
        for q in 0..nq {
            u(self.rule.nodes[q], &mut nodal[q * states..(q + 1) * states]);
        }
        let mut out = vec![0.0; states * self.size()];
        self.project_nodal(&nodal, states, &mut out);
        out
    }

    /// Moments of a scalar function.
    pub fn project_scalar(&self, u: impl Fn(f64) -> f64) -> Vec<f64> {
        self.project(1, |x, out| out[0] = u(x))
    }

    /// Project nodal values `nodal[q * states + s]` onto the basis.
    ///
    /// Values are shifted by the first node's value before summation, so that
    /// data which does not depend on ξ is reproduced without rounding.
    pub fn project_nodal(&self, nodal: &[f64], states: usize, out: &mut [f64]) {
        let size = self.size();
        out.fill(0.0);
        for q in 0..self.rule.len() {
            let w = self.rule.weights[q];
            let phi = self.phi_at(q);
            for s in 0..states {
                let d = nodal[q * states + s] - nodal[s];
                if d == 0.0 {
                    continue;
                }
                let wd = w * d;
                let row = &mut out[s * size..(s + 1) * size];
                for (o, p) in row.iter_mut().zip(phi) {
                    *o += wd * p;
                }
            }
        }
        for s in 0..states {
            out[s * size] += nodal[s];
        }
    }

    /// Evaluate moments `coeffs[s * (N+1) + i]` at all nodes into `nodal[q * states + s]`.
    pub fn eval_nodal(&self, coeffs: &[f64], states: usize, nodal: &mut [f64]) {
        let size = self.size();
        for q in 0..self.rule.len() {
            let phi = self.phi_at(q);
            for s in 0..states {
                let c = &coeffs[s * size..(s + 1) * size];
                let mut acc = c[0];
                for i in 1..size {
                    acc += c[i] * phi[i];
                }
                nodal[q * states + s] = acc;
            }
        }
    }
}

/// Σ_i coeffs[i] φ_i(ξ) for ξ ∈ [-1, 1].
pub fn eval_expansion(coeffs: &[f64], xi: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&xi) {
        return Err(Error::Domain(format!("ξ = {xi} lies outside [-1, 1]")));
    }
    let mut phi = vec![0.0; coeffs.len()];
    eval_basis(xi, &mut phi);
    let mut acc = coeffs.first().copied().unwrap_or(0.0);
    for i in 1..coeffs.len() {
        acc += coeffs[i] * phi[i];
    }
    Ok(acc)
}

/// Expected value û_0 and variance Σ_{i≥1} û_i² of one coefficient vector.
pub fn mean_and_variance(coeffs: &[f64]) -> (f64, f64) {
    let mean = coeffs.first().copied().unwrap_or(0.0);
    let var = coeffs.iter().skip(1).map(|c| c * c).sum();
    (mean, var)
}

/// Roots of P_n in ascending order, bracketed by the interlacing roots of
/// P_{n-1} and refined by bisection.
pub fn legendre_roots(n: usize) -> Vec<f64> {
    let mut roots: Vec<f64> = Vec::new();
    for m in 1..=n {
        let mut brackets = Vec::with_capacity(m + 1);
        brackets.push(-1.0);
        brackets.extend_from_slice(&roots);
        brackets.push(1.0);
        let mut next = Vec::with_capacity(m);
        for w in brackets.windows(2) {
            let (mut a, mut b) = (w[0], w[1]);
            let mut fa = legendre(m, a);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = legendre(m, mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if (fm < 0.0) == (fa < 0.0) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            next.push(0.5 * (a + b));
        }
        roots = next;
    }
    roots
}

/// ‖φ_i‖_{L¹} = ∫ |φ_i| f_Ξ dξ, integrated piecewise between sign changes.
fn l1_norm(i: usize) -> Result<f64> {
    if i == 0 {
        return Ok(1.0);
    }
    let scale = (2.0 * i as f64 + 1.0).sqrt();
    let rule = QuadratureRule::gauss_legendre(i / 2 + 2)?;
    let mut points = vec![-1.0];
    points.extend(legendre_roots(i));
    points.push(1.0);
    let total: f64 = points
        .windows(2)
        .map(|w| integrate_interval(&rule, w[0], w[1], |x| legendre(i, x)).abs())
        .sum();
    Ok(0.5 * scale * total)
}
