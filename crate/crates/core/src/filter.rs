//! Filters acting on gPC coefficient vectors.
//!
//! All filters leave the order-zero coefficient untouched, so the cell means
//! of the conserved variables are never modified by filtering.

use crate::basis::GpcBasis;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    None,
    /// Spline (L²) filter with a fixed strength.
    L2,
    /// Lasso soft-threshold filter with a fixed strength.
    LassoFixed,
    /// Lasso filter whose strength is chosen per cell and state so that the
    /// highest-order coefficient vanishes.
    LassoAdaptive,
}

impl FilterKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "l2" => Ok(Self::L2),
            "lasso" | "lasso_fixed" => Ok(Self::LassoFixed),
            "lasso_adaptive" => Ok(Self::LassoAdaptive),
            _ => Err(Error::Config(format!("unknown filter kind '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::L2 => "l2",
            Self::LassoFixed => "lasso_fixed",
            Self::LassoAdaptive => "lasso_adaptive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    pub kind: FilterKind,
    /// Strength for `L2` and `LassoFixed`; ignored otherwise.
    pub lambda: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self::none()
    }
}

impl FilterConfig {
    pub fn new(kind: FilterKind, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::Config(format!("filter strength must be finite and ≥ 0, got {lambda}")));
        }
        Ok(Self { kind, lambda })
    }

    pub fn none() -> Self {
        Self { kind: FilterKind::None, lambda: 0.0 }
    }

    pub fn l2(lambda: f64) -> Result<Self> {
        Self::new(FilterKind::L2, lambda)
    }

    pub fn lasso(lambda: f64) -> Result<Self> {
        Self::new(FilterKind::LassoFixed, lambda)
    }

    pub fn lasso_adaptive() -> Self {
        Self { kind: FilterKind::LassoAdaptive, lambda: 0.0 }
    }

    pub fn is_active(&self) -> bool {
        self.kind != FilterKind::None
    }
}

/// g(i) = 1 / (1 + λ i²(i+1)²).
pub fn l2_filter_value(i: usize, lambda: f64) -> f64 {
    let k = (i * (i + 1)) as f64;
    1.0 / (1.0 + lambda * k * k)
}

/// Soft-threshold level λ i(i+1)‖φ_i‖_{L¹} for order `i`.
pub fn lasso_threshold(i: usize, lambda: f64, basis: &GpcBasis) -> f64 {
    lambda * (i * (i + 1)) as f64 * basis.l1_norm(i)
}

/// g(i, û_i) = (1 - λ i(i+1)‖φ_i‖_{L¹} / |û_i|)₊, with g(0) = 1 and g = 0
/// for a vanishing coefficient of order i ≥ 1.
pub fn lasso_filter_value(i: usize, u_hat: f64, lambda: f64, basis: &GpcBasis) -> f64 {
    if i == 0 {
        return 1.0;
    }
    if u_hat == 0.0 {
        return 0.0;
    }
    let g = 1.0 - lasso_threshold(i, lambda, basis) / u_hat.abs();
    if g > 0.0 {
        g
    } else {
        0.0
    }
}

/// sign(u)·max(|u| - t, 0).
#[inline]
pub fn soft_threshold(u: f64, t: f64) -> f64 {
    let m = u.abs() - t;
    if m > 0.0 {
        m.copysign(u)
    } else {
        0.0
    }
}

/// λ* = |û_N| / (N(N+1)‖φ_N‖_{L¹}) for one coefficient vector of length N+1.
pub fn adaptive_lambda(coeffs: &[f64], basis: &GpcBasis) -> Result<f64> {
    let n = basis.order();
    if n == 0 {
        return Err(Error::Config("adaptive filter strength needs a truncation order N ≥ 1".into()));
    }
    if coeffs.len() != n + 1 {
        return Err(Error::Config(format!(
            "coefficient vector has length {}, basis expects {}",
            coeffs.len(),
            n + 1
        )));
    }
    Ok(coeffs[n].abs() / ((n * (n + 1)) as f64 * basis.l1_norm(n)))
}

/// Filter one coefficient vector (a single state in a single cell) in place.
pub fn filter_coefficients(config: &FilterConfig, basis: &GpcBasis, coeffs: &mut [f64]) {
    let n = basis.order();
    match config.kind {
        FilterKind::None => {}
        FilterKind::L2 => {
            for (i, c) in coeffs.iter_mut().enumerate().skip(1) {
                *c *= l2_filter_value(i, config.lambda);
            }
        }
        FilterKind::LassoFixed => {
            for (i, c) in coeffs.iter_mut().enumerate().skip(1) {
                *c = soft_threshold(*c, lasso_threshold(i, config.lambda, basis));
            }
        }
        FilterKind::LassoAdaptive => {
            if n == 0 {
                return;
            }
            let top = coeffs[n].abs();
            if top == 0.0 {
                return;
            }
            // thresholds t_i = |û_N| · i(i+1)‖φ_i‖ / (N(N+1)‖φ_N‖); t_N = |û_N| exactly
            let denom = (n * (n + 1)) as f64 * basis.l1_norm(n);
            for i in 1..n {
                let ratio = (i * (i + 1)) as f64 * basis.l1_norm(i) / denom;
                coeffs[i] = soft_threshold(coeffs[i], top * ratio);
            }
            coeffs[n] = 0.0;
        }
    }
}

/// Apply the filter to every (cell, state) coefficient vector of a flat
/// moment array laid out as consecutive blocks of N+1 coefficients.
pub fn apply_filter(config: &FilterConfig, basis: &GpcBasis, moments: &mut [f64]) {
    if !config.is_active() {
        return;
    }
    for block in moments.chunks_exact_mut(basis.size()) {
        filter_coefficients(config, basis, block);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize) -> GpcBasis {
        GpcBasis::new(n, 2 * n + 1).unwrap()
    }

    #[test]
    fn l2_values() {
        assert_eq!(l2_filter_value(0, 123.0), 1.0);
        assert!((l2_filter_value(1, 0.00035) - 1.0 / (1.0 + 0.00035 * 4.0)).abs() < 1e-15);
        assert!((l2_filter_value(1, 0.00035) - 0.998602).abs() < 1e-6);
        assert_eq!(l2_filter_value(10, 0.0), 1.0);
        for i in 0..20 {
            assert!(l2_filter_value(i + 1, 0.01) < l2_filter_value(i, 0.01));
        }
    }

    #[test]
    fn lasso_values() {
        let b = basis(3);
        assert_eq!(lasso_filter_value(0, 5.0, 1.0, &b), 1.0);
        let t = 0.5 * 6.0 * b.l1_norm(2);
        assert_eq!(lasso_filter_value(2, t, 0.5, &b), 0.0);
        assert_eq!(lasso_filter_value(2, -0.3 * t, 0.5, &b), 0.0);
        let g = lasso_filter_value(1, 1.0, 0.1, &b);
        assert!((g - (1.0 - 0.1 * 2.0 * 3f64.sqrt() / 2.0)).abs() < 1e-15);
        assert!((g - 0.826795).abs() < 1e-6);
        assert_eq!(lasso_filter_value(3, 0.0, 0.0, &b), 0.0);
    }

    #[test]
    fn adaptive_lambda_examples() {
        let b = basis(1);
        assert_eq!(adaptive_lambda(&[3.0, 0.0], &b).unwrap(), 0.0);
        let lam = adaptive_lambda(&[0.0, 3f64.sqrt()], &b).unwrap();
        assert!((lam - 1.0).abs() < 1e-15);
        assert!(adaptive_lambda(&[1.0], &basis(0)).is_err());
    }

    #[test]
    fn none_is_identity_and_constants_survive() {
        let b = basis(4);
        let mut m = vec![1.0, -0.2, 0.3, 0.01, 0.5];
        let orig = m.clone();
        apply_filter(&FilterConfig::none(), &b, &mut m);
        assert_eq!(m, orig);

        let mut c = vec![7.0, 0.0, 0.0, 0.0, 0.0];
        apply_filter(&FilterConfig::lasso_adaptive(), &b, &mut c);
        assert_eq!(c, vec![7.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn adaptive_filter_is_idempotent() {
        let b = basis(6);
        let mut m = vec![1.0, -0.4, 0.3, -0.2, 0.1, 0.05, -0.02];
        apply_filter(&FilterConfig::lasso_adaptive(), &b, &mut m);
        assert_eq!(m[6], 0.0);
        let once = m.clone();
        apply_filter(&FilterConfig::lasso_adaptive(), &b, &mut m);
        assert_eq!(m, once);
    }

    #[test]
    fn negative_strength_rejected() {
        assert!(FilterConfig::l2(-1.0).is_err());
        assert!(FilterConfig::lasso(f64::NAN).is_err());
    }
}
