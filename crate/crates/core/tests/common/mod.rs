#![allow(dead_code)]

//! Oracles shared by the integration tests.

/// Exact solution of the 1D Riemann problem for a polytropic gas, following
/// the classical two-rarefaction/two-shock pressure function.
pub struct ExactRiemann {
    pub gamma: f64,
    pub left: (f64, f64, f64),
    pub right: (f64, f64, f64),
    pub p_star: f64,
    pub u_star: f64,
}

impl ExactRiemann {
    /// `left`, `right` are (ρ, u, p).
    pub fn new(gamma: f64, left: (f64, f64, f64), right: (f64, f64, f64)) -> Self {
        let f = |p: f64, (rho, _u, pk): (f64, f64, f64)| -> (f64, f64) {
            let c = (gamma * pk / rho).sqrt();
            if p > pk {
                let a = 2.0 / ((gamma + 1.0) * rho);
                let b = (gamma - 1.0) / (gamma + 1.0) * pk;
                let s = (a / (p + b)).sqrt();
                ((p - pk) * s, s * (1.0 - 0.5 * (p - pk) / (p + b)))
            } else {
                let e = (gamma - 1.0) / (2.0 * gamma);
                let r = (p / pk).powf(e);
                (2.0 * c / (gamma - 1.0) * (r - 1.0), r / (rho * c))
            }
        };
        let du = right.1 - left.1;
        let mut p = 0.5 * (left.2 + right.2);
        for _ in 0..100 {
            let (fl, dl) = f(p, left);
            let (fr, dr) = f(p, right);
            let next = (p - (fl + fr + du) / (dl + dr)).max(1e-12);
            if (next - p).abs() < 1e-15 * p {
                p = next;
                break;
            }
            p = next;
        }
        let u = 0.5 * (left.1 + right.1) + 0.5 * (f(p, right).0 - f(p, left).0);
        Self { gamma, left, right, p_star: p, u_star: u }
    }

    /// Speed of the right-moving shock (assumes p* > p_R).
    pub fn right_shock_speed(&self) -> f64 {
        let g = self.gamma;
        let (rho, u, p) = self.right;
        let c = (g * p / rho).sqrt();
        u + c * ((g + 1.0) / (2.0 * g) * self.p_star / p + (g - 1.0) / (2.0 * g)).sqrt()
    }

    /// Density behind the right shock.
    pub fn right_star_density(&self) -> f64 {
        let g = self.gamma;
        let (rho, _, p) = self.right;
        let r = self.p_star / p;
        let k = (g - 1.0) / (g + 1.0);
        rho * (r + k) / (k * r + 1.0)
    }
}

/// Number of sign changes of the discrete second difference, ignoring
/// entries below `tol` in magnitude.
pub fn second_difference_sign_changes(v: &[f64], tol: f64) -> usize {
    let d2: Vec<f64> = v.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).filter(|d| d.abs() > tol).collect();
    d2.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
}

/// Largest |v[j+1] - v[j]|.
pub fn max_jump(v: &[f64]) -> f64 {
    v.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)
}
