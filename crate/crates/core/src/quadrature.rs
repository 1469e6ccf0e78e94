//! Quadrature rules on Θ = [-1, 1] with weights normalized against the
//! uniform density 1/2, so that weights sum to one.

use crate::error::{Error, Result};

/// Legendre polynomial P_n(x) and its derivative via the three-term recurrence.
pub fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p_curr = x;
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p_curr - kf * p_prev) / (kf + 1.0);
        p_prev = p_curr;
        p_curr = p_next;
    }
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        // P_n'(±1) = (±1)^{n+1} n(n+1)/2
        let s = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        s * nf * (nf + 1.0) / 2.0
    } else {
        nf * (p_prev - x * p_curr) / (1.0 - x * x)
    };
    (p_curr, dp)
}

/// Unnormalized Legendre polynomial P_n(x).
pub fn legendre(n: usize, x: f64) -> f64 {
    legendre_and_derivative(n, x).0
}

/// Family of a quadrature rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    GaussLegendre,
    GaussLobatto,
    /// Gauss-Legendre on equal panels.
    Composite,
}

impl QuadratureKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gauss_legendre" | "gauss-legendre" | "legendre" => Ok(Self::GaussLegendre),
            "gauss_lobatto" | "gauss-lobatto" | "lobatto" => Ok(Self::GaussLobatto),
            _ => Err(Error::Config(format!("unknown quadrature family '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::GaussLegendre => "gauss_legendre",
            Self::GaussLobatto => "gauss_lobatto",
            Self::Composite => "composite",
        }
    }
}

/// Nodes and probability weights on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Highest polynomial degree integrated exactly.
    pub exactness: usize,
}

impl QuadratureRule {
    /// `n`-point Gauss-Legendre rule, exact up to degree 2n-1.
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("Gauss-Legendre rule needs at least one node".into()));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for k in 0..m {
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_and_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_and_derivative(n, x);
            // weight of the probability measure: 2/((1-x^2) P'^2) times 1/2
            let w = 1.0 / ((1.0 - x * x) * dp * dp);
            nodes[k] = -x;
            nodes[n - 1 - k] = x;
            weights[k] = w;
            weights[n - 1 - k] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self {
            kind: QuadratureKind::GaussLegendre,
            nodes,
            weights,
            exactness: 2 * n - 1,
        })
    }

    /// `n`-point Gauss-Lobatto rule including both endpoints, exact up to
    /// degree 2n-3.
    pub fn gauss_lobatto(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config("Gauss-Lobatto rule needs at least two nodes".into()));
        }
        let m = n - 1;
        let mf = m as f64;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let end_w = 1.0 / (n as f64 * mf);
        nodes[0] = -1.0;
        nodes[m] = 1.0;
        weights[0] = end_w;
        weights[m] = end_w;
        // interior nodes are the roots of P'_{n-1}
        for k in 1..n.div_ceil(2) {
            let mut x = -(std::f64::consts::PI * k as f64 / mf).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_and_derivative(m, x);
                let ddp = (2.0 * x * dp - mf * (mf + 1.0) * p) / (1.0 - x * x);
                let dx = dp / ddp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let p = legendre(m, x);
            let w = 1.0 / (n as f64 * mf * p * p);
            nodes[k] = x;
            nodes[m - k] = -x;
            weights[k] = w;
            weights[m - k] = w;
        }
        if n % 2 == 1 {
            nodes[m / 2] = 0.0;
            let p = legendre(m, 0.0);
            weights[m / 2] = 1.0 / (n as f64 * mf * p * p);
        }
        Ok(Self {
            kind: QuadratureKind::GaussLobatto,
            nodes,
            weights,
            exactness: 2 * n - 3,
        })
    }

    /// Rule of the given family with `n` nodes.
    pub fn new(kind: QuadratureKind, n: usize) -> Result<Self> {
        match kind {
            QuadratureKind::GaussLegendre => Self::gauss_legendre(n),
            QuadratureKind::GaussLobatto => Self::gauss_lobatto(n),
            QuadratureKind::Composite => Err(Error::Config(
                "composite rules are built with QuadratureRule::composite".into(),
            )),
        }
    }

    /// Gauss-Legendre with `points` nodes on each of `panels` equal subintervals.
    pub fn composite(panels: usize, points: usize) -> Result<Self> {
        if panels == 0 {
            return Err(Error::Config("composite rule needs at least one panel".into()));
        }
        let base = Self::gauss_legendre(points)?;
        let h = 2.0 / panels as f64;
        let mut nodes = Vec::with_capacity(panels * points);
        let mut weights = Vec::with_capacity(panels * points);
        for p in 0..panels {
            let a = -1.0 + h * p as f64;
            for (x, w) in base.nodes.iter().zip(&base.weights) {
                nodes.push(a + 0.5 * h * (x + 1.0));
                weights.push(w / panels as f64);
            }
        }
        Ok(Self {
            kind: QuadratureKind::Composite,
            nodes,
            weights,
            exactness: base.exactness,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate `f` against the uniform probability density.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss-Legendre integral of `f` over [a, b] (plain Lebesgue measure).
pub(crate) fn integrate_interval(rule: &QuadratureRule, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    // rule weights sum to 1, the interval has length 2*half
    2.0 * half
        * rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
}
