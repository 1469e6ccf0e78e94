//! Problem definitions: physics, geometry, random initial data and solver
//! settings, plus the four reference setups (Burgers forming shock, Euler
//! shock tube, 2D blast with obstacles, 2D duct).

use crate::error::{Error, Result};
use crate::filter::FilterConfig;
use crate::mesh::{Boundaries, BoundaryKind, Mesh, Obstacle};
use crate::physics::{EulerState, Physics};
use crate::quadrature::QuadratureKind;

/// How the random interface of a shock-tube initial condition is placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterfaceShape {
    /// Interface at x = x₀ + σξ.
    Planar,
    /// Interface at ‖x‖ = x₀ + σξ.
    Radial,
}

impl InterfaceShape {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "planar" => Ok(Self::Planar),
            "radial" => Ok(Self::Radial),
            _ => Err(Error::Config(format!("unknown interface shape '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Planar => "planar",
            Self::Radial => "radial",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    /// u_L left of x₀+σξ, u_R right of x₁+σξ, linear in between.
    BurgersRamp {
        x0: f64,
        x1: f64,
        u_left: f64,
        u_right: f64,
        sigma: f64,
    },
    /// Gas at rest with (ρ_L, p_L) inside the interface and (ρ_R, p_R) outside.
    ShockTube {
        x0: f64,
        sigma: f64,
        rho_left: f64,
        p_left: f64,
        rho_right: f64,
        p_right: f64,
        shape: InterfaceShape,
    },
}

impl InitialCondition {
    pub fn sigma(&self) -> f64 {
        match *self {
            Self::BurgersRamp { sigma, .. } | Self::ShockTube { sigma, .. } => sigma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::BurgersRamp { x0, x1, sigma, .. } => {
                if !(x0 < x1) {
                    return Err(Error::Config(format!("ramp needs x0 < x1, got {x0} ≥ {x1}")));
                }
                if !(sigma >= 0.0) {
                    return Err(Error::Config(format!("σ must be ≥ 0, got {sigma}")));
                }
            }
            Self::ShockTube { sigma, rho_left, p_left, rho_right, p_right, .. } => {
                if !(sigma >= 0.0) {
                    return Err(Error::Config(format!("σ must be ≥ 0, got {sigma}")));
                }
                if !(rho_left > 0.0 && p_left > 0.0 && rho_right > 0.0 && p_right > 0.0) {
                    return Err(Error::Config("shock-tube states need positive density and pressure".into()));
                }
            }
        }
        Ok(())
    }

    /// Evaluate u_IC(x, ξ) into `out` for the given physics.
    pub fn eval(&self, physics: &Physics, x: [f64; 2], xi: f64, out: &mut [f64]) {
        match *self {
            Self::BurgersRamp { x0, x1, u_left, u_right, sigma } => {
                let a = x0 + sigma * xi;
                let b = x1 + sigma * xi;
                out[0] = if x[0] < a {
                    u_left
                } else if x[0] <= b {
                    u_left + (u_right - u_left) / (x0 - x1) * (a - x[0])
                } else {
                    u_right
                };
            }
            Self::ShockTube { x0, sigma, rho_left, p_left, rho_right, p_right, shape } => {
                let r = match shape {
                    InterfaceShape::Planar => x[0],
                    InterfaceShape::Radial => (x[0] * x[0] + x[1] * x[1]).sqrt(),
                };
                let inside = r < x0 + sigma * xi;
                let (rho, p) = if inside { (rho_left, p_left) } else { (rho_right, p_right) };
                let gamma = physics.gamma().unwrap_or(1.4);
                let velocity = [0.0; 2];
                let st = EulerState::from_primitive(rho, &velocity[..physics.dimension()], p, gamma);
                out.copy_from_slice(&st.conserved);
            }
        }
    }

    /// The deterministic initial condition obtained by fixing ξ.
    pub fn at_node(&self, xi: f64) -> Self {
        match *self {
            Self::BurgersRamp { x0, x1, u_left, u_right, sigma } => Self::BurgersRamp {
                x0: x0 + sigma * xi,
                x1: x1 + sigma * xi,
                u_left,
                u_right,
                sigma: 0.0,
            },
            Self::ShockTube { x0, sigma, rho_left, p_left, rho_right, p_right, shape } => Self::ShockTube {
                x0: x0 + sigma * xi,
                sigma: 0.0,
                rho_left,
                p_left,
                rho_right,
                p_right,
                shape,
            },
        }
    }

    /// min and max of a scalar initial condition over x and ξ.
    pub fn scalar_bounds(&self) -> Option<(f64, f64)> {
        match *self {
            Self::BurgersRamp { u_left, u_right, .. } => Some((u_left.min(u_right), u_left.max(u_right))),
            Self::ShockTube { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub x_range: (f64, f64),
    pub y_range: Option<(f64, f64)>,
    pub nx: usize,
    pub ny: usize,
    pub boundaries: Boundaries,
    pub obstacles: Vec<Obstacle>,
    /// Slip wall below which cells are inactive (duct geometry).
    pub floor: Option<f64>,
}

impl Domain {
    pub fn build(&self) -> Result<Mesh> {
        match self.y_range {
            None => Mesh::interval(
                self.x_range.0,
                self.x_range.1,
                self.nx,
                self.boundaries.left,
                self.boundaries.right,
            ),
            Some(y) => Mesh::rectangle(
                self.x_range,
                y,
                self.nx,
                self.ny,
                self.boundaries,
                &self.obstacles,
                self.floor,
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureKind {
    /// Stochastic Galerkin: moments of the conserved variables evolve directly.
    Sg,
    /// Intrusive polynomial moments with an entropy closure.
    Ipm,
}

impl ClosureKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sg" => Ok(Self::Sg),
            "ipm" => Ok(Self::Ipm),
            _ => Err(Error::Config(format!("unknown closure '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Sg => "sg",
            Self::Ipm => "ipm",
        }
    }
}

/// How SG moment fluxes are integrated in ξ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxPath {
    /// Quadrature of the pointwise numerical flux.
    Quadrature,
    /// Precomputed triple products (quadratic Burgers flux only).
    Tensor,
}

impl FluxPath {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "quadrature" => Ok(Self::Quadrature),
            "tensor" => Ok(Self::Tensor),
            _ => Err(Error::Config(format!("unknown flux path '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Quadrature => "quadrature",
            Self::Tensor => "tensor",
        }
    }
}

/// Quadrature family and size; `points = None` selects the family default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub kind: QuadratureKind,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IpmSettings {
    /// Gradient tolerance τ of the dual problem.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Default: Gauss-Lobatto with 4N nodes.
    pub quadrature: QuadratureSpec,
    /// Relative widening of the scalar entropy bounds beyond min/max of the data.
    pub bound_margin: f64,
}

impl Default for IpmSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-7,
            max_iterations: 200,
            quadrature: QuadratureSpec { kind: QuadratureKind::GaussLobatto, points: None },
            bound_margin: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub closure: ClosureKind,
    pub filter: FilterConfig,
    pub cfl: f64,
    pub t_end: f64,
    /// Truncation order N.
    pub order: usize,
    /// Quadrature for SG flux integrals; default Gauss-Legendre with 2N+1 nodes.
    pub quadrature: QuadratureSpec,
    pub flux_path: FluxPath,
    pub ipm: IpmSettings,
    /// Panels of the composite rule used to project initial and boundary data.
    pub projection_panels: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            closure: ClosureKind::Sg,
            filter: FilterConfig::none(),
            cfl: 0.8,
            t_end: 0.1,
            order: 5,
            quadrature: QuadratureSpec { kind: QuadratureKind::GaussLegendre, points: None },
            flux_path: FluxPath::Quadrature,
            ipm: IpmSettings::default(),
            projection_panels: 64,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config(format!("CFL number must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::Config(format!("end time must be finite and ≥ 0, got {}", self.t_end)));
        }
        if self.projection_panels == 0 {
            return Err(Error::Config("projection needs at least one panel".into()));
        }
        if self.closure == ClosureKind::Ipm && !(self.ipm.tolerance > 0.0) {
            return Err(Error::Config(format!("IPM tolerance must be positive, got {}", self.ipm.tolerance)));
        }
        Ok(())
    }

    /// Node count of the SG flux quadrature.
    pub fn flux_points(&self) -> usize {
        self.quadrature.points.unwrap_or(2 * self.order + 1)
    }

    /// Node count of the IPM quadrature.
    pub fn ipm_points(&self) -> usize {
        let n = self.order;
        self.ipm.quadrature.points.unwrap_or(match self.ipm.quadrature.kind {
            QuadratureKind::GaussLobatto => (4 * n).max(n + 2).max(2),
            _ => 2 * n + 1,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub physics: Physics,
    pub domain: Domain,
    pub ic: InitialCondition,
    pub solver: SolverConfig,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.ic.validate()?;
        self.solver.validate()?;
        if self.physics.dimension() == 2 && self.domain.y_range.is_none() {
            return Err(Error::Config("2D physics needs a y range".into()));
        }
        if self.physics.dimension() == 1 && self.domain.y_range.is_some() {
            return Err(Error::Config("1D physics cannot use a 2D domain".into()));
        }
        if matches!(self.ic, InitialCondition::BurgersRamp { .. }) != matches!(self.physics, Physics::Burgers) {
            return Err(Error::Config("initial condition does not match the physics".into()));
        }
        Ok(())
    }

    pub fn mesh(&self) -> Result<Mesh> {
        self.domain.build()
    }

    /// Copy with both mesh dimensions multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        let mut s = self.clone();
        s.domain.nx *= factor;
        if s.domain.y_range.is_some() {
            s.domain.ny *= factor;
        }
        s
    }

    /// Deterministic copy at a fixed ξ, solved with a degree-zero basis.
    pub fn at_node(&self, xi: f64) -> Self {
        let mut s = self.clone();
        s.ic = self.ic.at_node(xi);
        s.solver.order = 0;
        s.solver.closure = ClosureKind::Sg;
        s.solver.filter = FilterConfig::none();
        s.solver.quadrature = QuadratureSpec { kind: QuadratureKind::GaussLegendre, points: Some(1) };
        s.solver.flux_path = FluxPath::Quadrature;
        s.solver.projection_panels = 1;
        s
    }

    /// Burgers' forming shock on [0, 3].
    pub fn burgers() -> Self {
        Self {
            name: "burgers".into(),
            physics: Physics::Burgers,
            domain: Domain {
                x_range: (0.0, 3.0),
                y_range: None,
                nx: 2000,
                ny: 1,
                boundaries: Boundaries::all(BoundaryKind::Dirichlet),
                obstacles: Vec::new(),
                floor: None,
            },
            ic: InitialCondition::BurgersRamp {
                x0: 0.5,
                x1: 1.5,
                u_left: 12.0,
                u_right: 1.0,
                sigma: 0.2,
            },
            solver: SolverConfig {
                t_end: 0.11,
                order: 15,
                filter: FilterConfig::lasso_adaptive(),
                ..SolverConfig::default()
            },
        }
    }

    /// Euler shock tube with a random interface on [0, 1].
    pub fn euler1d() -> Self {
        Self {
            name: "euler1d".into(),
            physics: Physics::Euler1d { gamma: 1.4 },
            domain: Domain {
                x_range: (0.0, 1.0),
                y_range: None,
                nx: 2000,
                ny: 1,
                boundaries: Boundaries::all(BoundaryKind::Dirichlet),
                obstacles: Vec::new(),
                floor: None,
            },
            ic: InitialCondition::ShockTube {
                x0: 0.5,
                sigma: 0.05,
                rho_left: 1.0,
                p_left: 1.0,
                rho_right: 0.3,
                p_right: 0.3,
                shape: InterfaceShape::Planar,
            },
            solver: SolverConfig {
                t_end: 0.14,
                order: 15,
                filter: FilterConfig::lasso_adaptive(),
                ..SolverConfig::default()
            },
        }
    }

    /// 2D blast wave among four square obstacles.
    pub fn obstacles2d() -> Self {
        Self {
            name: "obstacles2d".into(),
            physics: Physics::Euler2d { gamma: 1.4 },
            domain: Domain {
                x_range: (-0.3, 0.3),
                y_range: Some((-0.3, 0.3)),
                nx: 700,
                ny: 700,
                boundaries: Boundaries::all(BoundaryKind::Dirichlet),
                obstacles: vec![
                    Obstacle { center: [0.0, 0.15], length: 0.06 },
                    Obstacle { center: [0.1, 0.0], length: 0.04 },
                    Obstacle { center: [-0.1, 0.1], length: 0.02 },
                    Obstacle { center: [-0.1, 0.0], length: 0.01 },
                ],
                floor: None,
            },
            ic: InitialCondition::ShockTube {
                x0: 0.05,
                sigma: 0.05,
                rho_left: 1.0,
                p_left: 1.0,
                rho_right: 0.8,
                p_right: 0.3,
                shape: InterfaceShape::Radial,
            },
            solver: SolverConfig {
                t_end: 0.14,
                order: 8,
                filter: FilterConfig::lasso_adaptive(),
                ..SolverConfig::default()
            },
        }
    }

    /// Shock in a duct: [0,1]² with a slip floor at y = 0.3725.
    pub fn duct2d() -> Self {
        Self {
            name: "duct2d".into(),
            physics: Physics::Euler2d { gamma: 1.4 },
            domain: Domain {
                x_range: (0.0, 1.0),
                y_range: Some((0.0, 1.0)),
                nx: 400,
                ny: 400,
                boundaries: Boundaries {
                    left: BoundaryKind::Dirichlet,
                    right: BoundaryKind::Dirichlet,
                    bottom: BoundaryKind::SlipWall,
                    top: BoundaryKind::SlipWall,
                },
                obstacles: Vec::new(),
                floor: Some(0.3725),
            },
            ic: InitialCondition::ShockTube {
                x0: 0.5,
                sigma: 0.1,
                rho_left: 1.0,
                p_left: 1.0,
                rho_right: 0.8,
                p_right: 0.3,
                shape: InterfaceShape::Planar,
            },
            solver: SolverConfig {
                t_end: 0.35,
                order: 8,
                filter: FilterConfig::l2(3.0e-6).expect("positive strength"),
                ..SolverConfig::default()
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burgers_ramp_shape() {
        let s = Scenario::burgers();
        let mut u = [0.0];
        s.ic.eval(&s.physics, [0.2, 0.0], 0.0, &mut u);
        assert_eq!(u[0], 12.0);
        s.ic.eval(&s.physics, [1.0, 0.0], 0.0, &mut u);
        assert!((u[0] - 6.5).abs() < 1e-14);
        s.ic.eval(&s.physics, [1.6, 0.0], -1.0, &mut u);
        assert_eq!(u[0], 1.0);
        // the ramp moves with ξ
        s.ic.eval(&s.physics, [0.6, 0.0], 1.0, &mut u);
        assert_eq!(u[0], 12.0);
    }

    #[test]
    fn at_node_fixes_interface() {
        let ic = Scenario::euler1d().ic.at_node(-1.0);
        match ic {
            InitialCondition::ShockTube { x0, sigma, .. } => {
                assert!((x0 - 0.45).abs() < 1e-15);
                assert_eq!(sigma, 0.0);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn presets_validate() {
        for s in [Scenario::burgers(), Scenario::euler1d(), Scenario::obstacles2d(), Scenario::duct2d()] {
            s.validate().unwrap();
            s.mesh().unwrap();
        }
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut s = Scenario::burgers();
        s.solver.cfl = 1.5;
        assert!(s.validate().is_err());
        let mut s = Scenario::burgers();
        s.ic = InitialCondition::BurgersRamp { x0: 1.0, x1: 0.5, u_left: 1.0, u_right: 0.0, sigma: 0.1 };
        assert!(s.validate().is_err());
    }
}
