//! Scenario files: a TOML document with one table per concern.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use fsg_core::filter::{FilterConfig, FilterKind};
use fsg_core::mesh::{Boundaries, BoundaryKind, Obstacle};
use fsg_core::quadrature::QuadratureKind;
use fsg_core::scenario::{
    ClosureKind, Domain, FluxPath, InitialCondition, InterfaceShape, IpmSettings, QuadratureSpec, SolverConfig,
};
use fsg_core::{Physics, Scenario};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub physics: PhysicsSection,
    pub domain: DomainSection,
    pub ic: IcSection,
    pub uq: UqSection,
    #[serde(default)]
    pub closure: ClosureSection,
    #[serde(default)]
    pub filter: FilterSection,
    pub time: TimeSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSection {
    /// burgers, euler1d or euler2d
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub x: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<[f64; 2]>,
    pub nx: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ny: Option<usize>,
    #[serde(default = "dirichlet")]
    pub left: String,
    #[serde(default = "dirichlet")]
    pub right: String,
    #[serde(default = "dirichlet")]
    pub bottom: String,
    #[serde(default = "dirichlet")]
    pub top: String,
    /// `[center_x, center_y, length]` per square obstacle.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub obstacles: Vec<[f64; 3]>,
    /// Slip wall at this height; cells below it are removed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor: Option<f64>,
}

fn dirichlet() -> String {
    "dirichlet".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcSection {
    pub x0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x1: Option<f64>,
    pub sigma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_right: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_right: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_right: Option<f64>,
    /// planar or radial
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UqSection {
    /// Truncation order N.
    pub order: usize,
    #[serde(default = "gauss_legendre")]
    pub quadrature: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default = "default_panels")]
    pub projection_panels: usize,
}

fn gauss_legendre() -> String {
    "gauss_legendre".into()
}

fn default_panels() -> usize {
    SolverConfig::default().projection_panels
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureSection {
    /// sg or ipm
    pub kind: String,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default = "gauss_lobatto")]
    pub quadrature: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default = "default_margin")]
    pub bound_margin: f64,
    #[serde(default = "quadrature_path")]
    pub flux_path: String,
}

fn default_tolerance() -> f64 {
    IpmSettings::default().tolerance
}

fn default_max_iterations() -> usize {
    IpmSettings::default().max_iterations
}

fn gauss_lobatto() -> String {
    "gauss_lobatto".into()
}

fn default_margin() -> f64 {
    IpmSettings::default().bound_margin
}

fn quadrature_path() -> String {
    "quadrature".into()
}

impl Default for ClosureSection {
    fn default() -> Self {
        Self {
            kind: "sg".into(),
            tolerance: default_tolerance(),
            max_iterations: default_max_iterations(),
            quadrature: gauss_lobatto(),
            points: None,
            bound_margin: default_margin(),
            flux_path: quadrature_path(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterSection {
    /// none, l2, lasso_fixed or lasso_adaptive
    pub kind: String,
    #[serde(default)]
    pub lambda: f64,
}

impl Default for FilterSection {
    fn default() -> Self {
        Self { kind: "none".into(), lambda: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub t_end: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
}

fn default_cfl() -> f64 {
    SolverConfig::default().cfl
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    /// Write the moment field every this many steps; 0 disables snapshots.
    #[serde(default)]
    pub snapshot_every: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), snapshot_every: 0 }
    }
}

/// Read a scenario file, applying `section.key=value` overrides before
/// validation.
pub fn load(path: &Path, overrides: &[String]) -> Result<ScenarioFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text, overrides).with_context(|| format!("in {}", path.display()))
}

pub fn parse(text: &str, overrides: &[String]) -> Result<ScenarioFile> {
    let mut table: toml::Table = toml::from_str(text)?;
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    Ok(ScenarioFile::deserialize(toml::Value::Table(table))?)
}

fn apply_override(table: &mut toml::Table, spec: &str) -> Result<()> {
    let (key, raw) = spec.split_once('=').ok_or_else(|| anyhow!("override '{spec}' is not of the form key=value"))?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        bail!("override key '{key}' has an empty component");
    }
    // bare words become strings, everything else is parsed as a TOML value
    let value = match toml::from_str::<toml::Table>(&format!("v = {}", raw.trim())) {
        Ok(mut t) => t.remove("v").expect("key present"),
        Err(_) => toml::Value::String(raw.trim().to_string()),
    };
    let (last, parents) = path.split_last().expect("non-empty");
    let mut cur = table;
    for p in parents {
        cur = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| anyhow!("override '{key}': '{p}' is not a table"))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

fn need(v: Option<f64>, what: &str) -> Result<f64> {
    v.ok_or_else(|| anyhow!("[ic] needs '{what}' for this model"))
}

impl ScenarioFile {
    pub fn to_scenario(&self) -> Result<Scenario> {
        let physics = match self.physics.model.as_str() {
            "burgers" => {
                if self.physics.gamma.is_some() {
                    bail!("[physics] gamma has no meaning for burgers");
                }
                Physics::Burgers
            }
            "euler1d" => Physics::Euler1d { gamma: self.physics.gamma.unwrap_or(1.4) },
            "euler2d" => Physics::Euler2d { gamma: self.physics.gamma.unwrap_or(1.4) },
            m => bail!("unknown physics model '{m}'"),
        };

        let d = &self.domain;
        let domain = Domain {
            x_range: (d.x[0], d.x[1]),
            y_range: d.y.map(|y| (y[0], y[1])),
            nx: d.nx,
            ny: d.ny.unwrap_or(1),
            boundaries: Boundaries {
                left: BoundaryKind::parse(&d.left)?,
                right: BoundaryKind::parse(&d.right)?,
                bottom: BoundaryKind::parse(&d.bottom)?,
                top: BoundaryKind::parse(&d.top)?,
            },
            obstacles: d.obstacles.iter().map(|o| Obstacle { center: [o[0], o[1]], length: o[2] }).collect(),
            floor: d.floor,
        };

        let ic = &self.ic;
        let ic = match physics {
            Physics::Burgers => InitialCondition::BurgersRamp {
                x0: ic.x0,
                x1: need(ic.x1, "x1")?,
                u_left: need(ic.u_left, "u_left")?,
                u_right: need(ic.u_right, "u_right")?,
                sigma: ic.sigma,
            },
            _ => InitialCondition::ShockTube {
                x0: ic.x0,
                sigma: ic.sigma,
                rho_left: need(ic.rho_left, "rho_left")?,
                p_left: need(ic.p_left, "p_left")?,
                rho_right: need(ic.rho_right, "rho_right")?,
                p_right: need(ic.p_right, "p_right")?,
                shape: InterfaceShape::parse(ic.shape.as_deref().unwrap_or("planar"))?,
            },
        };

        let c = &self.closure;
        let solver = SolverConfig {
            closure: ClosureKind::parse(&c.kind)?,
            filter: FilterConfig::new(FilterKind::parse(&self.filter.kind)?, self.filter.lambda)?,
            cfl: self.time.cfl,
            t_end: self.time.t_end,
            order: self.uq.order,
            quadrature: QuadratureSpec { kind: QuadratureKind::parse(&self.uq.quadrature)?, points: self.uq.points },
            flux_path: FluxPath::parse(&c.flux_path)?,
            ipm: IpmSettings {
                tolerance: c.tolerance,
                max_iterations: c.max_iterations,
                quadrature: QuadratureSpec { kind: QuadratureKind::parse(&c.quadrature)?, points: c.points },
                bound_margin: c.bound_margin,
            },
            projection_panels: self.uq.projection_panels,
        };

        let scenario = Scenario {
            name: self.name.clone().unwrap_or_else(|| self.physics.model.clone()),
            physics,
            domain,
            ic,
            solver,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn from_scenario(s: &Scenario, output: OutputSection) -> Self {
        let model = match s.physics {
            Physics::Burgers => "burgers",
            Physics::Euler1d { .. } => "euler1d",
            Physics::Euler2d { .. } => "euler2d",
        };
        let d = &s.domain;
        let b = d.boundaries;
        let ic = match s.ic {
            InitialCondition::BurgersRamp { x0, x1, u_left, u_right, sigma } => IcSection {
                x0,
                x1: Some(x1),
                sigma,
                u_left: Some(u_left),
                u_right: Some(u_right),
                rho_left: None,
                p_left: None,
                rho_right: None,
                p_right: None,
                shape: None,
            },
            InitialCondition::ShockTube { x0, sigma, rho_left, p_left, rho_right, p_right, shape } => IcSection {
                x0,
                x1: None,
                sigma,
                u_left: None,
                u_right: None,
                rho_left: Some(rho_left),
                p_left: Some(p_left),
                rho_right: Some(rho_right),
                p_right: Some(p_right),
                shape: Some(shape.name().into()),
            },
        };
        let cfg = &s.solver;
        Self {
            name: Some(s.name.clone()),
            physics: PhysicsSection { model: model.into(), gamma: s.physics.gamma() },
            domain: DomainSection {
                x: [d.x_range.0, d.x_range.1],
                y: d.y_range.map(|y| [y.0, y.1]),
                nx: d.nx,
                ny: d.y_range.map(|_| d.ny),
                left: b.left.name().into(),
                right: b.right.name().into(),
                bottom: b.bottom.name().into(),
                top: b.top.name().into(),
                obstacles: d.obstacles.iter().map(|o| [o.center[0], o.center[1], o.length]).collect(),
                floor: d.floor,
            },
            ic,
            uq: UqSection {
                order: cfg.order,
                quadrature: cfg.quadrature.kind.name().into(),
                points: cfg.quadrature.points,
                projection_panels: cfg.projection_panels,
            },
            closure: ClosureSection {
                kind: cfg.closure.name().into(),
                tolerance: cfg.ipm.tolerance,
                max_iterations: cfg.ipm.max_iterations,
                quadrature: cfg.ipm.quadrature.kind.name().into(),
                points: cfg.ipm.quadrature.points,
                bound_margin: cfg.ipm.bound_margin,
                flux_path: cfg.flux_path.name().into(),
            },
            filter: FilterSection { kind: cfg.filter.kind.name().into(), lambda: cfg.filter.lambda },
            time: TimeSection { t_end: cfg.t_end, cfl: cfg.cfl },
            output,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }
}
