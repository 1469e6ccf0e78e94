//! Uniform Cartesian meshes in one and two dimensions.

use crate::error::{Error, Result};

/// Condition imposed on an outer face of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// Ghost state given by the initial condition evaluated at the ghost cell.
    Dirichlet,
    /// Reflecting wall: mirrored state with the normal momentum negated.
    SlipWall,
}

impl BoundaryKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(Self::Dirichlet),
            "slip" | "slip_wall" | "wall" => Ok(Self::SlipWall),
            _ => Err(Error::Config(format!("unknown boundary kind '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Dirichlet => "dirichlet",
            Self::SlipWall => "slip",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Boundaries {
    pub left: BoundaryKind,
    pub right: BoundaryKind,
    pub bottom: BoundaryKind,
    pub top: BoundaryKind,
}

impl Boundaries {
    pub fn all(kind: BoundaryKind) -> Self {
        Self { left: kind, right: kind, bottom: kind, top: kind }
    }

    pub fn get(&self, side: Side) -> BoundaryKind {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
            Side::Bottom => self.bottom,
            Side::Top => self.top,
        }
    }
}

/// Axis-aligned square obstacle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Obstacle {
    pub center: [f64; 2],
    pub length: f64,
}

impl Obstacle {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let h = 0.5 * self.length;
        (x - self.center[0]).abs() <= h && (y - self.center[1]).abs() <= h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    dim: usize,
    nx: usize,
    ny: usize,
    x_range: (f64, f64),
    y_range: (f64, f64),
    dx: f64,
    dy: f64,
    active: Vec<bool>,
    boundaries: Boundaries,
}

impl Mesh {
    /// 1D mesh of `nx` cells on [a, b].
    pub fn interval(a: f64, b: f64, nx: usize, left: BoundaryKind, right: BoundaryKind) -> Result<Self> {
        if nx == 0 || !(a < b) {
            return Err(Error::Config(format!("invalid interval mesh [{a}, {b}] with {nx} cells")));
        }
        Ok(Self {
            dim: 1,
            nx,
            ny: 1,
            x_range: (a, b),
            y_range: (0.0, 1.0),
            dx: (b - a) / nx as f64,
            dy: 1.0,
            active: vec![true; nx],
            boundaries: Boundaries {
                left,
                right,
                bottom: BoundaryKind::SlipWall,
                top: BoundaryKind::SlipWall,
            },
        })
    }

    /// 2D mesh on a rectangle. Cells whose centers fall inside an obstacle,
    /// or below `floor` when given, are inactive and act as slip walls.
    pub fn rectangle(
        x_range: (f64, f64),
        y_range: (f64, f64),
        nx: usize,
        ny: usize,
        boundaries: Boundaries,
        obstacles: &[Obstacle],
        floor: Option<f64>,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 || !(x_range.0 < x_range.1) || !(y_range.0 < y_range.1) {
            return Err(Error::Config(format!(
                "invalid rectangle mesh {x_range:?} × {y_range:?} with {nx}×{ny} cells"
            )));
        }
        let dx = (x_range.1 - x_range.0) / nx as f64;
        let dy = (y_range.1 - y_range.0) / ny as f64;
        let mut active = vec![true; nx * ny];
        for iy in 0..ny {
            for ix in 0..nx {
                let x = x_range.0 + (ix as f64 + 0.5) * dx;
                let y = y_range.0 + (iy as f64 + 0.5) * dy;
                let blocked = obstacles.iter().any(|o| o.contains(x, y)) || floor.is_some_and(|f| y < f);
                active[iy * nx + ix] = !blocked;
            }
        }
        if !active.iter().any(|&a| a) {
            return Err(Error::Config("mesh has no active cells".into()));
        }
        Ok(Self {
            dim: 2,
            nx,
            ny,
            x_range,
            y_range,
            dx,
            dy,
            active,
            boundaries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    pub fn x_range(&self) -> (f64, f64) {
        self.x_range
    }

    pub fn y_range(&self) -> (f64, f64) {
        self.y_range
    }

    /// Cell volume (length in 1D).
    pub fn volume(&self) -> f64 {
        if self.dim == 1 {
            self.dx
        } else {
            self.dx * self.dy
        }
    }

    pub fn boundaries(&self) -> &Boundaries {
        &self.boundaries
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn is_active(&self, j: usize) -> bool {
        self.active[j]
    }

    pub fn active_mask(&self) -> &[bool] {
        &self.active
    }

    pub fn active_cells(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    /// Cell center; the y coordinate is 0 in 1D.
    pub fn center(&self, j: usize) -> [f64; 2] {
        let ix = j % self.nx;
        let iy = j / self.nx;
        let x = self.x_range.0 + (ix as f64 + 0.5) * self.dx;
        if self.dim == 1 {
            [x, 0.0]
        } else {
            [x, self.y_range.0 + (iy as f64 + 0.5) * self.dy]
        }
    }

    /// Index of the cell containing (x, y), if inside the domain.
    pub fn locate(&self, x: f64, y: f64) -> Option<usize> {
        let (a, b) = self.x_range;
        if !(a..=b).contains(&x) {
            return None;
        }
        let ix = (((x - a) / self.dx) as usize).min(self.nx - 1);
        let iy = if self.dim == 1 {
            0
        } else {
            let (c, d) = self.y_range;
            if !(c..=d).contains(&y) {
                return None;
            }
            (((y - c) / self.dy) as usize).min(self.ny - 1)
        };
        Some(self.index(ix, iy))
    }
}
