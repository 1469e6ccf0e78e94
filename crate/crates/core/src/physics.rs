//! Deterministic physics: Burgers' equation and the compressible Euler
//! equations, with the pointwise numerical fluxes lifted to moment space by
//! the solver.

use crate::error::{Error, Result};

/// Flux direction on a Cartesian grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Physics {
    Burgers,
    Euler1d { gamma: f64 },
    Euler2d { gamma: f64 },
}

impl Physics {
    /// Number of conserved states p.
    pub fn states(&self) -> usize {
        match self {
            Physics::Burgers => 1,
            Physics::Euler1d { .. } => 3,
            Physics::Euler2d { .. } => 4,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Physics::Euler2d { .. } => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Physics::Burgers => "burgers",
            Physics::Euler1d { .. } => "euler1d",
            Physics::Euler2d { .. } => "euler2d",
        }
    }

    pub fn gamma(&self) -> Option<f64> {
        match *self {
            Physics::Burgers => None,
            Physics::Euler1d { gamma } | Physics::Euler2d { gamma } => Some(gamma),
        }
    }

    /// Largest characteristic speed magnitude of one state in `dir`.
    pub fn max_speed(&self, u: &[f64], dir: Direction) -> Result<f64> {
        match *self {
            Physics::Burgers => Ok(u[0].abs()),
            Physics::Euler1d { gamma } | Physics::Euler2d { gamma } => {
                let prim = primitive(u, gamma)?;
                Ok(prim.normal_velocity(dir).abs() + prim.sound_speed(gamma))
            }
        }
    }

    /// Physical flux of one state in `dir`.
    pub fn flux(&self, u: &[f64], dir: Direction, out: &mut [f64]) -> Result<()> {
        match *self {
            Physics::Burgers => {
                out[0] = burgers_flux(u[0]);
                Ok(())
            }
            Physics::Euler1d { gamma } | Physics::Euler2d { gamma } => euler_flux(u, gamma, dir, out),
        }
    }

    /// Pointwise numerical flux: global Lax-Friedrichs with dissipation
    /// `alpha` for Burgers, HLL for Euler.
    pub fn numerical_flux(
        &self,
        ul: &[f64],
        ur: &[f64],
        dir: Direction,
        alpha: f64,
        out: &mut [f64],
    ) -> Result<()> {
        match *self {
            Physics::Burgers => {
                out[0] = lax_friedrichs_scalar(ul[0], ur[0], burgers_flux, alpha);
                Ok(())
            }
            Physics::Euler1d { gamma } | Physics::Euler2d { gamma } => hll(ul, ur, gamma, dir, out),
        }
    }

    /// Mirror a state across a wall with normal `dir` (negates the normal momentum).
    pub fn reflect(&self, u: &mut [f64], dir: Direction) {
        match self {
            Physics::Burgers => {}
            Physics::Euler1d { .. } => u[1] = -u[1],
            Physics::Euler2d { .. } => match dir {
                Direction::X => u[1] = -u[1],
                Direction::Y => u[2] = -u[2],
            },
        }
    }

    /// Index of the momentum component normal to `dir`, if any.
    pub fn normal_momentum_index(&self, dir: Direction) -> Option<usize> {
        match (self, dir) {
            (Physics::Burgers, _) => None,
            (Physics::Euler1d { .. }, Direction::X) => Some(1),
            (Physics::Euler1d { .. }, Direction::Y) => None,
            (Physics::Euler2d { .. }, Direction::X) => Some(1),
            (Physics::Euler2d { .. }, Direction::Y) => Some(2),
        }
    }
}

/// u²/2.
#[inline]
pub fn burgers_flux(u: f64) -> f64 {
    0.5 * u * u
}

/// ½(f(u_l) + f(u_r)) - (α/2)(u_r - u_l) for a scalar flux.
#[inline]
pub fn lax_friedrichs_scalar(ul: f64, ur: f64, f: impl Fn(f64) -> f64, alpha: f64) -> f64 {
    0.5 * (f(ul) + f(ur)) - 0.5 * alpha * (ur - ul)
}

/// Componentwise Lax-Friedrichs flux from precomputed physical fluxes.
pub fn lax_friedrichs(ul: &[f64], ur: &[f64], fl: &[f64], fr: &[f64], alpha: f64, out: &mut [f64]) {
    for s in 0..out.len() {
        out[s] = 0.5 * (fl[s] + fr[s]) - 0.5 * alpha * (ur[s] - ul[s]);
    }
}

/// Primitive variables of an Euler state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub velocity: [f64; 2],
    pub pressure: f64,
}

impl Primitive {
    pub fn normal_velocity(&self, dir: Direction) -> f64 {
        match dir {
            Direction::X => self.velocity[0],
            Direction::Y => self.velocity[1],
        }
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.pressure / self.rho).sqrt()
    }
}

/// Conserved Euler state (ρ, ρu, [ρv,] ρe) together with γ.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerState {
    pub conserved: Vec<f64>,
    pub gamma: f64,
}

impl EulerState {
    /// Build from density, velocity components and pressure; the number of
    /// velocity components fixes the dimension.
    pub fn from_primitive(rho: f64, velocity: &[f64], pressure: f64, gamma: f64) -> Self {
        let kinetic: f64 = velocity.iter().map(|v| v * v).sum::<f64>() * 0.5 * rho;
        let mut conserved = Vec::with_capacity(velocity.len() + 2);
        conserved.push(rho);
        conserved.extend(velocity.iter().map(|v| rho * v));
        conserved.push(pressure / (gamma - 1.0) + kinetic);
        Self { conserved, gamma }
    }

    pub fn pressure(&self) -> Result<f64> {
        pressure(&self.conserved, self.gamma)
    }

    pub fn primitive(&self) -> Result<Primitive> {
        primitive(&self.conserved, self.gamma)
    }
}

/// p = (γ-1)(ρe - ½ρ|u|²) for a 1D or 2D conserved state.
pub fn pressure(u: &[f64], gamma: f64) -> Result<f64> {
    let rho = u[0];
    if !(rho > 0.0) {
        return Err(Error::Inadmissible(format!("density {rho} is not positive")));
    }
    let energy = u[u.len() - 1];
    let mom2: f64 = u[1..u.len() - 1].iter().map(|m| m * m).sum();
    Ok((gamma - 1.0) * (energy - 0.5 * mom2 / rho))
}

/// Primitive variables; fails unless ρ > 0 and p > 0.
pub fn primitive(u: &[f64], gamma: f64) -> Result<Primitive> {
    let p = pressure(u, gamma)?;
    if !(p > 0.0) {
        return Err(Error::Inadmissible(format!("pressure {p} is not positive")));
    }
    let rho = u[0];
    let mut velocity = [0.0; 2];
    for (d, m) in u[1..u.len() - 1].iter().enumerate() {
        velocity[d] = m / rho;
    }
    Ok(Primitive { rho, velocity, pressure: p })
}

/// Physical Euler flux in direction `dir`.
pub fn euler_flux(u: &[f64], gamma: f64, dir: Direction, out: &mut [f64]) -> Result<()> {
    let prim = primitive(u, gamma)?;
    euler_flux_from(u, &prim, dir, out);
    Ok(())
}

fn euler_flux_from(u: &[f64], prim: &Primitive, dir: Direction, out: &mut [f64]) {
    let un = prim.normal_velocity(dir);
    let last = u.len() - 1;
    out[0] = u[0] * un;
    for k in 1..last {
        out[k] = u[k] * un;
    }
    let normal = match dir {
        Direction::X => 1,
        Direction::Y => 2,
    };
    out[normal] += prim.pressure;
    out[last] = (u[last] + prim.pressure) * un;
}

/// HLL flux with Davis wave-speed estimates
/// S_L = min(u_l - c_l, u_r - c_r), S_R = max(u_l + c_l, u_r + c_r).
pub fn hll(ul: &[f64], ur: &[f64], gamma: f64, dir: Direction, out: &mut [f64]) -> Result<()> {
    let pl = primitive(ul, gamma)?;
    let pr = primitive(ur, gamma)?;
    let (unl, unr) = (pl.normal_velocity(dir), pr.normal_velocity(dir));
    let (cl, cr) = (pl.sound_speed(gamma), pr.sound_speed(gamma));
    let sl = (unl - cl).min(unr - cr);
    let sr = (unl + cl).max(unr + cr);
    if sl >= 0.0 {
        euler_flux_from(ul, &pl, dir, out);
        return Ok(());
    }
    if sr <= 0.0 {
        euler_flux_from(ur, &pr, dir, out);
        return Ok(());
    }
    let p = ul.len();
    let mut fl = [0.0; 4];
    let mut fr = [0.0; 4];
    euler_flux_from(ul, &pl, dir, &mut fl[..p]);
    euler_flux_from(ur, &pr, dir, &mut fr[..p]);
    let inv = 1.0 / (sr - sl);
    for s in 0..p {
        out[s] = (sr * fl[s] - sl * fr[s] + sl * sr * (ur[s] - ul[s])) * inv;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAMMA: f64 = 1.4;

    #[test]
    fn burgers_examples() {
        assert_eq!(burgers_flux(0.0), 0.0);
        assert_eq!(burgers_flux(12.0), 72.0);
        assert_eq!(burgers_flux(-2.0), 2.0);
    }

    #[test]
    fn pressure_examples() {
        let left = EulerState::from_primitive(1.0, &[0.0], 1.0, GAMMA);
        assert!((left.pressure().unwrap() - 1.0).abs() < 1e-15);
        let right = EulerState::from_primitive(0.3, &[0.0], 0.3, GAMMA);
        assert!((right.pressure().unwrap() - 0.3).abs() < 1e-15);
        // e = u²/2: no internal energy
        let cold = [2.0, 2.0 * 3.0, 2.0 * 0.5 * 9.0];
        assert_eq!(pressure(&cold, GAMMA).unwrap(), 0.0);
        assert!(matches!(pressure(&[0.0, 0.0, 1.0], GAMMA), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn lax_friedrichs_examples() {
        let alpha = 0.0075 / 5e-4;
        assert_eq!(lax_friedrichs_scalar(3.0, 3.0, burgers_flux, alpha), 4.5);
        let v = lax_friedrichs_scalar(12.0, 1.0, burgers_flux, alpha);
        assert!((v - (0.5 * 72.5 + 0.5 * alpha * 11.0)).abs() < 1e-12);
        assert_eq!(lax_friedrichs_scalar(1.0, 3.0, |_| 0.0, 2.0), -2.0);
    }

    #[test]
    fn hll_is_consistent() {
        for (rho, u, v, p) in [(1.0, 0.0, 0.0, 1.0), (0.3, 0.7, -0.2, 0.3), (2.0, -1.5, 0.4, 5.0)] {
            let st = EulerState::from_primitive(rho, &[u, v], p, GAMMA).conserved;
            for dir in [Direction::X, Direction::Y] {
                let mut f = [0.0; 4];
                let mut h = [0.0; 4];
                euler_flux(&st, GAMMA, dir, &mut f).unwrap();
                hll(&st, &st, GAMMA, dir, &mut h).unwrap();
                for s in 0..4 {
                    assert!((f[s] - h[s]).abs() < 1e-13 * (1.0 + f[s].abs()));
                }
            }
        }
    }

    #[test]
    fn hll_upwinds_supersonic_data() {
        let ul = EulerState::from_primitive(1.0, &[-5.0], 1.0, GAMMA).conserved;
        let ur = EulerState::from_primitive(0.5, &[-4.0], 0.4, GAMMA).conserved;
        let mut h = [0.0; 3];
        let mut f = [0.0; 3];
        hll(&ul, &ur, GAMMA, Direction::X, &mut h).unwrap();
        euler_flux(&ur, GAMMA, Direction::X, &mut f).unwrap();
        assert_eq!(h, f);
    }

    #[test]
    fn hll_rotational_consistency() {
        let a = EulerState::from_primitive(1.0, &[0.3, -0.6], 1.0, GAMMA).conserved;
        let b = EulerState::from_primitive(0.8, &[-0.1, 0.2], 0.3, GAMMA).conserved;
        let swap = |u: &[f64]| vec![u[0], u[2], u[1], u[3]];
        let mut fx = [0.0; 4];
        let mut fy = [0.0; 4];
        hll(&swap(&a), &swap(&b), GAMMA, Direction::X, &mut fx).unwrap();
        hll(&a, &b, GAMMA, Direction::Y, &mut fy).unwrap();
        let fy_swapped = swap(&fy);
        for s in 0..4 {
            assert!((fx[s] - fy_swapped[s]).abs() < 1e-14);
        }
    }

    #[test]
    fn inadmissible_state_rejected() {
        let good = EulerState::from_primitive(1.0, &[0.0], 1.0, GAMMA).conserved;
        let bad = [1.0, 0.0, -0.1];
        let mut out = [0.0; 3];
        assert!(matches!(hll(&good, &bad, GAMMA, Direction::X, &mut out), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn wave_speeds() {
        assert_eq!(Physics::Burgers.max_speed(&[12.0], Direction::X).unwrap(), 12.0);
        assert_eq!(Physics::Burgers.max_speed(&[0.0], Direction::X).unwrap(), 0.0);
        let rest = EulerState::from_primitive(1.0, &[0.0], 1.0, GAMMA).conserved;
        let c = Physics::Euler1d { gamma: GAMMA }.max_speed(&rest, Direction::X).unwrap();
        assert!((c - GAMMA.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn slip_wall_has_no_mass_flux() {
        let phys = Physics::Euler2d { gamma: GAMMA };
        let inner = EulerState::from_primitive(0.9, &[0.4, 0.7], 0.6, GAMMA).conserved;
        let mut ghost = inner.clone();
        phys.reflect(&mut ghost, Direction::X);
        let mut f = [0.0; 4];
        phys.numerical_flux(&inner, &ghost, Direction::X, 0.0, &mut f).unwrap();
        assert_eq!(f[0], 0.0);
        assert_eq!(f[3], 0.0);
    }
}
