//! Filtered stochastic Galerkin, intrusive polynomial moment and collocation
//! solvers for hyperbolic conservation laws with one uniformly distributed
//! random parameter.

// `!(x > 0.0)` style checks deliberately reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod basis;
pub mod error;
pub mod field;
pub mod filter;
pub mod ipm;
pub mod mesh;
pub mod physics;
pub mod quadrature;
pub mod reference;
pub mod scenario;
pub mod solver;

pub use basis::GpcBasis;
pub use error::{Error, Result};
pub use field::MomentField;
pub use filter::{FilterConfig, FilterKind};
pub use mesh::Mesh;
pub use physics::Physics;
pub use scenario::{ClosureKind, Scenario};
pub use solver::{RunReport, Solution, Solver};
