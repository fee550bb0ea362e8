//! Exterior Dirichlet problem of the 2D Laplace equation solved through the
//! modified single-layer (modified Symm) boundary integral equation.
//!
//! The pipeline is built bottom-up:
//!
//! - [`geometry`]: analytic closed boundary curves.
//! - [`trig`]: real trigonometric polynomials on the equispaced grid `t_k = kπ/n`.
//! - [`kernel`]: the split of the modified logarithmic kernel into the pure
//!   log singularity, the smooth remainder `k(t,s)` and the curve term `g3(t)`.
//! - [`quadrature`]: weights for the log part, the discrete operator and its
//!   dense assembly over the nodal basis.
//! - [`solvers`]: least squares, dual least squares, Bubnov-Galerkin and
//!   Galerkin-Collocation.
//! - [`potential`]: the exterior field, its far-field limit and the
//!   near-boundary error grid.
//! - [`harness`]: configuration, experiment sweeps and CSV output.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod kernel;
pub mod potential;
pub mod quadrature;
pub mod solvers;
pub mod trig;

pub use error::{Error, Result};
pub use geometry::BoundaryCurve;
pub use kernel::{Convention, KernelParts};
pub use potential::ExteriorField;
pub use quadrature::DiscreteOperator;
pub use solvers::{MethodKind, Problem, SolveReport};
pub use trig::{NodalValues, TrigPoly};
