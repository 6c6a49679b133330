//! Adaptive sparse-grid stochastic collocation finite element solver.
//!
//! Solves `-div(a(y, x) grad u(y, x)) = f(x)` on the unit square with homogeneous
//! Dirichlet data, where the diffusion coefficient depends affinely on a parameter
//! vector `y` drawn from a box `Γ = [-1, 1]^N`. The parametric dependence is
//! resolved by Clenshaw–Curtis sparse-grid collocation on a downward-closed
//! multi-index set, and every collocation point carries its own adaptively refined
//! P1 finite element mesh.
//!
//! Module map:
//!
//! - [`multiindex`]: multi-index sets, margins, reduced enrichment sets.
//! - [`sparse_grid`]: nested nodes, combination technique, hierarchical surpluses.
//! - [`mesh`]: conforming triangulations and newest-vertex bisection.
//! - [`fem`]: P1 assembly, solve and the residual error indicator.
//! - [`estimators`]: parametric and finite element error estimators.
//! - [`adaptive`]: the coupled adaptive drivers.
//! - [`problems`]: benchmark and test problem definitions.
//! - [`cli`]: the experiment runner behind the `scfem` binary.

pub mod adaptive;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod fem;
pub mod mesh;
pub mod multiindex;
pub mod problems;
pub mod sparse_grid;

pub use error::{Error, Result};
