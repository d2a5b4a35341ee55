//! Temperature and concentration jump coefficients for a rarefied gas at a
//! wall with Maxwell (specular–diffuse) reflection, in the linearized BGK
//! model.
//!
//! The half-space problem is reduced to a vector Fredholm equation for a
//! spectral density `E(k)`. [`neumann`] solves it as a power series in the
//! accommodation coefficient `q`; [`direct`] solves it by fixed-point
//! iteration for one `q` and serves as a cross-check.

pub mod benchmark;
pub mod density;
pub mod direct;
pub mod error;
pub mod fields;
pub mod kernels;
pub mod neumann;
pub mod quadrature;
pub mod system;

pub use density::SpectralDensity;
pub use direct::{DirectSolution, DirectSolver, FixedPointOptions};
pub use error::{Error, Result};
pub use fields::{boundary_distribution, macroscopic_profile, MomentProfile};
pub use kernels::{KineticKernels, Matrix2, Vec2};
pub use neumann::{first_order_jumps, JumpResult, NeumannSeries, NeumannSolver};
pub use quadrature::{build_algebraic_halfline_rule, build_gaussian_halfline_rule, QuadratureRule};
pub use system::{FredholmSystem, SolverConfig};
