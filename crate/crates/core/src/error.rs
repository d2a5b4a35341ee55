use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature rule needs between {min} and {max} nodes, got {got}")]
    NodeCount { got: usize, min: usize, max: usize },

    #[error("map scale must be positive and finite, got {0}")]
    MapScale(f64),

    #[error("integrand is not finite at node {node}: {value}")]
    NonFiniteIntegrand { node: f64, value: f64 },

    #[error("moment index {0} is outside 0..=8")]
    MomentIndex(usize),

    #[error("matrix family index {0} is outside 1..=4")]
    FamilyIndex(usize),

    #[error("matrix is numerically singular (det = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("zero-order pair violates eps_n = -eps_T/2 (eps_n = {eps_n}, eps_T = {eps_t})")]
    InconsistentEps { eps_n: f64, eps_t: f64 },

    #[error("accommodation coefficient must lie in (0, 1], got {0}")]
    Accommodation(f64),

    #[error("truncation order {order} exceeds the supported maximum {max}")]
    Order { order: usize, max: usize },

    #[error("tolerance must be positive and finite, got {0}")]
    Tolerance(f64),

    #[error("relaxation factor must lie in (0, 1], got {0}")]
    Relaxation(f64),

    #[error(
        "fixed-point iteration did not converge in {iterations} sweeps (last change {last:e})"
    )]
    Divergence {
        iterations: usize,
        last: f64,
        history: Vec<f64>,
    },

    #[error("density has {got} values but the grid has {expected} nodes")]
    DensityLength { expected: usize, got: usize },

    #[error("invalid profile grid: {0}")]
    ProfileGrid(String),
}
