//! Fixed-point solution of the full vector Fredholm equation for one `q`,
//! without expanding in `q`.
//!
//! Each sweep first picks `ε` so that the right-hand side has no pole at
//! `k = 0`,
//!
//! ```text
//! q T̂₁(0) ε = (2−q) g_T T̂₂(0)(−1,1)ᵀ − (q/π)∫ T̂₁(k₁) E(k₁) dk₁,
//! ```
//!
//! then divides out `k²` analytically:
//!
//! ```text
//! T̂₂(k) E_new(k) = q T̂₃(k) ε − (2−q) g_T T̂₄(k)(−1,1)ᵀ + (q/π)∫ Ĵ₃(k,k₁) E(k₁) dk₁.
//! ```
//!
//! Starting from `E ≡ 0` the iterates are the partial sums of the
//! q-expansion, so the fixed point is what the series converges to.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::density::SpectralDensity;
use crate::error::{Error, Result};
use crate::kernels::{solve2, Vec2};
use crate::neumann::check_accommodation;
use crate::system::{FredholmSystem, GRADIENT_DIRECTION};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointOptions {
    /// Bound on both the sweep-to-sweep change and the Fredholm residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Under-relaxation factor `ω ∈ (0, 1]`; `1` is plain Picard.
    pub relaxation: f64,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            relaxation: 1.0,
        }
    }
}

impl FixedPointOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Tolerance(self.tol));
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::Relaxation(self.relaxation));
        }
        Ok(())
    }
}

/// One sweep of the iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sweep {
    pub eps: Vec2,
    /// Sup-norm change of `(E, ε)` relative to the previous sweep.
    pub change: f64,
}

#[derive(Debug, Clone)]
pub struct DirectSolution {
    pub q: f64,
    pub g_t: f64,
    /// `(ε_n, ε_T)`.
    pub eps: Vec2,
    pub density: SpectralDensity,
    pub iterations: usize,
    pub final_residual: f64,
    pub sweeps: Vec<Sweep>,
}

pub struct DirectSolver<'a> {
    system: &'a FredholmSystem,
}

impl<'a> DirectSolver<'a> {
    pub fn new(system: &'a FredholmSystem) -> Self {
        Self { system }
    }

    /// `ε` that removes the pole of the right-hand side for the density `e`.
    pub fn solvable_jumps(&self, q: f64, g_t: f64, e: &SpectralDensity) -> Vec2 {
        let sys = self.system;
        let source = sys.t2_zero() * GRADIENT_DIRECTION * ((2.0 - q) * g_t);
        let coupling = sys.t1_moment(e.values()) * q;
        sys.t1_zero_inv() * (source - coupling) * (1.0 / q)
    }

    /// One Picard step: returns the new `ε` and the new density.
    pub fn sweep(&self, q: f64, g_t: f64, e: &SpectralDensity) -> Result<(Vec2, SpectralDensity)> {
        let sys = self.system;
        let eps = self.solvable_jumps(q, g_t, e);
        let source = (2.0 - q) * g_t;
        let coupling = sys.j3_coupling(e.values());
        let values = sys
            .families()
            .iter()
            .zip(coupling)
            .map(|(f, c)| {
                solve2(
                    &f.t2,
                    f.t3 * eps * q - f.t4 * GRADIENT_DIRECTION * source + c * q,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((eps, SpectralDensity::new(Arc::clone(sys.grid()), values)?))
    }

    pub fn solve_fixed_point(
        &self,
        q: f64,
        g_t: f64,
        options: &FixedPointOptions,
    ) -> Result<DirectSolution> {
        check_accommodation(q)?;
        options.validate()?;
        let omega = options.relaxation;

        let mut density = SpectralDensity::zeros(Arc::clone(self.system.grid()));
        let mut eps = Vec2::ZERO;
        let mut sweeps = Vec::new();
        let mut last = f64::INFINITY;

        for iteration in 1..=options.max_iter {
            let (eps_new, mut next) = self.sweep(q, g_t, &density)?;
            if omega < 1.0 {
                next = next.scaled(omega);
                next.add_scaled(&density, 1.0 - omega);
            }
            let eps_next = if omega < 1.0 && iteration > 1 {
                eps_new * omega + eps * (1.0 - omega)
            } else {
                eps_new
            };
            let change = next
                .values()
                .iter()
                .zip(density.values())
                .map(|(&a, &b)| (a - b).max_abs())
                .fold((eps_next - eps).max_abs(), f64::max);
            density = next;
            eps = eps_next;
            sweeps.push(Sweep { eps, change });
            last = change;
            log::trace!("sweep {iteration}: change {change:e}");

            if !change.is_finite() {
                break;
            }
            if change < options.tol {
                let residual = self.residual_of(eps, &density, q, g_t);
                if residual < options.tol {
                    return Ok(DirectSolution {
                        q,
                        g_t,
                        eps,
                        density,
                        iterations: iteration,
                        final_residual: residual,
                        sweeps,
                    });
                }
            }
        }

        Err(Error::Divergence {
            iterations: sweeps.len(),
            last,
            history: sweeps.iter().map(|s| s.change).collect(),
        })
    }

    /// Residual certificate of a solution.
    pub fn fredholm_residual(&self, sol: &DirectSolution, q: f64, g_t: f64) -> f64 {
        self.residual_of(sol.eps, &sol.density, q, g_t)
    }

    /// `sup_k ‖L(k)E(k) + qT̂₁(k)ε − (2−q)g_T T̂₂(k)(−1,1)ᵀ + (q/π)∫Ĵ(k,k₁)E(k₁)dk₁‖`
    /// over the grid nodes.
    pub fn residual_of(&self, eps: Vec2, density: &SpectralDensity, q: f64, g_t: f64) -> f64 {
        let sys = self.system;
        let coupling = sys.j_coupling(density.values());
        let source = (2.0 - q) * g_t;
        sys.grid()
            .nodes()
            .iter()
            .zip(sys.families())
            .zip(density.values())
            .zip(coupling)
            .map(|(((&k, f), &e), c)| {
                let r = f.t2 * e * (k * k) + f.t1 * eps * q - f.t2 * GRADIENT_DIRECTION * source
                    + c * q;
                r.max_abs()
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neumann::NeumannSolver;
    use crate::system::SolverConfig;
    use std::sync::OnceLock;

    fn system() -> &'static FredholmSystem {
        static SYS: OnceLock<FredholmSystem> = OnceLock::new();
        SYS.get_or_init(|| {
            FredholmSystem::new(SolverConfig {
                mu_nodes: 32,
                k_nodes: 80,
                map_scale: 1.0,
            })
            .unwrap()
        })
    }

    #[test]
    fn first_sweep_is_zero_order_term() {
        let d = DirectSolver::new(system());
        let n = NeumannSolver::new(system());
        let q = 0.4;
        let zero = SpectralDensity::zeros(Arc::clone(system().grid()));
        let (eps, e) = d.sweep(q, 1.0, &zero).unwrap();
        let eps0 = n.zero_order_jumps();
        assert!((eps - eps0 * ((2.0 - q) / q)).max_abs() < 1e-12);
        let e0 = n.zero_order_density(eps0).unwrap();
        for (a, b) in e.values().iter().zip(e0.values()) {
            assert!((*a - *b * (2.0 - q)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn converges_with_certificate() {
        let d = DirectSolver::new(system());
        let opts = FixedPointOptions::with_tol(1e-9);
        let sol = d.solve_fixed_point(1.0, 1.0, &opts).unwrap();
        assert!(sol.final_residual < 1e-9);
        assert!(d.fredholm_residual(&sol, 1.0, 1.0) < 1e-8);
        assert_eq!(sol.iterations, sol.sweeps.len());
        let half = d.solve_fixed_point(0.5, 1.0, &opts).unwrap();
        assert!(half.iterations <= sol.iterations);
    }

    #[test]
    fn relaxation_reaches_same_fixed_point() {
        let d = DirectSolver::new(system());
        let plain = d
            .solve_fixed_point(1.0, 1.0, &FixedPointOptions::default())
            .unwrap();
        let opts = FixedPointOptions {
            relaxation: 0.7,
            ..FixedPointOptions::default()
        };
        let relaxed = d.solve_fixed_point(1.0, 1.0, &opts).unwrap();
        assert!((plain.eps - relaxed.eps).max_abs() < 1e-9);
        assert!(relaxed.iterations > plain.iterations);
    }

    #[test]
    fn linear_in_gradient() {
        let d = DirectSolver::new(system());
        let opts = FixedPointOptions::default();
        let a = d.solve_fixed_point(0.7, 1.0, &opts).unwrap();
        let b = d.solve_fixed_point(0.7, 3.0, &opts).unwrap();
        assert!((b.eps - a.eps * 3.0).max_abs() < 1e-9);
    }

    #[test]
    fn zero_density_is_not_a_solution() {
        let d = DirectSolver::new(system());
        let n = NeumannSolver::new(system());
        let zero = SpectralDensity::zeros(Arc::clone(system().grid()));
        for q in [0.1, 0.5, 1.0] {
            let eps = n.zero_order_jumps() * ((2.0 - q) / q);
            assert!(d.residual_of(eps, &zero, q, 1.0) > 1e-3);
        }
    }

    #[test]
    fn divergence_and_argument_errors() {
        let d = DirectSolver::new(system());
        let opts = FixedPointOptions {
            tol: 1e-30,
            max_iter: 3,
            relaxation: 1.0,
        };
        match d.solve_fixed_point(1.0, 1.0, &opts) {
            Err(Error::Divergence {
                iterations,
                history,
                ..
            }) => {
                assert_eq!(iterations, 3);
                assert_eq!(history.len(), 3);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
        let bad_tol = FixedPointOptions::with_tol(0.0);
        assert_eq!(
            d.solve_fixed_point(1.0, 1.0, &bad_tol).unwrap_err(),
            Error::Tolerance(0.0)
        );
        let bad_omega = FixedPointOptions {
            relaxation: 1.5,
            ..FixedPointOptions::default()
        };
        assert_eq!(
            d.solve_fixed_point(1.0, 1.0, &bad_omega).unwrap_err(),
            Error::Relaxation(1.5)
        );
        assert_eq!(
            d.solve_fixed_point(0.0, 1.0, &FixedPointOptions::default())
                .unwrap_err(),
            Error::Accommodation(0.0)
        );
    }
}
