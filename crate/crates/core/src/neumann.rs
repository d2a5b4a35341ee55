//! Expansion of the solution in powers of the accommodation coefficient `q`.
//!
//! With `E = (2−q)g_T Σ E_m q^m` and `ε = ((2−q)/q) g_T Σ ε^m q^m` the
//! Fredholm equation splits into a chain
//!
//! ```text
//! k² T̂₂(k) E₀ = −T̂₁(k) ε⁰ + T̂₂(k)(−1,1)ᵀ
//! k² T̂₂(k) E_m = −T̂₁(k) ε^m − (1/π)∫ Ĵ(k,k₁) E_{m−1}(k₁) dk₁
//! ```
//!
//! whose right-hand sides have a double pole at `k = 0` unless `ε^m` is
//! chosen to cancel it. Splitting `T̂_n(k) = T̂_n(0) − k² T̂_{n+2}(k)` and
//! `Ĵ(k,k₁) = T̂₁(k₁) − k² Ĵ₃(k,k₁)` separates the pole part (which fixes
//! `ε^m`) from the regular part (which gives `E_m`).

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::density::SpectralDensity;
use crate::error::{Error, Result};
use crate::kernels::{solve2, Matrix2, Vec2};
use crate::system::{FredholmSystem, GRADIENT_DIRECTION};

/// Highest order of the expansion the solver will build.
pub const MAX_ORDER: usize = 5;
pub const DEFAULT_ORDER: usize = 1;

/// One term of the expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesOrder {
    pub m: usize,
    /// `(ε_n^m, ε_T^m)`.
    pub eps: Vec2,
    /// `E_m` on the k-grid.
    pub density: SpectralDensity,
    /// Norm of the residual of the pole-removal condition that fixed `eps`.
    pub pole_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesDiagnostics {
    pub mu_nodes: usize,
    pub k_nodes: usize,
    pub map_scale: f64,
    /// Pole-removal residual for each computed order.
    pub pole_residuals: Vec<f64>,
}

/// Jump coefficients assembled for one `(q, g_T, M)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpResult {
    pub q: f64,
    pub g_t: f64,
    pub order: usize,
    pub eps_n: f64,
    pub eps_t: f64,
    /// `(ε_n^m, ε_T^m)` for `m = 0..=order`, independent of `q` and `g_T`.
    pub coefficients: Vec<Vec2>,
    pub diagnostics: SeriesDiagnostics,
}

/// The computed orders `0..=M` of the expansion.
#[derive(Debug, Clone)]
pub struct NeumannSeries {
    orders: Vec<SeriesOrder>,
    diagnostics: SeriesDiagnostics,
}

impl NeumannSeries {
    pub fn orders(&self) -> &[SeriesOrder] {
        &self.orders
    }

    pub fn max_order(&self) -> usize {
        self.orders.len() - 1
    }

    pub fn coefficients(&self) -> Vec<Vec2> {
        self.orders.iter().map(|o| o.eps).collect()
    }

    /// `((2−q)/q) g_T Σ_{m≤order} ε^m q^m`.
    pub fn assemble(&self, q: f64, g_t: f64, order: usize) -> Result<JumpResult> {
        check_accommodation(q)?;
        if order > self.max_order() {
            return Err(Error::Order {
                order,
                max: self.max_order(),
            });
        }
        let coefficients: Vec<Vec2> = self.orders[..=order].iter().map(|o| o.eps).collect();
        let poly = coefficients
            .iter()
            .rev()
            .fold(Vec2::ZERO, |acc, &c| acc * q + c);
        let eps = poly * ((2.0 - q) / q * g_t);
        let mut diagnostics = self.diagnostics.clone();
        diagnostics.pole_residuals.truncate(order + 1);
        Ok(JumpResult {
            q,
            g_t,
            order,
            eps_n: eps.v1,
            eps_t: eps.v2,
            coefficients,
            diagnostics,
        })
    }

    /// `E(k) = (2−q) g_T Σ_{m≤order} E_m(k) q^m` on the grid.
    pub fn assembled_density(&self, q: f64, g_t: f64, order: usize) -> Result<SpectralDensity> {
        check_accommodation(q)?;
        if order > self.max_order() {
            return Err(Error::Order {
                order,
                max: self.max_order(),
            });
        }
        let prefactor = (2.0 - q) * g_t;
        let mut total = SpectralDensity::zeros(Arc::clone(self.orders[0].density.grid()));
        let mut power = 1.0;
        for o in &self.orders[..=order] {
            total.add_scaled(&o.density, prefactor * power);
            power *= q;
        }
        Ok(total)
    }
}

pub(crate) fn check_accommodation(q: f64) -> Result<()> {
    if q.is_finite() && q > 0.0 && q <= 1.0 {
        Ok(())
    } else {
        Err(Error::Accommodation(q))
    }
}

/// Closed form of `ε¹ = −T̂₁⁻¹(0)·D`:
/// `ε_n¹ = −(3√π/8)(3D₁−D₂)`, `ε_T¹ = (√π/4)(D₁−3D₂)`.
pub fn first_order_jumps(d: Vec2) -> Vec2 {
    let sp = PI.sqrt();
    Vec2::new(
        -3.0 * sp / 8.0 * (3.0 * d.v1 - d.v2),
        sp / 4.0 * (d.v1 - 3.0 * d.v2),
    )
}

pub struct NeumannSolver<'a> {
    system: &'a FredholmSystem,
}

impl<'a> NeumannSolver<'a> {
    pub fn new(system: &'a FredholmSystem) -> Self {
        Self { system }
    }

    pub fn system(&self) -> &FredholmSystem {
        self.system
    }

    /// `ε⁰` from `T̂₁(0)ε⁰ = T̂₂(0)(−1,1)ᵀ`; analytically `(−5√π/16, 5√π/8)`.
    pub fn zero_order_jumps(&self) -> Vec2 {
        self.system.t1_zero_inv() * (self.system.t2_zero() * GRADIENT_DIRECTION)
    }

    /// `C(k) = T̂₃(k)ε⁰ − T̂₄(k)(−1,1)ᵀ` written out with `ε_n⁰ = −ε_T⁰/2`
    /// substituted.
    pub fn c_vector(&self, k: f64, eps0: Vec2) -> Result<Vec2> {
        check_zero_order_relation(eps0)?;
        let t = self.system.kernels().moments(k);
        let e = eps0.v2;
        let c1 = e * (t[5] - t[3]) + 1.5 * t[4] - t[6];
        let c2 =
            2.0 / 3.0 * (e * (t[7] - 1.5 * t[5] + 1.5 * t[3]) + 2.0 * t[6] - t[8] - 1.75 * t[4]);
        Ok(Vec2::new(c1, c2))
    }

    /// `E₀(k) = T̂₂⁻¹(k) C(k)` at any `k ≥ 0`, including `k = 0`.
    pub fn zero_order_density_at(&self, k: f64, eps0: Vec2) -> Result<Vec2> {
        let c = self.c_vector(k, eps0)?;
        let t2 = self.system.kernels().t_hat(2, k)?;
        solve2(&t2, c)
    }

    /// `E₀` on the k-grid.
    pub fn zero_order_density(&self, eps0: Vec2) -> Result<SpectralDensity> {
        let values = self
            .system
            .families()
            .iter()
            .map(|f| solve2(&f.t2, f.t3 * eps0 - f.t4 * GRADIENT_DIRECTION))
            .collect::<Result<Vec<_>>>()?;
        SpectralDensity::new(Arc::clone(self.system.grid()), values)
    }

    /// `(D₁, D₂) = (1/π)∫₀^∞ T̂₁(k) E₀(k) dk`.
    pub fn d_integrals(&self, e0: &SpectralDensity) -> Vec2 {
        self.system.t1_moment(e0.values())
    }

    /// `ε^m = −T̂₁⁻¹(0)(1/π)∫₀^∞ T̂₁(k₁) E_{m−1}(k₁) dk₁`.
    pub fn next_order_jumps(&self, prev: &SpectralDensity) -> Vec2 {
        -(self.system.t1_zero_inv() * self.d_integrals(prev))
    }

    /// `E_m(k) = T̂₂⁻¹(k)[T̂₃(k)ε^m + (1/π)∫₀^∞ Ĵ₃(k,k₁) E_{m−1}(k₁) dk₁]` on the grid.
    pub fn next_order_density(
        &self,
        eps_m: Vec2,
        prev: &SpectralDensity,
    ) -> Result<SpectralDensity> {
        let coupling = self.system.j3_coupling(prev.values());
        let values = self
            .system
            .families()
            .iter()
            .zip(coupling)
            .map(|(f, c)| solve2(&f.t2, f.t3 * eps_m + c))
            .collect::<Result<Vec<_>>>()?;
        SpectralDensity::new(Arc::clone(self.system.grid()), values)
    }

    /// Value of `E_m` at an arbitrary `k` (e.g. `k = 0`) from the order-m
    /// formula, using the stored `E_{m−1}` for the coupling integral.
    pub fn next_order_density_at(
        &self,
        k: f64,
        eps_m: Vec2,
        prev: &SpectralDensity,
    ) -> Result<Vec2> {
        let kernels = self.system.kernels();
        let mut coupling = Vec2::ZERO;
        for ((&k1, &w), &v) in prev
            .nodes()
            .iter()
            .zip(prev.grid().weights())
            .zip(prev.values())
        {
            coupling += kernels.j3_kernel(k, k1) * v * w;
        }
        let rhs = kernels.t_hat(3, k)? * eps_m + coupling * (1.0 / PI);
        solve2(&kernels.t_hat(2, k)?, rhs)
    }

    /// `‖T̂₁(0)ε^m + (1/π)∫T̂₁E_{m−1}‖_max` (m ≥ 1) or
    /// `‖T̂₁(0)ε⁰ − T̂₂(0)(−1,1)ᵀ‖_max` (m = 0).
    pub fn pole_residual(&self, eps_m: Vec2, prev: Option<&SpectralDensity>) -> f64 {
        let t1_zero: Matrix2 = self.system.t1_zero();
        match prev {
            None => (t1_zero * eps_m - self.system.t2_zero() * GRADIENT_DIRECTION).max_abs(),
            Some(p) => (t1_zero * eps_m + self.d_integrals(p)).max_abs(),
        }
    }

    /// Orders `0..=max_order` of the expansion.
    pub fn series(&self, max_order: usize) -> Result<NeumannSeries> {
        if max_order > MAX_ORDER {
            return Err(Error::Order {
                order: max_order,
                max: MAX_ORDER,
            });
        }
        let eps0 = self.zero_order_jumps();
        let e0 = self.zero_order_density(eps0)?;
        let mut orders = vec![SeriesOrder {
            m: 0,
            eps: eps0,
            pole_residual: self.pole_residual(eps0, None),
            density: e0,
        }];
        for m in 1..=max_order {
            let prev = &orders[m - 1].density;
            let eps = self.next_order_jumps(prev);
            let pole_residual = self.pole_residual(eps, Some(prev));
            let density = self.next_order_density(eps, prev)?;
            log::debug!("order {m}: eps = ({:.8}, {:.8})", eps.v1, eps.v2);
            orders.push(SeriesOrder {
                m,
                eps,
                density,
                pole_residual,
            });
        }
        let cfg = self.system.config();
        let diagnostics = SeriesDiagnostics {
            mu_nodes: cfg.mu_nodes,
            k_nodes: cfg.k_nodes,
            map_scale: cfg.map_scale,
            pole_residuals: orders.iter().map(|o| o.pole_residual).collect(),
        };
        Ok(NeumannSeries {
            orders,
            diagnostics,
        })
    }

    /// Jump coefficients for `q ∈ (0, 1]`, gradient `g_T`, truncated at `order`.
    pub fn assemble_series(&self, q: f64, g_t: f64, order: usize) -> Result<JumpResult> {
        check_accommodation(q)?;
        self.series(order)?.assemble(q, g_t, order)
    }
}

fn check_zero_order_relation(eps0: Vec2) -> Result<()> {
    let scale = eps0.max_abs().max(1.0);
    if (eps0.v1 + 0.5 * eps0.v2).abs() > 1e-9 * scale {
        return Err(Error::InconsistentEps {
            eps_n: eps0.v1,
            eps_t: eps0.v2,
        });
    }
    Ok(())
}
