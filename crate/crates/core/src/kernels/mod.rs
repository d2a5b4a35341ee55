//! Scalar moments `T_m(k)` and the 2×2 matrix families built from the
//! kernel `K(μ)` of the vector kinetic equation.
//!
//! All μ-integrals are evaluated with one shared half-range Gaussian rule.
//! Every matrix here inherits `a21 = (2/3)·a12` from `K₂₁ = (2/3)K₁₂`.

mod linalg;

pub use linalg::{solve2, Matrix2, Vec2, DET_FLOOR};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{build_gaussian_halfline_rule, QuadratureRule};

pub const MAX_MOMENT: usize = 8;

/// Kernel of the vector equation:
/// `[[1, μ²−½], [⅔(μ²−½), ⅔((μ²−½)²+1)]]`.
pub fn matrix_kernel(mu: f64) -> Matrix2 {
    let d = mu * mu - 0.5;
    Matrix2::new(1.0, d, 2.0 / 3.0 * d, 2.0 / 3.0 * (d * d + 1.0))
}

/// Closed-form `T_m(0) = (2/√π)∫₀^∞ e^{-μ²} μ^m dμ`:
/// `(2n−1)!!/2ⁿ` for `m = 2n`, `n!/√π` for `m = 2n+1`.
pub fn t_moment_zero(m: usize) -> Result<f64> {
    if m > MAX_MOMENT {
        return Err(Error::MomentIndex(m));
    }
    let n = m / 2;
    let value = if m.is_multiple_of(2) {
        (1..=n).map(|i| (2 * i - 1) as f64 / 2.0).product()
    } else {
        (1..=n).map(|i| i as f64).product::<f64>() / PI.sqrt()
    };
    Ok(value)
}

/// Assembles `T̂_n` from `T_n, T_{n+2}, T_{n+4}`.
fn family_from_moments(tn: f64, tn2: f64, tn4: f64) -> Matrix2 {
    let off = tn2 - 0.5 * tn;
    Matrix2::new(
        tn,
        off,
        2.0 / 3.0 * off,
        2.0 / 3.0 * (tn4 - tn2 + 1.25 * tn),
    )
}

/// Moment and kernel integrals over a fixed half-range Gaussian rule.
#[derive(Debug, Clone)]
pub struct KineticKernels {
    rule: QuadratureRule,
    /// `(2/√π)·wᵢ`, so sums give the normalized integrals directly.
    scaled_weights: Vec<f64>,
}

impl KineticKernels {
    pub fn new(mu_nodes: usize) -> Result<Self> {
        Ok(Self::from_rule(build_gaussian_halfline_rule(mu_nodes)?))
    }

    pub fn from_rule(rule: QuadratureRule) -> Self {
        let norm = 2.0 / PI.sqrt();
        let scaled_weights = rule.weights().iter().map(|w| w * norm).collect();
        Self {
            rule,
            scaled_weights,
        }
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub(crate) fn nodes(&self) -> &[f64] {
        self.rule.nodes()
    }

    pub(crate) fn scaled_weights(&self) -> &[f64] {
        &self.scaled_weights
    }

    /// `[T_0(k), …, T_8(k)]` in one pass.
    pub fn moments(&self, k: f64) -> [f64; MAX_MOMENT + 1] {
        let k2 = k * k;
        let mut out = [0.0; MAX_MOMENT + 1];
        for (&mu, &w) in self.rule.nodes().iter().zip(&self.scaled_weights) {
            let mut term = w / (1.0 + k2 * mu * mu);
            for t in out.iter_mut() {
                *t += term;
                term *= mu;
            }
        }
        out
    }

    /// `T_m(k) = (2/√π)∫₀^∞ e^{-μ²} μ^m /(1+k²μ²) dμ`, `0 ≤ m ≤ 8`.
    pub fn t_moment(&self, m: usize, k: f64) -> Result<f64> {
        if m > MAX_MOMENT {
            return Err(Error::MomentIndex(m));
        }
        Ok(self.moments(k)[m])
    }

    /// `T̂_n(k) = (2/√π)∫₀^∞ e^{-μ²} K(μ) μⁿ /(1+k²μ²) dμ` for `n ∈ 1..=4`.
    pub fn t_hat(&self, n: usize, k: f64) -> Result<Matrix2> {
        if !(1..=4).contains(&n) {
            return Err(Error::FamilyIndex(n));
        }
        Ok(t_hat_from_moments(n, &self.moments(k)))
    }

    /// `T̂₁(k) … T̂₄(k)` sharing one moment evaluation.
    pub fn t_hat_all(&self, k: f64) -> [Matrix2; 4] {
        let t = self.moments(k);
        [1, 2, 3, 4].map(|n| t_hat_from_moments(n, &t))
    }

    /// `L(k) = E₂ − T̂₀(k) = k²·T̂₂(k)`. Vanishes at `k = 0`.
    pub fn dispersion_matrix(&self, k: f64) -> Matrix2 {
        t_hat_from_moments(2, &self.moments(k)).scale(k * k)
    }

    /// `Ĵ(k,k₁) = (2/√π)∫₀^∞ e^{-μ²} K(μ) μ dμ / ((1+k²μ²)(1+k₁²μ²))`.
    pub fn j_kernel(&self, k: f64, k1: f64) -> Matrix2 {
        self.two_point_kernel(1, k, k1)
    }

    /// Same as [`j_kernel`](Self::j_kernel) with `μ³` in place of `μ`;
    /// satisfies `Ĵ(k,k₁) = T̂₁(k₁) − k²Ĵ₃(k,k₁)`.
    pub fn j3_kernel(&self, k: f64, k1: f64) -> Matrix2 {
        self.two_point_kernel(3, k, k1)
    }

    fn two_point_kernel(&self, power: i32, k: f64, k1: f64) -> Matrix2 {
        let (k2, k12) = (k * k, k1 * k1);
        let mut sums = KernelSums::default();
        for (&mu, &w) in self.rule.nodes().iter().zip(&self.scaled_weights) {
            let mu2 = mu * mu;
            let base = w * mu.powi(power) / ((1.0 + k2 * mu2) * (1.0 + k12 * mu2));
            sums.add(base, mu2 - 0.5);
        }
        sums.matrix()
    }
}

pub(crate) fn t_hat_from_moments(n: usize, t: &[f64; MAX_MOMENT + 1]) -> Matrix2 {
    family_from_moments(t[n], t[n + 2], t[n + 4])
}

/// Running sums `Σ b`, `Σ b·d`, `Σ b·(d²+1)` with `d = μ²−½`; these are the
/// three independent entries of `Σ b·K(μ)`.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct KernelSums {
    s0: f64,
    s1: f64,
    s2: f64,
}

impl KernelSums {
    #[inline]
    pub(crate) fn add(&mut self, base: f64, d: f64) {
        self.s0 += base;
        self.s1 += base * d;
        self.s2 += base * (d * d + 1.0);
    }

    pub(crate) fn matrix(&self) -> Matrix2 {
        Matrix2::new(self.s0, self.s1, 2.0 / 3.0 * self.s1, 2.0 / 3.0 * self.s2)
    }
}
