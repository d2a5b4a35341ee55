//! Macroscopic quantities recovered from a spectral density: the boundary
//! value of the continuum distribution and the profile
//! `U_c(x) = (δn_c/n₀, δT_c/T₀)` away from the wall.
//!
//! `E(k)` is taken to be even in `k`, so the Fourier inversion reduces to a
//! cosine transform over the half-line.

use std::f64::consts::PI;

use serde::Serialize;

use crate::density::SpectralDensity;
use crate::error::{Error, Result};
use crate::kernels::{matrix_kernel, KineticKernels, Vec2};
use crate::quadrature::{legendre_unit_interval, QuadratureRule};

/// Gauss points per panel of the cosine rule.
const PANEL_POINTS: usize = 16;
/// Upper limit on panels per profile point.
pub const MAX_PANELS: usize = 100_000;
/// Node density below which a profile point is flagged.
const MIN_NODES_PER_PERIOD: f64 = 4.0;
const MIN_CUTOFF: f64 = 400.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentProfile {
    /// Distances from the wall in mean free paths.
    pub x_grid: Vec<f64>,
    /// `(δn_c/n₀, δT_c/T₀)` at each `x`.
    pub values: Vec<Vec2>,
    pub warnings: Vec<String>,
}

/// `h_c(0, μ) = (1/π)∫₀^∞ E(k) dk /(1+k²μ²)`; even in `μ`.
pub fn boundary_distribution(mu: f64, e: &SpectralDensity) -> Vec2 {
    let mu2 = mu * mu;
    let mut acc = Vec2::ZERO;
    for ((&k, &w), &v) in e.nodes().iter().zip(e.grid().weights()).zip(e.values()) {
        acc += v * (w / (1.0 + k * k * mu2));
    }
    acc * (1.0 / PI)
}

/// `(1/√π)∫_{−∞}^{∞} e^{−μ²} K(μ) h_c(0,μ) dμ` evaluated with the given
/// half-range Gaussian rule.
pub fn moment_weighted_boundary(e: &SpectralDensity, mu_rule: &QuadratureRule) -> Vec2 {
    let mut acc = Vec2::ZERO;
    for (mu, w) in mu_rule.iter() {
        acc += matrix_kernel(mu) * boundary_distribution(mu, e) * w;
    }
    acc * (2.0 / PI.sqrt())
}

/// `(1/π)∫₀^∞ L(k) E(k) dk`. The moment-weighted boundary value equals
/// `U_c(0)` minus this term.
pub fn dispersion_correction(e: &SpectralDensity, kernels: &KineticKernels) -> Vec2 {
    let mut acc = Vec2::ZERO;
    for ((&k, &w), &v) in e.nodes().iter().zip(e.grid().weights()).zip(e.values()) {
        acc += kernels.dispersion_matrix(k) * v * w;
    }
    acc * (1.0 / PI)
}

/// Total wall perturbation: the extrapolated jump plus the continuum part at
/// the wall.
pub fn wall_perturbation(eps: Vec2, e: &SpectralDensity) -> Vec2 {
    eps + e.mean_integral()
}

/// `U_c(x) = (1/π)∫₀^∞ cos(kx) E(k) dk` on `x_grid`.
pub fn macroscopic_profile(x_grid: &[f64], e: &SpectralDensity) -> Result<MomentProfile> {
    if let Some(&bad) = x_grid.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::ProfileGrid(format!(
            "distances must be finite and non-negative, got {bad}"
        )));
    }
    let gauss = legendre_unit_interval(PANEL_POINTS);
    let mut warnings = Vec::new();
    let values = x_grid
        .iter()
        .map(|&x| {
            if x == 0.0 {
                return e.mean_integral();
            }
            let (value, nodes_per_period) = cosine_transform(x, e, &gauss);
            if nodes_per_period < MIN_NODES_PER_PERIOD {
                warnings.push(format!(
                    "x = {x}: only {nodes_per_period:.2} nodes per cosine period"
                ));
            }
            value
        })
        .collect();
    Ok(MomentProfile {
        x_grid: x_grid.to_vec(),
        values,
        warnings,
    })
}

/// Paneled Gauss rule on `[0, K]` with panels no wider than half a period,
/// plus the `E ~ 1/k²` tail by two integrations by parts.
fn cosine_transform(x: f64, e: &SpectralDensity, gauss: &[(f64, f64)]) -> (Vec2, f64) {
    let cutoff = MIN_CUTOFF.max(20.0 / x);
    let half_period = PI / x;
    let uniform = if cutoff / half_period > MAX_PANELS as f64 {
        Some(cutoff / MAX_PANELS as f64)
    } else {
        None
    };

    let mut acc = Vec2::ZERO;
    let mut widest: f64 = 0.0;
    let mut a = 0.0;
    while a < cutoff {
        let h = uniform.unwrap_or_else(|| half_period.min(0.5f64.max(0.25 * a)));
        let b = (a + h).min(cutoff);
        widest = widest.max(b - a);
        for &(t, w) in gauss {
            let k = a + (b - a) * t;
            acc += e.value_at(k) * (w * (b - a) * (k * x).cos());
        }
        a = b;
    }

    let ek = e.value_at(cutoff);
    let dek = ek * (-2.0 / cutoff);
    let tail = ek * (-(cutoff * x).sin() / x) - dek * ((cutoff * x).cos() / (x * x));
    let nodes_per_period = PANEL_POINTS as f64 * (2.0 * half_period) / widest;
    ((acc + tail) * (1.0 / PI), nodes_per_period)
}
