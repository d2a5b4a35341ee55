//! Vector spectral densities sampled on the k-quadrature grid.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernels::Vec2;
use crate::quadrature::{QuadratureRule, RuleKind};

/// A vector function of `k ≥ 0` stored at the nodes of an algebraic
/// half-line rule, so integrals against it are weighted node sums.
///
/// Off-grid values come from a 4-point Lagrange interpolant in the map
/// variable `t = k/(s+k)`, with the limit `E(k→∞) = 0` pinned at `t = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    grid: Arc<QuadratureRule>,
    values: Vec<Vec2>,
}

impl SpectralDensity {
    pub fn new(grid: Arc<QuadratureRule>, values: Vec<Vec2>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DensityLength {
                expected: grid.len(),
                got: values.len(),
            });
        }
        debug_assert_eq!(grid.kind(), RuleKind::AlgebraicHalfline);
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<QuadratureRule>) -> Self {
        let values = vec![Vec2::ZERO; grid.len()];
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<QuadratureRule> {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn values(&self) -> &[Vec2] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Sup norm over the grid.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.max_abs()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| v * c).collect(),
        }
    }

    /// `self += c · other`; both must live on the same grid.
    pub fn add_scaled(&mut self, other: &SpectralDensity, c: f64) {
        assert!(
            Arc::ptr_eq(&self.grid, &other.grid) || self.grid == other.grid,
            "densities live on different grids"
        );
        for (a, &b) in self.values.iter_mut().zip(&other.values) {
            *a += b * c;
        }
    }

    /// `(1/π)∫₀^∞ E(k) dk`.
    pub fn mean_integral(&self) -> Vec2 {
        let mut acc = Vec2::ZERO;
        for (&w, &v) in self.grid.weights().iter().zip(&self.values) {
            acc += v * w;
        }
        acc * (1.0 / PI)
    }

    /// Interpolated value at an arbitrary `k ≥ 0`.
    pub fn value_at(&self, k: f64) -> Vec2 {
        let s = self.grid.map_scale().unwrap_or(1.0);
        let k = k.abs();
        if !k.is_finite() {
            return Vec2::ZERO;
        }
        let t = k / (s + k);
        let ks = self.grid.nodes();
        let n = ks.len();
        let node_t = |i: usize| -> f64 {
            if i == n {
                1.0
            } else {
                ks[i] / (s + ks[i])
            }
        };
        let node_v = |i: usize| -> Vec2 {
            if i == n {
                Vec2::ZERO
            } else {
                self.values[i]
            }
        };

        // Augmented node set: the grid plus t = 1.
        let total = n + 1;
        let upper = ks.partition_point(|&kn| kn <= k); // first node with k_i > k
        let start = upper.saturating_sub(2).min(total.saturating_sub(4));
        let stencil = start..(start + 4).min(total);

        let mut acc = Vec2::ZERO;
        for i in stencil.clone() {
            let ti = node_t(i);
            let mut basis = 1.0;
            for j in stencil.clone() {
                if j != i {
                    let tj = node_t(j);
                    basis *= (t - tj) / (ti - tj);
                }
            }
            acc += node_v(i) * basis;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::build_algebraic_halfline_rule;

    fn grid(n: usize) -> Arc<QuadratureRule> {
        Arc::new(build_algebraic_halfline_rule(n, 1.0).unwrap())
    }

    #[test]
    fn length_is_checked() {
        let g = grid(10);
        assert_eq!(
            SpectralDensity::new(g, vec![Vec2::ZERO; 3]),
            Err(Error::DensityLength {
                expected: 10,
                got: 3
            })
        );
    }

    #[test]
    fn interpolation_reproduces_nodes_and_smooth_functions() {
        let g = grid(200);
        let f = |k: f64| Vec2::new(1.0 / (1.0 + k * k), -k / (1.0 + k).powi(3));
        let values = g.nodes().iter().map(|&k| f(k)).collect();
        let e = SpectralDensity::new(Arc::clone(&g), values).unwrap();
        for &k in g.nodes().iter().step_by(17) {
            assert!((e.value_at(k) - f(k)).max_abs() < 1e-14);
        }
        for k in [0.0, 1e-4, 0.05, 0.7, 3.3, 41.0, 900.0, 1e6] {
            let err = (e.value_at(k) - f(k)).max_abs();
            assert!(err < 1e-7, "k={k}: {err:e}");
        }
    }

    #[test]
    fn mean_integral_of_lorentzian() {
        let g = grid(200);
        let values = g
            .nodes()
            .iter()
            .map(|&k| Vec2::new(1.0 / (1.0 + k * k), 0.0))
            .collect();
        let e = SpectralDensity::new(g, values).unwrap();
        assert!((e.mean_integral().v1 - 0.5).abs() < 1e-10);
    }

    #[test]
    fn zeros_and_scaling() {
        let g = grid(12);
        let mut e = SpectralDensity::zeros(Arc::clone(&g));
        assert_eq!(e.max_abs(), 0.0);
        let ones = SpectralDensity::new(Arc::clone(&g), vec![Vec2::new(1.0, -2.0); 12]).unwrap();
        e.add_scaled(&ones, 0.5);
        assert_eq!(e.values()[3], Vec2::new(0.5, -1.0));
        assert_eq!(ones.scaled(2.0).max_abs(), 4.0);
    }
}
