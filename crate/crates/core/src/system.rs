//! The discretized vector Fredholm operator: the k-grid, the per-node
//! matrix families and the precomputed two-point kernel tableaux.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kernels::{t_hat_from_moments, KernelSums, KineticKernels, Matrix2, Vec2};
use crate::quadrature::{build_algebraic_halfline_rule, QuadratureRule};

pub const DEFAULT_MU_NODES: usize = 64;
pub const DEFAULT_K_NODES: usize = 200;
pub const DEFAULT_MAP_SCALE: f64 = 1.0;

/// Gradient direction `(−1, 1)ᵀ` of the asymptotic Chapman–Enskog part.
pub const GRADIENT_DIRECTION: Vec2 = Vec2::new(-1.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub mu_nodes: usize,
    pub k_nodes: usize,
    pub map_scale: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            mu_nodes: DEFAULT_MU_NODES,
            k_nodes: DEFAULT_K_NODES,
            map_scale: DEFAULT_MAP_SCALE,
        }
    }
}

impl SolverConfig {
    /// Both node counts doubled, same map.
    pub fn refined(&self) -> Self {
        Self {
            mu_nodes: self.mu_nodes * 2,
            k_nodes: self.k_nodes * 2,
            map_scale: self.map_scale,
        }
    }
}

/// `T̂₁ … T̂₄` evaluated at one grid node.
#[derive(Debug, Clone, Copy)]
pub struct NodeFamilies {
    pub t1: Matrix2,
    pub t2: Matrix2,
    pub t3: Matrix2,
    pub t4: Matrix2,
}

/// Symmetric `N×N` table of 2×2 blocks, upper triangle packed by rows.
#[derive(Debug, Clone)]
pub struct KernelTableau {
    dim: usize,
    packed: Vec<Matrix2>,
}

impl KernelTableau {
    /// Tabulates `(2/√π)∫ e^{-μ²} K(μ) μ^power /((1+kᵢ²μ²)(1+kⱼ²μ²)) dμ`.
    fn build(kernels: &KineticKernels, grid: &[f64], power: i32) -> Self {
        let mus = kernels.nodes();
        let base: Vec<f64> = mus
            .iter()
            .zip(kernels.scaled_weights())
            .map(|(&mu, &w)| w * mu.powi(power))
            .collect();
        let dev: Vec<f64> = mus.iter().map(|mu| mu * mu - 0.5).collect();
        let rational: Vec<Vec<f64>> = grid
            .iter()
            .map(|&k| mus.iter().map(|mu| 1.0 / (1.0 + k * k * mu * mu)).collect())
            .collect();

        let dim = grid.len();
        let rows: Vec<Vec<Matrix2>> = (0..dim)
            .into_par_iter()
            .map(|i| {
                let ri = &rational[i];
                (i..dim)
                    .map(|j| {
                        let rj = &rational[j];
                        let mut sums = KernelSums::default();
                        for m in 0..mus.len() {
                            sums.add(base[m] * ri[m] * rj[m], dev[m]);
                        }
                        sums.matrix()
                    })
                    .collect()
            })
            .collect();

        Self {
            dim,
            packed: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Matrix2 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.packed[i * self.dim - i * (i + 1) / 2 + j]
    }

    /// `outᵢ = Σⱼ wⱼ M(i,j) vⱼ`.
    pub fn apply(&self, weights: &[f64], values: &[Vec2]) -> Vec<Vec2> {
        (0..self.dim)
            .into_par_iter()
            .map(|i| {
                let mut acc = Vec2::ZERO;
                for (j, (&w, &v)) in weights.iter().zip(values).enumerate() {
                    acc += self.get(i, j) * v * w;
                }
                acc
            })
            .collect()
    }
}

/// Everything needed to evaluate the discretized operator of the vector
/// Fredholm equation on a fixed `(μ, k)` discretization.
#[derive(Debug)]
pub struct FredholmSystem {
    config: SolverConfig,
    kernels: KineticKernels,
    grid: Arc<QuadratureRule>,
    families: Vec<NodeFamilies>,
    t1_zero: Matrix2,
    t2_zero: Matrix2,
    t1_zero_inv: Matrix2,
    j3: KernelTableau,
    j: OnceLock<KernelTableau>,
}

impl FredholmSystem {
    pub fn new(config: SolverConfig) -> Result<Self> {
        let kernels = KineticKernels::new(config.mu_nodes)?;
        let grid = Arc::new(build_algebraic_halfline_rule(
            config.k_nodes,
            config.map_scale,
        )?);

        let families = grid
            .nodes()
            .iter()
            .map(|&k| {
                let t = kernels.moments(k);
                NodeFamilies {
                    t1: t_hat_from_moments(1, &t),
                    t2: t_hat_from_moments(2, &t),
                    t3: t_hat_from_moments(3, &t),
                    t4: t_hat_from_moments(4, &t),
                }
            })
            .collect();

        let t_zero = kernels.moments(0.0);
        let t1_zero = t_hat_from_moments(1, &t_zero);
        let t2_zero = t_hat_from_moments(2, &t_zero);
        let t1_zero_inv = t1_zero.inverse()?;
        let j3 = KernelTableau::build(&kernels, grid.nodes(), 3);

        log::debug!(
            "discretization ready: {} mu nodes, {} k nodes, map scale {}",
            config.mu_nodes,
            config.k_nodes,
            config.map_scale
        );

        Ok(Self {
            config,
            kernels,
            grid,
            families,
            t1_zero,
            t2_zero,
            t1_zero_inv,
            j3,
            j: OnceLock::new(),
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn kernels(&self) -> &KineticKernels {
        &self.kernels
    }

    pub fn grid(&self) -> &Arc<QuadratureRule> {
        &self.grid
    }

    pub fn families(&self) -> &[NodeFamilies] {
        &self.families
    }

    pub fn t1_zero(&self) -> Matrix2 {
        self.t1_zero
    }

    pub fn t2_zero(&self) -> Matrix2 {
        self.t2_zero
    }

    pub fn t1_zero_inv(&self) -> Matrix2 {
        self.t1_zero_inv
    }

    /// `Ĵ₃(kᵢ, kⱼ)` on the grid.
    pub fn j3_tableau(&self) -> &KernelTableau {
        &self.j3
    }

    /// `Ĵ(kᵢ, kⱼ)` on the grid, built on first use.
    pub fn j_tableau(&self) -> &KernelTableau {
        self.j
            .get_or_init(|| KernelTableau::build(&self.kernels, self.grid.nodes(), 1))
    }

    /// `(1/π) Σⱼ wⱼ T̂₁(kⱼ) vⱼ`, the k=0 coupling of a density.
    pub fn t1_moment(&self, values: &[Vec2]) -> Vec2 {
        let mut acc = Vec2::ZERO;
        for ((fam, &w), &v) in self.families.iter().zip(self.grid.weights()).zip(values) {
            acc += fam.t1 * v * w;
        }
        acc * (1.0 / PI)
    }

    /// `(1/π) Σⱼ wⱼ Ĵ₃(kᵢ,kⱼ) vⱼ` for every grid node `i`.
    pub fn j3_coupling(&self, values: &[Vec2]) -> Vec<Vec2> {
        scale_all(self.j3.apply(self.grid.weights(), values), 1.0 / PI)
    }

    /// `(1/π) Σⱼ wⱼ Ĵ(kᵢ,kⱼ) vⱼ` for every grid node `i`.
    pub fn j_coupling(&self, values: &[Vec2]) -> Vec<Vec2> {
        scale_all(
            self.j_tableau().apply(self.grid.weights(), values),
            1.0 / PI,
        )
    }
}

fn scale_all(mut values: Vec<Vec2>, c: f64) -> Vec<Vec2> {
    for v in values.iter_mut() {
        *v = *v * c;
    }
    values
}
