//! Quadrature rules on the half line `[0, ∞)`.
//!
//! Two families are needed:
//!
//! * a half-range Gaussian rule for `∫₀^∞ e^{-μ²} f(μ) dμ`, built from the
//!   orthogonal polynomials of the weight `e^{-μ²}` on `[0, ∞)` (the weight
//!   is carried by the quadrature weights, so `f` excludes it);
//! * an algebraic rule for integrands decaying like `1/k²`, obtained by
//!   compactifying `k = s·t/(1-t)` and applying Gauss-Legendre on `t ∈ [0, 1)`.
//!
//! Rules are immutable once built.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 2;
pub const MAX_GAUSSIAN_NODES: usize = 160;
pub const MAX_ALGEBRAIC_NODES: usize = 20_000;

/// Panel width and order of the composite rule that discretizes the
/// half-range measure before the Stieltjes procedure.
const DISCRETIZATION_PANEL: f64 = 0.125;
const DISCRETIZATION_ORDER: usize = 20;
/// `e^{-27²}` is close to the bottom of the normal f64 range.
const DISCRETIZATION_MAX_EXTENT: f64 = 27.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    /// Weight `e^{-μ²}` on `[0, ∞)` is folded into the weights.
    GaussianWeightHalfline,
    /// Plain `∫₀^∞ f(k) dk` through a rational map.
    AlgebraicHalfline,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: RuleKind,
    map_scale: Option<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    /// Scale `s` of the map `k = s·t/(1-t)`; `None` for Gaussian rules.
    pub fn map_scale(&self) -> Option<f64> {
        self.map_scale
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `Σ wᵢ f(xᵢ)`. For Gaussian-weight rules `f` must not include `e^{-μ²}`.
    pub fn integrate<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> f64,
    {
        let mut sum = 0.0;
        for (x, w) in self.iter() {
            let value = f(x);
            if !value.is_finite() {
                return Err(Error::NonFiniteIntegrand { node: x, value });
            }
            sum += w * value;
        }
        Ok(sum)
    }
}

/// Gauss rule with `n` nodes for the weight `e^{-μ²}` on `[0, ∞)`.
///
/// Exact (to rounding) for `∫₀^∞ e^{-μ²} p(μ) dμ` with `deg p ≤ 2n-1`.
pub fn build_gaussian_halfline_rule(n: usize) -> Result<QuadratureRule> {
    if !(MIN_NODES..=MAX_GAUSSIAN_NODES).contains(&n) {
        return Err(Error::NodeCount {
            got: n,
            min: MIN_NODES,
            max: MAX_GAUSSIAN_NODES,
        });
    }

    let recurrence = HalfRangeRecurrence::new(n);
    let nodes = recurrence.zeros();
    let weights = nodes
        .iter()
        .map(|&x| recurrence.christoffel_weight(x))
        .collect();

    Ok(QuadratureRule {
        nodes,
        weights,
        kind: RuleKind::GaussianWeightHalfline,
        map_scale: None,
    })
}

/// `n`-node rule for `∫₀^∞ f(k) dk` using `k = s·t/(1-t)` and Gauss-Legendre in `t`.
///
/// No node sits at `k = 0`.
pub fn build_algebraic_halfline_rule(n: usize, map_scale: f64) -> Result<QuadratureRule> {
    if !(MIN_NODES..=MAX_ALGEBRAIC_NODES).contains(&n) {
        return Err(Error::NodeCount {
            got: n,
            min: MIN_NODES,
            max: MAX_ALGEBRAIC_NODES,
        });
    }
    if !(map_scale.is_finite() && map_scale > 0.0) {
        return Err(Error::MapScale(map_scale));
    }

    let mut pairs: Vec<(f64, f64)> = legendre_unit_interval(n)
        .into_iter()
        .map(|(t, wt)| {
            let one_minus = 1.0 - t;
            let k = map_scale * t / one_minus;
            let w = wt * map_scale / (one_minus * one_minus);
            (k, w)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (nodes, weights) = pairs.into_iter().unzip();

    Ok(QuadratureRule {
        nodes,
        weights,
        kind: RuleKind::AlgebraicHalfline,
        map_scale: Some(map_scale),
    })
}

/// Gauss-Legendre nodes and weights on `[0, 1]`, ascending.
pub(crate) fn legendre_unit_interval(n: usize) -> Vec<(f64, f64)> {
    let degree = NonZeroUsize::new(n).expect("legendre order must be nonzero");
    let rule = GaussLegendre::new(degree);
    let mut pairs: Vec<(f64, f64)> = rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Three-term recurrence of the orthonormal polynomials for `e^{-μ²}` on `[0, ∞)`:
/// `b_k p_{k+1} = (x - a_k) p_k - b_{k-1} p_{k-1}`, `p_0 = 1/√μ₀`.
struct HalfRangeRecurrence {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    mu0: f64,
}

impl HalfRangeRecurrence {
    /// Discretized Stieltjes procedure on a fine composite Gauss-Legendre
    /// discretization of the measure. Stays in orthonormal form so nothing
    /// overflows for the node counts allowed.
    fn new(n: usize) -> Self {
        let extent = ((4 * n) as f64).sqrt() + 8.0;
        let extent = extent.min(DISCRETIZATION_MAX_EXTENT);
        let panels = (extent / DISCRETIZATION_PANEL).ceil() as usize;
        let width = extent / panels as f64;
        let base = legendre_unit_interval(DISCRETIZATION_ORDER);

        let mut xs = Vec::with_capacity(panels * DISCRETIZATION_ORDER);
        let mut ws = Vec::with_capacity(panels * DISCRETIZATION_ORDER);
        for p in 0..panels {
            let left = p as f64 * width;
            for &(t, wt) in &base {
                let x = left + t * width;
                let w = wt * width * (-x * x).exp();
                if w > 0.0 {
                    xs.push(x);
                    ws.push(w);
                }
            }
        }

        let mu0: f64 = ws.iter().sum();
        let mut alpha = vec![0.0; n];
        let mut beta = vec![0.0; n];
        let mut prev = vec![0.0; xs.len()];
        let mut cur = vec![1.0 / mu0.sqrt(); xs.len()];
        let mut b_prev = 0.0;
        for k in 0..n {
            let a: f64 = xs
                .iter()
                .zip(&ws)
                .zip(&cur)
                .map(|((x, w), p)| w * x * p * p)
                .sum();
            let next: Vec<f64> = xs
                .iter()
                .zip(&cur)
                .zip(&prev)
                .map(|((x, p), pm)| (x - a) * p - b_prev * pm)
                .collect();
            let b = next
                .iter()
                .zip(&ws)
                .map(|(r, w)| w * r * r)
                .sum::<f64>()
                .sqrt();
            alpha[k] = a;
            beta[k] = b;
            prev = cur;
            cur = next.into_iter().map(|r| r / b).collect();
            b_prev = b;
        }

        Self { alpha, beta, mu0 }
    }

    fn order(&self) -> usize {
        self.alpha.len()
    }

    /// Zeros of `p_n`: Jacobi-matrix eigenvalues, then one Newton step each.
    fn zeros(&self) -> Vec<f64> {
        let n = self.order();
        let jacobi = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.alpha[i]
            } else if i + 1 == j {
                self.beta[i]
            } else if j + 1 == i {
                self.beta[j]
            } else {
                0.0
            }
        });
        let mut zeros: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
        zeros.sort_by(f64::total_cmp);

        for x in zeros.iter_mut() {
            let (p, dp) = self.eval_with_derivative(*x);
            if dp != 0.0 {
                let step = p / dp;
                if step.abs() < 1e-6 * (1.0 + x.abs()) {
                    *x -= step;
                }
            }
        }
        zeros
    }

    /// `(p_n(x), p_n'(x))` for the orthonormal family.
    fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let mut p_prev = 0.0;
        let mut p = 1.0 / self.mu0.sqrt();
        let mut d_prev = 0.0;
        let mut d = 0.0;
        let mut b_prev = 0.0;
        for k in 0..self.order() {
            let b = self.beta[k];
            let p_next = ((x - self.alpha[k]) * p - b_prev * p_prev) / b;
            let d_next = ((x - self.alpha[k]) * d + p - b_prev * d_prev) / b;
            p_prev = p;
            p = p_next;
            d_prev = d;
            d = d_next;
            b_prev = b;
        }
        (p, d)
    }

    /// `1 / Σ_{k<n} p_k(x)²`, accurate in the relative sense even for the
    /// tiny weights at the far end of the rule.
    fn christoffel_weight(&self, x: f64) -> f64 {
        let mut p_prev = 0.0;
        let mut p = 1.0 / self.mu0.sqrt();
        let mut sum = p * p;
        let mut b_prev = 0.0;
        for k in 0..self.order() - 1 {
            let b = self.beta[k];
            let p_next = ((x - self.alpha[k]) * p - b_prev * p_prev) / b;
            p_prev = p;
            p = p_next;
            sum += p * p;
            b_prev = b;
        }
        1.0 / sum
    }
}
