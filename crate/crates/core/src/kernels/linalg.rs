//! Fixed-size 2×2 linear algebra.
//!
//! Every matrix in the vector problem is 2×2 and every unknown is a pair, so
//! these small value types replace a general dense library. Inversion uses
//! Cramer's rule with a relative determinant floor.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative singularity threshold: `|det| <= DET_FLOOR * max|a_ij|^2` is rejected.
pub const DET_FLOOR: f64 = 1e-12;

/// A two-component column vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub v1: f64,
    pub v2: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { v1: 0.0, v2: 0.0 };

    pub const fn new(v1: f64, v2: f64) -> Self {
        Self { v1, v2 }
    }

    /// Sup norm.
    pub fn max_abs(self) -> f64 {
        self.v1.abs().max(self.v2.abs())
    }

    pub fn is_finite(self) -> bool {
        self.v1.is_finite() && self.v2.is_finite()
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.v1 * other.v1 + self.v2 * other.v2
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.v1 + rhs.v1, self.v2 + rhs.v2)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.v1 += rhs.v1;
        self.v2 += rhs.v2;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.v1 - rhs.v1, self.v2 - rhs.v2)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.v1, -self.v2)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.v1 * rhs, self.v2 * rhs)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, rhs: Vec2) -> Vec2 {
        rhs * self
    }
}

/// A real 2×2 matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Matrix2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Matrix2 {
    pub const ZERO: Matrix2 = Matrix2::new(0.0, 0.0, 0.0, 0.0);
    pub const IDENTITY: Matrix2 = Matrix2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.a11
            .abs()
            .max(self.a12.abs())
            .max(self.a21.abs())
            .max(self.a22.abs())
    }

    pub fn scale(&self, c: f64) -> Matrix2 {
        Matrix2::new(self.a11 * c, self.a12 * c, self.a21 * c, self.a22 * c)
    }

    pub fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }

    pub fn inverse(&self) -> Result<Matrix2> {
        let det = self.checked_det()?;
        Ok(Matrix2::new(self.a22, -self.a12, -self.a21, self.a11).scale(1.0 / det))
    }

    fn checked_det(&self) -> Result<f64> {
        let det = self.det();
        let scale = self.max_abs();
        if !det.is_finite() || det.abs() <= DET_FLOOR * scale * scale {
            return Err(Error::SingularMatrix { det });
        }
        Ok(det)
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, rhs: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 + rhs.a11,
            self.a12 + rhs.a12,
            self.a21 + rhs.a21,
            self.a22 + rhs.a22,
        )
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, rhs: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 - rhs.a11,
            self.a12 - rhs.a12,
            self.a21 - rhs.a21,
            self.a22 - rhs.a22,
        )
    }
}

impl Mul<Vec2> for Matrix2 {
    type Output = Vec2;
    fn mul(self, x: Vec2) -> Vec2 {
        Vec2::new(
            self.a11 * x.v1 + self.a12 * x.v2,
            self.a21 * x.v1 + self.a22 * x.v2,
        )
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, b: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 * b.a11 + self.a12 * b.a21,
            self.a11 * b.a12 + self.a12 * b.a22,
            self.a21 * b.a11 + self.a22 * b.a21,
            self.a21 * b.a12 + self.a22 * b.a22,
        )
    }
}

impl Mul<f64> for Matrix2 {
    type Output = Matrix2;
    fn mul(self, c: f64) -> Matrix2 {
        self.scale(c)
    }
}

/// Solves `a · x = b` by Cramer's rule.
///
/// Fails with [`Error::SingularMatrix`] when `|det a| <= 1e-12 · max|a_ij|²`.
pub fn solve2(a: &Matrix2, b: Vec2) -> Result<Vec2> {
    let det = a.checked_det()?;
    Ok(Vec2::new(
        (b.v1 * a.a22 - a.a12 * b.v2) / det,
        (a.a11 * b.v2 - a.a21 * b.v1) / det,
    ))
}
