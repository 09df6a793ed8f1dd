//! Truncated matrix power series.
//!
//! A [`PowerSeries`] of truncation order `T` knows its coefficients `C_0..C_T`
//! exactly and nothing beyond. Every operation reports the largest order at
//! which its result is still determined by the inputs.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq)]
pub struct PowerSeries<T> {
    rows: usize,
    cols: usize,
    coeffs: Vec<Matrix<T>>,
}

impl<T: Scalar> PowerSeries<T> {
    /// Builds a series from `C_0..C_T`. Panics on an empty list or mixed shapes.
    pub fn new(coeffs: Vec<Matrix<T>>) -> Self {
        let first = coeffs.first().expect("a series needs at least the constant coefficient");
        let (rows, cols) = first.shape();
        assert!(coeffs.iter().all(|c| c.shape() == (rows, cols)), "series coefficients must share a shape");
        PowerSeries { rows, cols, coeffs }
    }

    pub fn zero(rows: usize, cols: usize, trunc: usize) -> Self {
        PowerSeries { rows, cols, coeffs: vec![Matrix::zeros(rows, cols); trunc + 1] }
    }

    pub fn identity(n: usize, trunc: usize) -> Self {
        Self::constant(Matrix::identity(n), trunc)
    }

    pub fn constant(c: Matrix<T>, trunc: usize) -> Self {
        let (rows, cols) = c.shape();
        let mut s = Self::zero(rows, cols, trunc);
        s.coeffs[0] = c;
        s
    }

    /// An exact polynomial viewed as a series of order `trunc`: zero-padded or cut.
    pub fn from_polynomial(rows: usize, cols: usize, coeffs: &[Matrix<T>], trunc: usize) -> Self {
        assert!(coeffs.iter().all(|c| c.shape() == (rows, cols)), "polynomial coefficients must share a shape");
        let mut s = Self::zero(rows, cols, trunc);
        for (i, c) in coeffs.iter().enumerate().take(trunc + 1) {
            s.coeffs[i] = c.clone();
        }
        s
    }

    #[inline]
    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn coeff(&self, i: usize) -> &Matrix<T> {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Matrix<T>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Matrix<T>> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        self.check_order(order)?;
        Ok(PowerSeries { rows: self.rows, cols: self.cols, coeffs: self.coeffs[..=order].to_vec() })
    }

    fn check_order(&self, order: usize) -> Result<()> {
        if order > self.trunc_order() {
            return Err(Error::InsufficientOrder { required: order, available: self.trunc_order() });
        }
        Ok(())
    }

    /// Exact equality of `C_0..C_order`.
    pub fn agrees_through(&self, other: &Self, order: usize) -> bool {
        self.shape() == other.shape()
            && order <= self.trunc_order()
            && order <= other.trunc_order()
            && self.coeffs[..=order] == other.coeffs[..=order]
    }

    /// The first order at which the two series differ, if any, up to the shared truncation.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let t = self.trunc_order().min(other.trunc_order());
        (0..=t).find(|&i| self.coeffs[i] != other.coeffs[i])
    }

    /// Cauchy product, truncated at the smaller of the two orders.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch { op: "series product", left: self.shape(), right: rhs.shape() });
        }
        let t = self.trunc_order().min(rhs.trunc_order());
        let mut coeffs = Vec::with_capacity(t + 1);
        for l in 0..=t {
            let mut acc = Matrix::zeros(self.rows, rhs.cols);
            for i in 0..=l {
                let (a, b) = (&self.coeffs[i], &rhs.coeffs[l - i]);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            coeffs.push(acc);
        }
        Ok(PowerSeries { rows: self.rows, cols: rhs.cols, coeffs })
    }

    fn zip_with(&self, rhs: &Self, op: &'static str, f: impl Fn(&Matrix<T>, &Matrix<T>) -> Matrix<T>) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch { op, left: self.shape(), right: rhs.shape() });
        }
        let t = self.trunc_order().min(rhs.trunc_order());
        let coeffs = (0..=t).map(|i| f(&self.coeffs[i], &rhs.coeffs[i])).collect();
        Ok(PowerSeries { rows: self.rows, cols: self.cols, coeffs })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "series sum", |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "series difference", |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        PowerSeries { rows: self.rows, cols: self.cols, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// `C · self` for a constant matrix `C`.
    pub fn left_mul(&self, c: &Matrix<T>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|x| c.try_mul(x)).collect::<Result<Vec<_>>>()?;
        Ok(PowerSeries { rows: c.rows(), cols: self.cols, coeffs })
    }

    /// `self · C` for a constant matrix `C`.
    pub fn right_mul(&self, c: &Matrix<T>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|x| x.try_mul(c)).collect::<Result<Vec<_>>>()?;
        Ok(PowerSeries { rows: self.rows, cols: c.cols(), coeffs })
    }

    /// Two-sided inverse through `order`, by `X_0 = A_0⁻¹`, `X_l = −A_0⁻¹ Σ_{j<l} A_{l−j} X_j`.
    pub fn inverse(&self, order: usize) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { op: "series inverse", rows: self.rows, cols: self.cols });
        }
        self.check_order(order)?;
        let a0_inv = self.coeffs[0].inverse().ok_or(Error::SingularLeadingCoefficient { dim: self.rows })?;
        let mut xs: Vec<Matrix<T>> = Vec::with_capacity(order + 1);
        xs.push(a0_inv.clone());
        for l in 1..=order {
            let mut acc = Matrix::zeros(self.rows, self.cols);
            for (j, x) in xs.iter().enumerate() {
                let a = &self.coeffs[l - j];
                if !a.is_zero() {
                    acc = &acc + &(a * x);
                }
            }
            xs.push(-&(&a0_inv * &acc));
        }
        Ok(PowerSeries { rows: self.rows, cols: self.cols, coeffs: xs })
    }

    /// Horner evaluation of the truncated polynomial `C_0 + … + ε^T C_T`.
    pub fn evaluate(&self, eps: &T) -> Matrix<T> {
        let mut acc = Matrix::zeros(self.rows, self.cols);
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(eps) + c;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Matrix::is_zero)
    }
}

impl<T: fmt::Debug> fmt::Debug for PowerSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerSeries")
            .field("shape", &(self.rows, self.cols))
            .field("trunc_order", &(self.coeffs.len() - 1))
            .field("coeffs", &self.coeffs)
            .finish()
    }
}
