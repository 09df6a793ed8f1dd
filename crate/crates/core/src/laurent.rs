//! Truncated matrix Laurent series with a finite pole at zero.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::series::PowerSeries;

/// `C_{−p} ε^{−p} + … + C_T ε^T`, known exactly through `ε^T`.
///
/// The pole order is kept minimal: when `p > 0` the leading coefficient is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries<T> {
    rows: usize,
    cols: usize,
    pole: usize,
    coeffs: Vec<Matrix<T>>,
}

impl<T: Scalar> LaurentSeries<T> {
    /// Coefficients `C_{−pole}..C_T`. The pole is renormalized.
    pub fn new(pole: usize, coeffs: Vec<Matrix<T>>) -> Self {
        let first = coeffs.first().expect("a Laurent series needs at least one coefficient");
        let (rows, cols) = first.shape();
        assert!(coeffs.iter().all(|c| c.shape() == (rows, cols)), "Laurent coefficients must share a shape");
        assert!(coeffs.len() > pole, "a Laurent series must reach at least the constant term");
        let mut s = LaurentSeries { rows, cols, pole, coeffs };
        s.normalize();
        s
    }

    /// `ε^shift · series`; negative shifts create a pole.
    pub fn from_series(series: &PowerSeries<T>, shift: isize) -> Result<Self> {
        let (rows, cols) = series.shape();
        let t = series.trunc_order() as isize + shift;
        if t < 0 {
            return Err(Error::InsufficientOrder { required: 0, available: 0 });
        }
        let pole = (-shift).max(0) as usize;
        let coeffs = (-(pole as isize)..=t)
            .map(|i| {
                let j = i - shift;
                if j >= 0 {
                    series.coeff(j as usize).clone()
                } else {
                    Matrix::zeros(rows, cols)
                }
            })
            .collect();
        Ok(Self::new(pole, coeffs))
    }

    #[inline]
    pub fn pole_order(&self) -> usize {
        self.pole
    }

    #[inline]
    pub fn trunc_order(&self) -> isize {
        self.coeffs.len() as isize - self.pole as isize - 1
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Coefficient of `ε^i`; `None` past the truncation order. Below the pole it is zero.
    pub fn coeff(&self, i: isize) -> Option<Matrix<T>> {
        if i > self.trunc_order() {
            return None;
        }
        let idx = i + self.pole as isize;
        Some(if idx < 0 { Matrix::zeros(self.rows, self.cols) } else { self.coeffs[idx as usize].clone() })
    }

    /// Coefficients `C_{−p}..C_T` in order.
    pub fn coeffs(&self) -> &[Matrix<T>] {
        &self.coeffs
    }

    fn normalize(&mut self) {
        let lead_zeros = self.coeffs.iter().take(self.pole).take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.pole -= lead_zeros;
        }
    }

    /// Keeps only coefficients through `ε^order`.
    pub fn truncate(&self, order: isize) -> Result<Self> {
        if order > self.trunc_order() || order < 0 {
            return Err(Error::InsufficientOrder {
                required: order.max(0) as usize,
                available: self.trunc_order().max(0) as usize,
            });
        }
        let len = (order + self.pole as isize + 1) as usize;
        Ok(Self::new(self.pole, self.coeffs[..len].to_vec()))
    }

    /// Product with conservative truncation `min(T_A − p_B, T_B − p_A)`.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch { op: "Laurent product", left: self.shape(), right: rhs.shape() });
        }
        let pole = self.pole + rhs.pole;
        let t = (self.trunc_order() - rhs.pole as isize).min(rhs.trunc_order() - self.pole as isize);
        if t < 0 {
            return Err(Error::InsufficientOrder { required: 0, available: 0 });
        }
        let len = (t + pole as isize + 1) as usize;
        let mut coeffs = vec![Matrix::zeros(self.rows, rhs.cols); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        Ok(Self::new(pole, coeffs))
    }

    fn zip_with(&self, rhs: &Self, op: &'static str, f: impl Fn(&Matrix<T>, &Matrix<T>) -> Matrix<T>) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch { op, left: self.shape(), right: rhs.shape() });
        }
        let pole = self.pole.max(rhs.pole);
        let t = self.trunc_order().min(rhs.trunc_order());
        let coeffs = (-(pole as isize)..=t)
            .map(|i| f(&self.coeff(i).expect("within truncation"), &rhs.coeff(i).expect("within truncation")))
            .collect();
        Ok(Self::new(pole, coeffs))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "Laurent sum", |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "Laurent difference", |a, b| a - b)
    }

    /// `ε^k · self`. Fails if the result would have a zero-length expansion.
    pub fn shift(&self, k: isize) -> Result<Self> {
        let pole = self.pole as isize - k;
        let t = self.trunc_order() + k;
        if t < 0 {
            return Err(Error::InsufficientOrder { required: 0, available: 0 });
        }
        if pole >= 0 {
            return Ok(Self::new(pole as usize, self.coeffs.clone()));
        }
        // Positive leading power: drop into a plain series with leading zeros.
        let mut coeffs = vec![Matrix::zeros(self.rows, self.cols); (-pole) as usize];
        coeffs.extend(self.coeffs.iter().cloned());
        Ok(Self::new(0, coeffs))
    }

    /// The part with nonnegative powers, as a power series.
    pub fn regular_part(&self) -> Result<PowerSeries<T>> {
        if self.trunc_order() < 0 {
            return Err(Error::InsufficientOrder { required: 0, available: 0 });
        }
        Ok(PowerSeries::new(self.coeffs[self.pole..].to_vec()))
    }

    /// Exact equality of all coefficients from `ε^{−max pole}` through `ε^order`.
    pub fn agrees_through(&self, other: &Self, order: isize) -> bool {
        if self.shape() != other.shape() || order > self.trunc_order() || order > other.trunc_order() {
            return false;
        }
        let low = -(self.pole.max(other.pole) as isize);
        (low..=order).all(|i| self.coeff(i) == other.coeff(i))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Matrix::is_zero)
    }
}

impl<T: fmt::Debug> fmt::Debug for LaurentSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaurentSeries")
            .field("shape", &(self.rows, self.cols))
            .field("pole", &self.pole)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}
