//! Input families `L(ε) = Σ εⁱ L_i`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::series::PowerSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Coefficients past the last one given are exactly zero.
    Polynomial,
    /// Coefficients past the truncation order are unknown.
    Truncated,
}

/// A matrix family, either an exact polynomial or a truncated power series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFamily<T> {
    rows: usize,
    cols: usize,
    kind: FamilyKind,
    coeffs: Vec<Matrix<T>>,
    zero: Matrix<T>,
}

impl<T: Scalar> MatrixFamily<T> {
    pub fn polynomial(coeffs: Vec<Matrix<T>>) -> Self {
        Self::build(FamilyKind::Polynomial, coeffs)
    }

    /// A series known through `ε^{coeffs.len() − 1}`.
    pub fn truncated(coeffs: Vec<Matrix<T>>) -> Self {
        Self::build(FamilyKind::Truncated, coeffs)
    }

    fn build(kind: FamilyKind, coeffs: Vec<Matrix<T>>) -> Self {
        let (rows, cols) = coeffs.first().expect("a family needs at least one coefficient").shape();
        assert!(coeffs.iter().all(|c| c.shape() == (rows, cols)), "family coefficients must share a shape");
        MatrixFamily { rows, cols, kind, coeffs, zero: Matrix::zeros(rows, cols) }
    }

    /// The family `ε^shift · self`.
    pub fn shifted(&self, shift: usize) -> Self {
        let mut coeffs = vec![self.zero.clone(); shift];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::build(self.kind, coeffs)
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[Matrix<T>] {
        &self.coeffs
    }

    /// `L_i`, or `None` when it lies past the truncation order of a series.
    pub fn coeff(&self, i: usize) -> Option<&Matrix<T>> {
        match self.coeffs.get(i) {
            Some(c) => Some(c),
            None if self.kind == FamilyKind::Polynomial => Some(&self.zero),
            None => None,
        }
    }

    /// The last order at which coefficients are known; `None` for polynomials.
    pub fn known_order(&self) -> Option<usize> {
        match self.kind {
            FamilyKind::Polynomial => None,
            FamilyKind::Truncated => Some(self.coeffs.len() - 1),
        }
    }

    /// Index of the last nonzero coefficient, or `None` for the zero family.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Degree used for sampling: the true degree of a polynomial, the truncation order of a series.
    pub fn degree_bound(&self) -> usize {
        match self.kind {
            FamilyKind::Polynomial => self.degree().unwrap_or(0),
            FamilyKind::Truncated => self.coeffs.len() - 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// The family as a series of the requested order.
    pub fn series(&self, order: usize) -> Result<PowerSeries<T>> {
        if let Some(known) = self.known_order() {
            if order > known {
                return Err(Error::InsufficientOrder { required: order, available: known });
            }
        }
        Ok(PowerSeries::from_polynomial(self.rows, self.cols, &self.coeffs, order))
    }

    /// `L(ε₀)`, evaluating the known coefficients.
    pub fn evaluate(&self, eps: &T) -> Matrix<T> {
        let mut acc = Matrix::zeros(self.rows, self.cols);
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(eps) + c;
        }
        acc
    }
}
