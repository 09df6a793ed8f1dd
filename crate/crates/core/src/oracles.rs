//! Brute-force validators built only on matrix and series algebra, plus the
//! pencil linearization and resolvent recurrences.

use crate::error::{Error, Result};
use crate::family::{FamilyKind, MatrixFamily};
use crate::laurent::LaurentSeries;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::subspace::{kernel_basis, Subspace};

/// The block upper-triangular Toeplitz matrix with block `(i, j) = L_{j−i}` for `j ≥ i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ToeplitzBlock<T> {
    pub l: usize,
    pub matrix: Matrix<T>,
}

pub fn toeplitz_block<T: Scalar>(family: &MatrixFamily<T>, l: usize) -> Result<ToeplitzBlock<T>> {
    let (m, n) = family.shape();
    let mut matrix = Matrix::zeros(m * l, n * l);
    for d in 0..l {
        let c = family.coeff(d).ok_or(Error::InsufficientOrder {
            required: d,
            available: family.known_order().unwrap_or(0),
        })?;
        for i in 0..l - d {
            matrix.set_block(i * m, (i + d) * n, c);
        }
    }
    Ok(ToeplitzBlock { l, matrix })
}

/// Stacked chains `(b_{l−1}; …; b_0)` annihilated by the Toeplitz block.
pub fn toeplitz_nullspace<T: Scalar>(family: &MatrixFamily<T>, l: usize) -> Result<Subspace<T>> {
    Ok(kernel_basis(&toeplitz_block(family, l)?.matrix))
}

/// Coefficients of `det L(ε)` in increasing powers, for a square polynomial family.
///
/// The determinant is sampled at `0..=n·d` and interpolated by divided differences.
pub fn det_polynomial<T: Scalar>(family: &MatrixFamily<T>) -> Result<Vec<T>> {
    let (m, n) = family.shape();
    if m != n {
        return Err(Error::NotSquare { op: "determinant", rows: m, cols: n });
    }
    let degree = family.degree_bound() * n;
    let xs: Vec<T> = (0..=degree as i64).map(T::from_int).collect();
    let mut dd = xs.iter().map(|x| family.evaluate(x).determinant()).collect::<Result<Vec<T>>>()?;
    for level in 1..=degree {
        for i in (level..=degree).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (xs[i].clone() - xs[i - level].clone());
        }
    }
    // Horner expansion of the Newton form.
    let mut coeffs = vec![T::zero(); degree + 1];
    for i in (0..=degree).rev() {
        let mut next = vec![T::zero(); degree + 1];
        for (p, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if p + 1 <= degree {
                next[p + 1] = next[p + 1].clone() + c.clone();
            }
            next[p] = next[p].clone() - c.mul_ref(&xs[i]);
        }
        next[0] = next[0].clone() + dd[i].clone();
        coeffs = next;
    }
    Ok(coeffs)
}

/// Laurent expansion of `L(ε)⁻¹` through `ε^order`, by direct solution of the coefficient equations.
///
/// For `p = 0, 1, …` the system `L(ε) Y(ε) = ε^p I mod ε^{N+1}`, `N = p + order + ν`, is solved,
/// where `ν` is the vanishing order of `det L`. The first solvable `p` is the pole order and
/// `X_j = Y_{j+p}` is uniquely determined for `j ≤ order`. Only polynomial families are accepted.
pub fn direct_laurent_inverse<T: Scalar>(
    family: &MatrixFamily<T>,
    p_max: Option<usize>,
    order: usize,
) -> Result<LaurentSeries<T>> {
    let (m, n) = family.shape();
    let det = det_polynomial(family)?;
    let nu = det.iter().position(|c| !c.is_zero()).ok_or(Error::GenericallySingular { rank: 0, dim: n })?;
    if let Some(known) = family.known_order() {
        let _ = known;
        if family.kind() == FamilyKind::Truncated {
            return Err(Error::InsufficientOrder { required: order + nu, available: known });
        }
    }
    let p_max = p_max.unwrap_or(n * family.degree_bound());
    for p in 0..=p_max {
        let big_n = p + order + nu;
        let blocks = big_n + 1;
        let mut system = Matrix::zeros(m * blocks, n * blocks);
        for l in 0..blocks {
            for j in 0..=l {
                let c = family.coeff(l - j).expect("polynomial coefficients are always known");
                if !c.is_zero() {
                    system.set_block(l * m, j * n, c);
                }
            }
        }
        let mut rhs = Matrix::zeros(m * blocks, n);
        rhs.set_block(p * m, 0, &Matrix::identity(n));
        if let Some(y) = system.solve(&rhs) {
            let coeffs = (0..=p + order).map(|j| y.block(j * n, 0, n, n)).collect();
            return Ok(LaurentSeries::new(p, coeffs));
        }
    }
    Err(Error::PoleBoundExceeded { max_pole: p_max })
}

/// The linear pencil `L̄_0 + ε L̄_1` attached to a polynomial of degree `n ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedPencil<T> {
    pub n: usize,
    /// Block lower triangular, block `(r, c) = L_{r−c}`.
    pub lbar0: Matrix<T>,
    /// Block upper triangular, block `(r, c) = L_{n−(c−r)}`.
    pub lbar1: Matrix<T>,
}

pub fn linearize_polynomial<T: Scalar>(family: &MatrixFamily<T>) -> Result<AugmentedPencil<T>> {
    let n = match family.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::DegreeZero),
    };
    if family.kind() == FamilyKind::Truncated {
        return Err(Error::DegreeZero);
    }
    let (rows, cols) = family.shape();
    let mut lbar0 = Matrix::zeros(n * rows, n * cols);
    let mut lbar1 = Matrix::zeros(n * rows, n * cols);
    for r in 0..n {
        for c in 0..n {
            if r >= c {
                lbar0.set_block(r * rows, c * cols, family.coeff(r - c).expect("polynomial"));
            }
            if c >= r {
                lbar1.set_block(r * rows, c * cols, family.coeff(n - (c - r)).expect("polynomial"));
            }
        }
    }
    Ok(AugmentedPencil { n, lbar0, lbar1 })
}

impl<T: Scalar> AugmentedPencil<T> {
    pub fn family(&self) -> MatrixFamily<T> {
        MatrixFamily::polynomial(vec![self.lbar0.clone(), self.lbar1.clone()])
    }

    /// Reorders stacked chains of the polynomial (length `K`, a multiple of `n`) into
    /// stacked chains of the pencil (length `K / n`): inside each group of `n` blocks the order is reversed.
    pub fn to_pencil_coordinates(&self, chains: &Matrix<T>, block: usize) -> Matrix<T> {
        let total = chains.rows() / block;
        assert_eq!(total % self.n, 0, "chain length must be a multiple of the degree");
        let order: Vec<usize> = (0..total)
            .flat_map(|idx| {
                let (group, r) = (idx / self.n, idx % self.n);
                let source = group * self.n + (self.n - 1 - r);
                (0..block).map(move |t| source * block + t)
            })
            .collect();
        chains.select_rows(&order)
    }
}

/// Outcome of checking the resolvent recurrences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceCheck {
    pub checked_through: usize,
    /// The first failing index `j` (negative for the principal part).
    pub first_violation: Option<isize>,
}

impl RecurrenceCheck {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks `R_{−j} = (−1)^{j−1} (R_{−1} L_0)^{j−1} R_{−1}` and `R_j = (−1)^j (R_0 L_1)^j R_0`
/// for `1 ≤ j ≤ order`, where `R` is the resolvent of `L_0 + ε L_1` with pole order at most 1.
pub fn resolvent_recurrence_check<T: Scalar>(
    l0: &Matrix<T>,
    l1: &Matrix<T>,
    r: &LaurentSeries<T>,
    order: usize,
) -> Result<RecurrenceCheck> {
    if r.pole_order() > 1 {
        return Err(Error::PoleOrderTooHigh { pole: r.pole_order() });
    }
    if r.trunc_order() < order as isize {
        return Err(Error::InsufficientOrder { required: order, available: r.trunc_order().max(0) as usize });
    }
    let coeff = |i: isize| r.coeff(i).expect("within truncation");
    let (rm1, r0) = (coeff(-1), coeff(0));
    let a = &rm1 * l0;
    let b = &r0 * l1;
    let mut neg = rm1.clone();
    let mut pos = r0.clone();
    for j in 1..=order as isize {
        if j > 1 {
            neg = -&(&a * &neg);
        }
        pos = -&(&b * &pos);
        if coeff(-j) != neg {
            return Ok(RecurrenceCheck { checked_through: order, first_violation: Some(-j) });
        }
        if coeff(j) != pos {
            return Ok(RecurrenceCheck { checked_through: order, first_violation: Some(j) });
        }
    }
    Ok(RecurrenceCheck { checked_through: order, first_violation: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    type M = Matrix<Rat>;

    fn q(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    #[test]
    fn toeplitz_layout() {
        let f = MatrixFamily::polynomial(vec![M::from_i64(&[&[1]]), M::from_i64(&[&[2]]), M::from_i64(&[&[3]])]);
        let t = toeplitz_block(&f, 3).unwrap();
        assert_eq!(t.matrix, M::from_i64(&[&[1, 2, 3], &[0, 1, 2], &[0, 0, 1]]));
    }

    #[test]
    fn zero_family_toeplitz_nullspace_is_everything() {
        let f = MatrixFamily::<Rat>::polynomial(vec![M::zeros(2, 2)]);
        assert_eq!(toeplitz_nullspace(&f, 3).unwrap().dim(), 6);
    }

    #[test]
    fn determinant_polynomial() {
        // det [[1, ε], [ε, 1]] = 1 − ε²
        let f = MatrixFamily::polynomial(vec![M::identity(2), M::from_i64(&[&[0, 1], &[1, 0]])]);
        assert_eq!(det_polynomial(&f).unwrap(), vec![q(1), q(0), q(-1)]);
    }

    #[test]
    fn inverse_of_invertible_constant() {
        let l0 = M::from_i64(&[&[2, 1], &[1, 1]]);
        let x = direct_laurent_inverse(&MatrixFamily::polynomial(vec![l0.clone()]), None, 3).unwrap();
        assert_eq!(x.pole_order(), 0);
        assert_eq!(x.coeff(0).unwrap(), l0.inverse().unwrap());
    }

    #[test]
    fn inverse_of_epsilon_identity() {
        let f = MatrixFamily::polynomial(vec![M::zeros(2, 2), M::identity(2)]);
        let x = direct_laurent_inverse(&f, None, 3).unwrap();
        assert_eq!(x.pole_order(), 1);
        assert_eq!(x.coeff(-1).unwrap(), M::identity(2));
        assert!((0..=3).all(|i| x.coeff(i).unwrap().is_zero()));
    }

    #[test]
    fn singular_family_is_rejected() {
        let f = MatrixFamily::polynomial(vec![M::from_i64(&[&[1, 1], &[1, 1]])]);
        assert!(matches!(direct_laurent_inverse(&f, None, 2), Err(Error::GenericallySingular { .. })));
    }

    #[test]
    fn pencil_of_degree_one_is_itself() {
        let l0 = M::from_i64(&[&[1, 0], &[0, 0]]);
        let l1 = M::from_i64(&[&[0, 1], &[1, 0]]);
        let p = linearize_polynomial(&MatrixFamily::polynomial(vec![l0.clone(), l1.clone()])).unwrap();
        assert_eq!((p.n, p.lbar0, p.lbar1), (1, l0, l1));
        assert!(matches!(
            linearize_polynomial(&MatrixFamily::polynomial(vec![M::identity(2)])),
            Err(Error::DegreeZero)
        ));
    }

    #[test]
    fn recurrences_for_simple_pencils() {
        let f = MatrixFamily::polynomial(vec![M::zeros(2, 2), M::identity(2)]);
        let r = direct_laurent_inverse(&f, None, 10).unwrap();
        assert!(resolvent_recurrence_check(&M::zeros(2, 2), &M::identity(2), &r, 10).unwrap().passed());
        let nil = M::from_i64(&[&[0, 1], &[0, 0]]);
        let f = MatrixFamily::polynomial(vec![M::identity(2), nil.clone()]);
        let r = direct_laurent_inverse(&f, None, 10).unwrap();
        assert_eq!(r.coeff(1).unwrap(), -&nil);
        assert!(resolvent_recurrence_check(&M::identity(2), &nil, &r, 10).unwrap().passed());
    }

    #[test]
    fn recurrences_refuse_higher_poles() {
        let f = MatrixFamily::polynomial(vec![M::zeros(1, 1), M::zeros(1, 1), M::identity(1)]);
        let r = direct_laurent_inverse(&f, None, 4).unwrap();
        assert!(matches!(
            resolvent_recurrence_check(&M::zeros(1, 1), &M::zeros(1, 1), &r, 2),
            Err(Error::PoleOrderTooHigh { pole: 2 })
        ));
    }
}
