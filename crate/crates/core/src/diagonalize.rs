//! Transformations `φ`, `ψ`, the diagonal `Δ`, and what follows from them.

use crate::error::{Error, Result};
use crate::family::MatrixFamily;
use crate::laurent::LaurentSeries;
use crate::matrix::Matrix;
use crate::recursion::Recursion;
use crate::scalar::Scalar;
use crate::series::PowerSeries;
use crate::subspace::{ComplementStrategy, Subspace};

#[derive(Clone, Debug, Default)]
pub struct Options<T> {
    /// Truncation order for `φ`, `ψ` and the residual check. Defaults to `max(2k + 4, 12)`,
    /// capped for truncated inputs so that only known coefficients are used.
    pub order: Option<usize>,
    /// Stage budget for the stabilization certificate.
    pub max_stages: Option<usize>,
    pub strategy: ComplementStrategy<T>,
}

/// A verified diagonalization `ψ⁻¹(ε) L(ε) φ(ε) = Δ(ε)` through `order`.
#[derive(Clone, Debug)]
pub struct Diagonalization<T> {
    k: usize,
    order: usize,
    recursion: Recursion<T>,
    delta_terms: Vec<(usize, Matrix<T>)>,
    phi: PowerSeries<T>,
    psi: PowerSeries<T>,
    phi_inv: PowerSeries<T>,
    psi_inv: PowerSeries<T>,
}

/// `L(ε) φ(ε) = ψ(ε) S_P P(ε)` with constant `S_P` and diagonal projection polynomial `P(ε)`.
#[derive(Clone, Debug)]
pub struct SmithFactorization<T> {
    /// `S_P = Σ S_i P_i`.
    pub sp: Matrix<T>,
    /// `(i − 1, P_i)` for `i = 1..k+1`.
    pub p_terms: Vec<(usize, Matrix<T>)>,
    /// `𝒜(ε) = ψ(ε) S_P`.
    pub a_series: PowerSeries<T>,
    /// Smith exponents `i − 1`, each repeated `dim Nc_i` times, ascending.
    pub exponents: Vec<usize>,
}

impl<T: Scalar> SmithFactorization<T> {
    /// `P(ε)` as a polynomial series of the given order.
    pub fn p_series(&self, order: usize) -> PowerSeries<T> {
        polynomial_from_terms(&self.p_terms, self.sp.cols(), self.sp.cols(), order)
    }

    /// `P⁻¹(ε) = P_1 + ε⁻¹ P_2 + … + ε^{−k} P_{k+1}`, an inverse on the complement of `N_{k+1}`.
    pub fn p_inverse(&self, order: usize) -> LaurentSeries<T> {
        laurent_from_negative_terms(&self.p_terms, order)
    }
}

fn polynomial_from_terms<T: Scalar>(terms: &[(usize, Matrix<T>)], rows: usize, cols: usize, order: usize) -> PowerSeries<T> {
    let mut coeffs = vec![Matrix::zeros(rows, cols); order + 1];
    for (power, m) in terms {
        if *power <= order {
            coeffs[*power] = &coeffs[*power] + m;
        }
    }
    PowerSeries::new(coeffs)
}

/// `Σ ε^{−power} m` over the terms, with zero coefficients through `order`.
fn laurent_from_negative_terms<T: Scalar>(terms: &[(usize, Matrix<T>)], order: usize) -> LaurentSeries<T> {
    let pole = terms.iter().map(|(p, _)| *p).max().unwrap_or(0);
    let (rows, cols) = terms[0].1.shape();
    let mut coeffs = vec![Matrix::zeros(rows, cols); pole + order + 1];
    for (power, m) in terms {
        coeffs[pole - power] = &coeffs[pole - power] + m;
    }
    LaurentSeries::new(pole, coeffs)
}

/// Stabilizes the recursion, builds `φ`, `ψ`, `Δ` and checks the diagonalization exactly.
pub fn diagonalize<T: Scalar>(family: &MatrixFamily<T>, options: Options<T>) -> Result<Diagonalization<T>> {
    let mut recursion = Recursion::new(family.clone(), options.strategy)?;
    let k = recursion.stabilize(options.max_stages)?;
    let default = (2 * k + 4).max(12);
    let order = match (family.known_order(), options.order) {
        (None, requested) => requested.unwrap_or(default),
        (Some(known), requested) => {
            let cap = known.saturating_sub(k);
            match requested {
                Some(t) if t > cap => return Err(Error::InsufficientOrder { required: t, available: cap }),
                Some(t) => t,
                None => default.min(cap),
            }
        }
    };
    recursion.extend_to(k + 1 + order)?;
    let phi = phi_series(&recursion, k, order);
    let psi = psi_series(&recursion, k, order);
    let phi_inv = phi.inverse(order)?;
    let psi_inv = psi.inverse(order)?;
    let delta_terms: Vec<(usize, Matrix<T>)> = recursion.decomposition().stages()[..=k]
        .iter()
        .map(|st| (st.index - 1, &st.s * &st.p))
        .collect();

    let result = Diagonalization { k, order, recursion, delta_terms, phi, psi, phi_inv, psi_inv };
    if let Some(bad) = result.residual_failure()? {
        return Err(Error::ResidualNonzero { order: bad });
    }
    Ok(result)
}

/// `φ_i = M_{k+1,k+1+i}` for `i = 0..=order`.
pub fn phi_series<T: Scalar>(rec: &Recursion<T>, k: usize, order: usize) -> PowerSeries<T> {
    PowerSeries::new((0..=order).map(|i| rec.m(k + 1, k + 1 + i).clone()).collect())
}

/// `ψ_0 = I`, `ψ_i = Σ_{j=1}^{k+1} S_{i+j} S_j⁺` for `i = 1..=order`.
pub fn psi_series<T: Scalar>(rec: &Recursion<T>, k: usize, order: usize) -> PowerSeries<T> {
    let m = rec.family().shape().0;
    let d = rec.decomposition();
    let mut coeffs = vec![Matrix::identity(m)];
    for i in 1..=order {
        let mut acc = Matrix::zeros(m, m);
        for j in 1..=k + 1 {
            let (s, splus) = (&d.stage(i + j).s, &d.stage(j).splus);
            if !s.is_zero() && !splus.is_zero() {
                acc = &acc + &(s * splus);
            }
        }
        coeffs.push(acc);
    }
    PowerSeries::new(coeffs)
}

impl<T: Scalar> Diagonalization<T> {
    pub fn k(&self) -> usize {
        self.k
    }

    /// The order through which `φ`, `ψ` and the residual are exact.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn recursion(&self) -> &Recursion<T> {
        &self.recursion
    }

    pub fn family(&self) -> &MatrixFamily<T> {
        self.recursion.family()
    }

    pub fn generic_rank(&self) -> usize {
        self.recursion.generic_rank()
    }

    /// `(i − 1, S_i P_i)` for `i = 1..k+1`.
    pub fn delta_terms(&self) -> &[(usize, Matrix<T>)] {
        &self.delta_terms
    }

    pub fn phi(&self) -> &PowerSeries<T> {
        &self.phi
    }

    pub fn psi(&self) -> &PowerSeries<T> {
        &self.psi
    }

    pub fn phi_inv(&self) -> &PowerSeries<T> {
        &self.phi_inv
    }

    pub fn psi_inv(&self) -> &PowerSeries<T> {
        &self.psi_inv
    }

    /// `N_{k+1}`: the kernel part that no stage reaches.
    pub fn tail_kernel(&self) -> &Subspace<T> {
        &self.recursion.decomposition().stage(self.k + 1).n
    }

    /// `Rc_{k+1}`: the codomain part outside every range.
    pub fn tail_corange(&self) -> &Subspace<T> {
        &self.recursion.decomposition().stage(self.k + 1).rc
    }

    pub fn delta_series(&self, order: usize) -> PowerSeries<T> {
        let (m, n) = self.family().shape();
        polynomial_from_terms(&self.delta_terms, m, n, order)
    }

    /// First order at which `ψ⁻¹ L φ` and `Δ` differ, through the stored order.
    pub fn residual_failure(&self) -> Result<Option<usize>> {
        let l = self.family().series(self.order)?;
        let lhs = self.psi_inv.try_mul(&l)?.try_mul(&self.phi)?;
        Ok(lhs.first_difference(&self.delta_series(self.order)))
    }

    /// `φ`, `ψ` and `ψ⁻¹` through `order`, running extra stages on a copy when needed.
    pub fn transformations(&self, order: usize) -> Result<(PowerSeries<T>, PowerSeries<T>, PowerSeries<T>)> {
        if order <= self.order {
            return Ok((self.phi.truncate(order)?, self.psi.truncate(order)?, self.psi_inv.truncate(order)?));
        }
        let mut rec = self.recursion.clone();
        rec.extend_to(self.k + 1 + order)?;
        let phi = phi_series(&rec, self.k, order);
        let psi = psi_series(&rec, self.k, order);
        let psi_inv = psi.inverse(order)?;
        Ok((phi, psi, psi_inv))
    }

    /// `Δ⁺(ε) = Σ ε^{−(i−1)} S_i⁺`, carried through `order`.
    pub fn delta_pinv(&self, order: usize) -> LaurentSeries<T> {
        let d = self.recursion.decomposition();
        let terms: Vec<(usize, Matrix<T>)> = (1..=self.k + 1).map(|i| (i - 1, d.stage(i).splus.clone())).collect();
        laurent_from_negative_terms(&terms, order)
    }

    /// `L⁺(ε) = φ(ε) Δ⁺(ε) ψ⁻¹(ε)` through `ε^order`; the pole order is trimmed to the first nonzero coefficient.
    pub fn generalized_inverse(&self, order: usize) -> Result<LaurentSeries<T>> {
        let ext = order + self.k;
        let (phi, _, psi_inv) = self.transformations(ext)?;
        let phi = LaurentSeries::from_series(&phi, 0)?;
        let psi_inv = LaurentSeries::from_series(&psi_inv, 0)?;
        let lp = phi.try_mul(&self.delta_pinv(ext))?.try_mul(&psi_inv)?;
        lp.truncate(order as isize)
    }

    /// `φ(ε)·basis(N_{k+1})` and `ψ(ε)·basis(R_1 ⊕ … ⊕ R_{k+1})`.
    pub fn kernel_range_families(&self, order: usize) -> Result<(PowerSeries<T>, PowerSeries<T>)> {
        let (phi, psi, _) = self.transformations(order)?;
        let d = self.recursion.decomposition();
        let m = self.family().shape().0;
        let ranges: Vec<&Matrix<T>> = d.stages()[..=self.k].iter().map(|st| st.r.basis()).collect();
        let range_basis = Matrix::hstack(m, &ranges);
        Ok((phi.right_mul(self.tail_kernel().basis())?, psi.right_mul(&range_basis)?))
    }

    /// `φ (Σ P_i) φ⁻¹` and `ψ (Σ 𝒫_i) ψ⁻¹`.
    pub fn projector_families(&self, order: usize) -> Result<(PowerSeries<T>, PowerSeries<T>)> {
        let (phi, psi, psi_inv) = self.transformations(order)?;
        let phi_inv = phi.inverse(order)?;
        let d = self.recursion.decomposition();
        let (m, n) = self.family().shape();
        let mut sum_p = Matrix::zeros(n, n);
        let mut sum_calp = Matrix::zeros(m, m);
        for st in &d.stages()[..=self.k] {
            sum_p = &sum_p + &st.p;
            sum_calp = &sum_calp + &st.calp;
        }
        let left = phi.right_mul(&sum_p)?.try_mul(&phi_inv)?;
        let right = psi.right_mul(&sum_calp)?.try_mul(&psi_inv)?;
        Ok((left, right))
    }

    pub fn smith_factorize(&self) -> Result<SmithFactorization<T>> {
        let d = self.recursion.decomposition();
        let (m, n) = self.family().shape();
        let mut sp = Matrix::zeros(m, n);
        let mut p_terms = Vec::with_capacity(self.k + 1);
        let mut exponents = Vec::new();
        for st in &d.stages()[..=self.k] {
            sp = &sp + &(&st.s * &st.p);
            p_terms.push((st.index - 1, st.p.clone()));
            exponents.extend(std::iter::repeat(st.index - 1).take(st.nc.dim()));
        }
        let a_series = self.psi.right_mul(&sp)?;
        Ok(SmithFactorization { sp, p_terms, a_series, exponents })
    }

    /// Checks `L(ε) φ(ε) = Σ ε^i S_{i+1}` through the stored order.
    pub fn triangularization_holds(&self) -> Result<bool> {
        let l = self.family().series(self.order)?;
        let lhs = l.try_mul(&self.phi)?;
        let d = self.recursion.decomposition();
        Ok((0..=self.order).all(|i| lhs.coeff(i) == &d.stage(i + 1).s))
    }
}
