//! Subspaces of `𝕂ⁿ` given by basis matrices, direct-sum splits, projections
//! and restricted inverses.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// A subspace of `𝕂^ambient`, stored as a matrix of linearly independent columns.
///
/// Equality is equality of subspaces, not of bases.
#[derive(Clone, Debug)]
pub struct Subspace<T> {
    ambient: usize,
    basis: Matrix<T>,
}

impl<T: Scalar> Subspace<T> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient) }
    }

    /// The span of the columns of `generators`. Dependent columns are dropped,
    /// keeping the earliest independent ones.
    pub fn span(generators: &Matrix<T>) -> Self {
        let (_, pivots) = generators.rref();
        Subspace { ambient: generators.rows(), basis: generators.select_columns(&pivots) }
    }

    /// Wraps a basis that must already be independent.
    pub fn from_basis(basis: Matrix<T>) -> Result<Self> {
        let rank = basis.rank();
        if rank != basis.cols() {
            return Err(Error::NotInjective { dim: basis.cols(), rank });
        }
        Ok(Subspace { ambient: basis.rows(), basis })
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn contains_vector(&self, v: &[T]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let column = Matrix::from_vec(self.ambient, 1, v.to_vec());
        self.basis.solve(&column).is_some()
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.ambient == other.ambient && (other.is_zero() || self.basis.solve(&other.basis).is_some())
    }

    /// Coordinates of the columns of `vectors` in this basis, if they lie in the subspace.
    pub fn coordinates(&self, vectors: &Matrix<T>) -> Option<Matrix<T>> {
        if vectors.cols() == 0 {
            return Some(Matrix::zeros(self.dim(), 0));
        }
        self.basis.solve(vectors)
    }
}

impl<T: Scalar> PartialEq for Subspace<T> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.dim() == other.dim() && self.contains(other)
    }
}

/// The nullspace of `m`, with the basis read off the free variables of its RREF in increasing column order.
pub fn kernel_basis<T: Scalar>(m: &Matrix<T>) -> Subspace<T> {
    Subspace { ambient: m.cols(), basis: m.null_space() }
}

/// Kernel and image of `s` restricted to `domain`, both in ambient coordinates.
pub fn restrict_and_split<T: Scalar>(s: &Matrix<T>, domain: &Subspace<T>) -> Result<(Subspace<T>, Subspace<T>)> {
    if s.cols() != domain.ambient_dim() {
        return Err(Error::ShapeMismatch {
            op: "restriction",
            left: s.shape(),
            right: (domain.ambient_dim(), domain.dim()),
        });
    }
    let image = s.try_mul(domain.basis())?;
    let coeffs = image.null_space();
    let kernel = Subspace { ambient: domain.ambient_dim(), basis: domain.basis().try_mul(&coeffs)? };
    Ok((kernel, Subspace::span(&image)))
}

/// How direct complements are chosen at each split.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum ComplementStrategy<T> {
    /// Extend the subspace greedily by the ambient basis columns in order.
    #[default]
    Pivot,
    /// Use supplied bases, keyed by stage; stages without an entry fall back to pivot.
    Given(BTreeMap<usize, GivenComplements<T>>),
}

/// Complements supplied for one stage: `Nc_i` inside `N_{i−1}` and `Rc_i` inside `Rc_{i−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GivenComplements<T> {
    pub nc: Option<Matrix<T>>,
    pub rc: Option<Matrix<T>>,
}

/// Which complement to pick: greedy pivot extension or a validated supplied basis.
pub enum Choice<'a, T> {
    Pivot,
    Given(&'a Matrix<T>),
}

/// A complement of `sub` inside `ambient`.
pub fn choose_complement<T: Scalar>(ambient: &Subspace<T>, sub: &Subspace<T>, choice: Choice<'_, T>) -> Result<Subspace<T>> {
    if !ambient.contains(sub) {
        return Err(Error::NotContained { sub_dim: sub.dim(), ambient_dim: ambient.dim() });
    }
    match choice {
        Choice::Pivot => {
            let candidates = Matrix::hstack(ambient.ambient_dim(), &[sub.basis(), ambient.basis()]);
            let (_, pivots) = candidates.rref();
            let chosen: Vec<usize> = pivots.into_iter().filter(|&p| p >= sub.dim()).collect();
            Ok(Subspace { ambient: ambient.ambient_dim(), basis: candidates.select_columns(&chosen) })
        }
        Choice::Given(basis) => {
            let invalid = || Error::InvalidComplement {
                given_dim: basis.cols(),
                sub_dim: sub.dim(),
                ambient_dim: ambient.dim(),
            };
            if basis.rows() != ambient.ambient_dim() {
                return Err(invalid());
            }
            let given = Subspace::from_basis(basis.clone()).map_err(|_| invalid())?;
            let joint = Matrix::hstack(ambient.ambient_dim(), &[sub.basis(), given.basis()]);
            if given.dim() + sub.dim() != ambient.dim() || !ambient.contains(&given) || joint.rank() != ambient.dim() {
                return Err(invalid());
            }
            Ok(given)
        }
    }
}

fn full_basis<T: Scalar>(parts: &[&Subspace<T>]) -> Result<(Matrix<T>, Matrix<T>)> {
    let ambient = parts.first().map_or(0, |p| p.ambient_dim());
    let not_decomposition = || Error::NotADecomposition { ambient, dims: parts.iter().map(|p| p.dim()).collect() };
    if parts.iter().any(|p| p.ambient_dim() != ambient) {
        return Err(not_decomposition());
    }
    let bases: Vec<&Matrix<T>> = parts.iter().map(|p| p.basis()).collect();
    let full = Matrix::hstack(ambient, &bases);
    let inverse = full.inverse().ok_or_else(not_decomposition)?;
    Ok((full, inverse))
}

fn offset_of<T: Scalar>(parts: &[&Subspace<T>], target: usize) -> usize {
    parts[..target].iter().map(|p| p.dim()).sum()
}

/// The projection onto `parts[target]` along all the other parts.
pub fn projection_matrix<T: Scalar>(parts: &[&Subspace<T>], target: usize) -> Result<Matrix<T>> {
    let (full, inverse) = full_basis(parts)?;
    let offset = offset_of(parts, target);
    let dim = parts[target].dim();
    let rows: Vec<usize> = (offset..offset + dim).collect();
    full.select_columns(&rows).try_mul(&inverse.select_rows(&rows))
}

/// The inverse of `s: nc → r`, extended by zero on the other parts of `r_parts`.
///
/// `r_parts[r_index]` must be `r`, and `r_parts` must decompose the codomain.
pub fn restricted_inverse<T: Scalar>(
    s: &Matrix<T>,
    nc: &Subspace<T>,
    r_parts: &[&Subspace<T>],
    r_index: usize,
) -> Result<Matrix<T>> {
    let r = r_parts[r_index];
    let image = s.try_mul(nc.basis())?;
    let rank = image.rank();
    if rank != nc.dim() {
        return Err(Error::NotInjective { dim: nc.dim(), rank });
    }
    let mismatch = || Error::ImageMismatch { dim: nc.dim(), target_dim: r.dim() };
    if nc.dim() != r.dim() {
        return Err(mismatch());
    }
    let gram = r.coordinates(&image).ok_or_else(mismatch)?;
    let gram_inv = gram.inverse().ok_or_else(mismatch)?;
    let (_, inverse) = full_basis(r_parts)?;
    let offset = offset_of(r_parts, r_index);
    let rows: Vec<usize> = (offset..offset + r.dim()).collect();
    nc.basis().try_mul(&gram_inv)?.try_mul(&inverse.select_rows(&rows))
}

/// Everything computed at one stage of the recursion.
#[derive(Clone, Debug)]
pub struct Stage<T> {
    pub index: usize,
    pub sbar: Matrix<T>,
    pub s: Matrix<T>,
    pub nc: Subspace<T>,
    pub n: Subspace<T>,
    pub r: Subspace<T>,
    pub rc: Subspace<T>,
    /// Projection onto `nc` along `Nc_1 ⊕ … ⊕ Nc_{i−1} ⊕ N_i`.
    pub p: Matrix<T>,
    /// Projection onto `r` along `R_1 ⊕ … ⊕ R_{i−1} ⊕ Rc_i`.
    pub calp: Matrix<T>,
    /// `S_i⁻¹ 𝒫_i` on the whole codomain.
    pub splus: Matrix<T>,
}

/// The stage ledger: nested splits of domain and codomain.
#[derive(Clone, Debug)]
pub struct Decomposition<T> {
    domain: usize,
    codomain: usize,
    stages: Vec<Stage<T>>,
}

impl<T: Scalar> Decomposition<T> {
    pub fn new(domain: usize, codomain: usize) -> Self {
        Decomposition { domain, codomain, stages: Vec::new() }
    }

    pub fn domain_dim(&self) -> usize {
        self.domain
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain
    }

    pub fn stages(&self) -> &[Stage<T>] {
        &self.stages
    }

    /// Stage `i`, one-based.
    pub fn stage(&self, i: usize) -> &Stage<T> {
        &self.stages[i - 1]
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// `N_s` for the last stage `s` (the whole domain before any stage).
    pub fn tail_kernel(&self) -> Subspace<T> {
        self.stages.last().map_or_else(|| Subspace::full(self.domain), |s| s.n.clone())
    }

    /// `Rc_s` for the last stage `s` (the whole codomain before any stage).
    pub fn tail_corange(&self) -> Subspace<T> {
        self.stages.last().map_or_else(|| Subspace::full(self.codomain), |s| s.rc.clone())
    }

    pub(crate) fn push(&mut self, stage: Stage<T>) {
        debug_assert_eq!(stage.index, self.stages.len() + 1);
        self.stages.push(stage);
    }

    pub fn range_rank(&self) -> usize {
        self.stages.iter().map(|s| s.r.dim()).sum()
    }

    /// `Nc_1, …, Nc_upto, N_upto`.
    pub fn domain_parts(&self, upto: usize) -> Vec<&Subspace<T>> {
        let mut parts: Vec<&Subspace<T>> = self.stages[..upto].iter().map(|s| &s.nc).collect();
        if upto > 0 {
            parts.push(&self.stages[upto - 1].n);
        }
        parts
    }

    /// `R_1, …, R_upto, Rc_upto`.
    pub fn codomain_parts(&self, upto: usize) -> Vec<&Subspace<T>> {
        let mut parts: Vec<&Subspace<T>> = self.stages[..upto].iter().map(|s| &s.r).collect();
        if upto > 0 {
            parts.push(&self.stages[upto - 1].rc);
        }
        parts
    }

    /// Projection onto `N_s` along `Nc_1 ⊕ … ⊕ Nc_s`, for the last stage `s`.
    pub fn tail_kernel_projection(&self) -> Result<Matrix<T>> {
        let s = self.stages.len();
        if s == 0 {
            return Ok(Matrix::identity(self.domain));
        }
        projection_matrix(&self.domain_parts(s), s)
    }

    /// Projection onto `Rc_s` along `R_1 ⊕ … ⊕ R_s`, for the last stage `s`.
    pub fn tail_corange_projection(&self) -> Result<Matrix<T>> {
        let s = self.stages.len();
        if s == 0 {
            return Ok(Matrix::identity(self.codomain));
        }
        projection_matrix(&self.codomain_parts(s), s)
    }
}
