//! The stage recursion.
//!
//! Stage `j` forms `S̄_j = Σ_{v=1}^{j−1} L_v M_{v,j−1}` (with `S̄_1 = L_0`),
//! removes the parts already hit, `S_j = (I − Σ_{i<j} 𝒫_i) S̄_j`, and splits
//! `N_{j−1} = Nc_j ⊕ N_j`, `Rc_{j−1} = R_j ⊕ Rc_j` by the kernel and image of
//! `S_j` on `N_{j−1}`. The block columns `E_j` and `M_j` then carry the chain
//! structure forward.

use crate::error::{Error, Result};
use crate::family::{FamilyKind, MatrixFamily};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::series::PowerSeries;
use crate::subspace::{
    choose_complement, projection_matrix, restrict_and_split, restricted_inverse, Choice, ComplementStrategy,
    Decomposition, Stage, Subspace,
};

/// Rank of `L(ε)` over the rational functions in `ε`. For a truncated series this is
/// the rank of the known part, a lower bound.
///
/// Every `r x r` minor is a polynomial of degree at most `d·r`, so the maximum
/// rank over `d·min(m, n) + 1` distinct sample points is exact.
pub fn generic_rank<T: Scalar>(family: &MatrixFamily<T>) -> usize {
    let (m, n) = family.shape();
    let cap = m.min(n);
    let samples = family.degree_bound() * cap + 1;
    let mut best = 0;
    for i in 1..=samples as i64 {
        best = best.max(family.evaluate(&T::from_int(i)).rank());
        if best == cap {
            break;
        }
    }
    best
}

/// Default stage budget for reaching the stabilization certificate.
pub fn default_stage_budget<T: Scalar>(family: &MatrixFamily<T>) -> usize {
    let (m, n) = family.shape();
    (m + n + 2).max(family.degree_bound() * m.min(n) + 1)
}

/// The rank of a root element: the longest Jordan chain it starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RootRank {
    Finite(usize),
    Infinite,
}

/// All Jordan chains of a given length, as the image of a generating map.
#[derive(Clone, Debug)]
pub struct JordanChains<T> {
    pub length: usize,
    /// Block upper-triangular `(M_{a,b})`, `a ≤ b ≤ length`; acts on `(n_1; …; n_length)`.
    pub generator: Matrix<T>,
    /// Bases of `N_1, …, N_length`.
    pub kernels: Vec<Subspace<T>>,
    /// Columns are stacked chains `(b_{l−1}; …; b_0)`, one per basis vector of `N_1 × … × N_l`.
    pub chains: Matrix<T>,
}

impl<T: Scalar> JordanChains<T> {
    /// Dimension of the chain space, `Σ dim N_i`.
    pub fn dim(&self) -> usize {
        self.chains.cols()
    }
}

#[derive(Clone, Debug)]
pub struct Recursion<T> {
    family: MatrixFamily<T>,
    strategy: ComplementStrategy<T>,
    generic_rank: usize,
    ledger: Decomposition<T>,
    // e_cols[j - 1][i - 1] = E_{i,j}
    e_cols: Vec<Vec<Matrix<T>>>,
    m_cols: Vec<Vec<Matrix<T>>>,
    k: Option<usize>,
}

impl<T: Scalar> Recursion<T> {
    /// Sets up the recursion and runs stage 1.
    pub fn new(family: MatrixFamily<T>, strategy: ComplementStrategy<T>) -> Result<Self> {
        if family.is_zero() {
            return Err(Error::ZeroFamily);
        }
        let (m, n) = family.shape();
        let mut rec = Recursion {
            generic_rank: generic_rank(&family),
            family,
            strategy,
            ledger: Decomposition::new(n, m),
            e_cols: Vec::new(),
            m_cols: Vec::new(),
            k: None,
        };
        rec.run_stage()?;
        Ok(rec)
    }

    pub fn family(&self) -> &MatrixFamily<T> {
        &self.family
    }

    pub fn generic_rank(&self) -> usize {
        self.generic_rank
    }

    pub fn decomposition(&self) -> &Decomposition<T> {
        &self.ledger
    }

    /// Number of completed stages.
    pub fn stages(&self) -> usize {
        self.ledger.len()
    }

    /// The stabilization index, once certified.
    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn require_k(&self) -> Result<usize> {
        self.k.ok_or(Error::NotStabilized { stages: self.stages() })
    }

    /// `E_{i,j}`, one-based.
    pub fn e(&self, i: usize, j: usize) -> &Matrix<T> {
        &self.e_cols[j - 1][i - 1]
    }

    /// `M_{i,j}`, one-based.
    pub fn m(&self, i: usize, j: usize) -> &Matrix<T> {
        &self.m_cols[j - 1][i - 1]
    }

    pub fn e_column(&self, j: usize) -> &[Matrix<T>] {
        &self.e_cols[j - 1]
    }

    pub fn m_column(&self, j: usize) -> &[Matrix<T>] {
        &self.m_cols[j - 1]
    }

    fn coefficient(&self, power: usize, stage: usize) -> Result<&Matrix<T>> {
        self.family.coeff(power).ok_or_else(|| Error::TruncationExhausted {
            stage,
            power,
            available: self.family.known_order().unwrap_or(0),
        })
    }

    fn choice(&self, stage: usize, rc: bool) -> Choice<'_, T> {
        if let ComplementStrategy::Given(map) = &self.strategy {
            if let Some(given) = map.get(&stage) {
                let basis = if rc { &given.rc } else { &given.nc };
                if let Some(b) = basis {
                    return Choice::Given(b);
                }
            }
        }
        Choice::Pivot
    }

    /// Computes the next stage and appends its `E` and `M` columns.
    pub fn run_stage(&mut self) -> Result<()> {
        let s = self.stages();
        let j = s + 1;
        let (m, n) = self.family.shape();

        let sbar = if j == 1 {
            self.coefficient(0, j)?.clone()
        } else {
            let mut acc = Matrix::zeros(m, n);
            for v in 1..=s {
                let lv = self.coefficient(v, j)?;
                if !lv.is_zero() {
                    acc = &acc + &(lv * self.m(v, s));
                }
            }
            acc
        };
        let mut removed = Matrix::zeros(m, m);
        for st in self.ledger.stages() {
            removed = &removed + &st.calp;
        }
        let s_mat = &sbar - &(&removed * &sbar);

        let domain = self.ledger.tail_kernel();
        let corange = self.ledger.tail_corange();
        let (n_new, r_new) = restrict_and_split(&s_mat, &domain).map_err(|e| e.at_stage(j, "N"))?;
        let nc = choose_complement(&domain, &n_new, self.choice(j, false)).map_err(|e| e.at_stage(j, "Nc"))?;
        let rc = choose_complement(&corange, &r_new, self.choice(j, true)).map_err(|e| e.at_stage(j, "Rc"))?;

        let mut dom_parts: Vec<&Subspace<T>> = self.ledger.stages().iter().map(|st| &st.nc).collect();
        dom_parts.push(&nc);
        dom_parts.push(&n_new);
        let p = projection_matrix(&dom_parts, s).map_err(|e| e.at_stage(j, "Nc"))?;
        let mut cod_parts: Vec<&Subspace<T>> = self.ledger.stages().iter().map(|st| &st.r).collect();
        cod_parts.push(&r_new);
        cod_parts.push(&rc);
        let calp = projection_matrix(&cod_parts, s).map_err(|e| e.at_stage(j, "R"))?;
        let splus = restricted_inverse(&s_mat, &nc, &cod_parts, s).map_err(|e| e.at_stage(j, "R"))?;

        let stage = Stage { index: j, sbar, s: s_mat, nc, n: n_new, r: r_new, rc, p, calp, splus };
        self.ledger.push(stage);
        self.push_e_column(j);
        self.push_m_column(j);

        // A truncated series may gain rank from unknown terms; only full rank is conclusive.
        let conclusive = self.family.kind() == FamilyKind::Polynomial || self.generic_rank == m.min(n);
        if self.k.is_none() && conclusive && self.ledger.range_rank() == self.generic_rank {
            let last = self.ledger.stages().iter().rposition(|st| st.r.dim() > 0).expect("nonzero family has a range");
            self.k = Some(last);
        }
        Ok(())
    }

    fn push_e_column(&mut self, j: usize) {
        let n = self.family.shape().1;
        let mut col = vec![Matrix::zeros(n, n); j];
        col[j - 1] = Matrix::identity(n);
        for i in (1..j).rev() {
            let mut acc = Matrix::zeros(self.family.shape().0, n);
            for v in i + 1..=j {
                let sbar = &self.ledger.stage(v).sbar;
                if !sbar.is_zero() && !col[v - 1].is_zero() {
                    acc = &acc + &(sbar * &col[v - 1]);
                }
            }
            col[i - 1] = -&(&self.ledger.stage(i).splus * &acc);
        }
        self.e_cols.push(col);
    }

    fn push_m_column(&mut self, j: usize) {
        let n = self.family.shape().1;
        let e = &self.e_cols[j - 1];
        let mut col = Vec::with_capacity(j);
        col.push(e[0].clone());
        for r in 2..=j {
            let mut acc = Matrix::zeros(n, n);
            for c in r - 1..j {
                let (a, b) = (self.m(r - 1, c), &e[c]);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            col.push(acc);
        }
        self.m_cols.push(col);
    }

    /// Runs stages until the certificate `Σ dim R_i = generic rank` holds.
    pub fn stabilize(&mut self, max_stages: Option<usize>) -> Result<usize> {
        let budget = max_stages.unwrap_or_else(|| default_stage_budget(&self.family));
        while self.k.is_none() {
            if self.stages() >= budget {
                return Err(Error::NoStabilization {
                    stages: self.stages(),
                    rank_reached: self.ledger.range_rank(),
                    generic_rank: self.generic_rank,
                });
            }
            self.run_stage()?;
        }
        Ok(self.k.expect("loop exits on certificate"))
    }

    /// Runs stages until at least `stages` are complete.
    pub fn extend_to(&mut self, stages: usize) -> Result<()> {
        while self.stages() < stages {
            self.run_stage()?;
        }
        Ok(())
    }

    /// Checks `Σ_{v<j} L_v M_{v+1,j} = S_j` for stage `j`.
    pub fn chain_identity_holds(&self, j: usize) -> bool {
        let (m, n) = self.family.shape();
        let mut acc = Matrix::zeros(m, n);
        for v in 0..j {
            match self.family.coeff(v) {
                Some(lv) => acc = &acc + &(lv * self.m(v + 1, j)),
                None => return false,
            }
        }
        acc == self.ledger.stage(j).s
    }

    /// All Jordan chains of length `l`: the image of `N_1 × … × N_l` under `(M_{a,b})`.
    pub fn jordan_chains(&mut self, l: usize) -> Result<JordanChains<T>> {
        self.extend_to(l)?;
        let n = self.family.shape().1;
        let mut generator = Matrix::zeros(n * l, n * l);
        for b in 1..=l {
            for a in 1..=b {
                generator.set_block((a - 1) * n, (b - 1) * n, self.m(a, b));
            }
        }
        let kernels: Vec<Subspace<T>> = (1..=l).map(|i| self.ledger.stage(i).n.clone()).collect();
        let total: usize = kernels.iter().map(Subspace::dim).sum();
        let mut params = Matrix::zeros(n * l, total);
        let mut offset = 0;
        for (i, kernel) in kernels.iter().enumerate() {
            params.set_block(i * n, offset, kernel.basis());
            offset += kernel.dim();
        }
        let chains = generator.try_mul(&params)?;
        Ok(JordanChains { length: l, generator, kernels, chains })
    }

    /// Largest `i` with `b0 ∈ N_i`, or infinite when `b0 ∈ N_{k+1}`.
    pub fn rank_of_root(&self, b0: &[T]) -> Result<RootRank> {
        let n = self.family.shape().1;
        if b0.len() != n {
            return Err(Error::VectorLength { expected: n, found: b0.len() });
        }
        if b0.iter().all(T::is_zero) {
            return Err(Error::ZeroRoot);
        }
        for (idx, st) in self.ledger.stages().iter().enumerate() {
            if !st.n.contains_vector(b0) {
                return Ok(RootRank::Finite(idx));
            }
        }
        match self.k {
            Some(k) if self.stages() > k => Ok(RootRank::Infinite),
            _ => Err(Error::NotStabilized { stages: self.stages() }),
        }
    }

    /// `p_d(ε) = I + ε M_{d,d+1} + … + ε^d M_{1,d+1}` and `L(ε)·p_d(ε)` through `order`.
    pub fn partial_triangularize(&mut self, d: usize, order: usize) -> Result<(PowerSeries<T>, PowerSeries<T>)> {
        self.extend_to(d + 1)?;
        let coeffs: Vec<Matrix<T>> = (0..=d).map(|i| self.m(d + 1 - i, d + 1).clone()).collect();
        let n = self.family.shape().1;
        let p = PowerSeries::from_polynomial(n, n, &coeffs, order);
        let l = self.family.series(order)?;
        let lp = l.try_mul(&p)?;
        Ok((p, lp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    type M = Matrix<Rat>;

    fn example1() -> MatrixFamily<Rat> {
        MatrixFamily::polynomial(vec![
            M::from_i64(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]]),
            M::from_i64(&[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]),
            M::from_i64(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            M::from_i64(&[&[0, 0, 1], &[0, 0, 1], &[1, 0, 0]]),
        ])
    }

    #[test]
    fn generic_ranks() {
        assert_eq!(generic_rank(&example1()), 3);
        assert_eq!(generic_rank(&MatrixFamily::<Rat>::polynomial(vec![M::zeros(2, 2)])), 0);
        assert_eq!(generic_rank(&MatrixFamily::polynomial(vec![M::zeros(2, 2), M::identity(2)])), 2);
    }

    #[test]
    fn stage_operators_of_example() {
        let mut rec = Recursion::new(example1(), ComplementStrategy::Pivot).unwrap();
        rec.extend_to(4).unwrap();
        let d = rec.decomposition();
        assert_eq!(d.stage(2).sbar, M::from_i64(&[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]));
        assert_eq!(d.stage(2).s, d.stage(2).sbar);
        assert_eq!(d.stage(3).sbar, M::from_i64(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(d.stage(3).s, M::from_i64(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]]));
        assert_eq!(d.stage(4).sbar, M::from_i64(&[&[0, 0, 1], &[0, 0, 1], &[1, -1, 0]]));
        assert_eq!(d.stage(4).s, M::from_i64(&[&[0, 0, 0], &[0, 0, 0], &[1, -1, 0]]));
        assert!(d.stage(4).n.is_zero());
        assert_eq!(d.stage(4).r, Subspace::span(&M::unit_column(3, 2)));
        assert_eq!(rec.k(), Some(3));
    }

    #[test]
    fn invertible_constant_stabilizes_immediately() {
        let f = MatrixFamily::polynomial(vec![M::from_i64(&[&[2, 1], &[1, 1]])]);
        let rec = Recursion::new(f, ComplementStrategy::Pivot).unwrap();
        assert_eq!(rec.k(), Some(0));
        assert!(rec.decomposition().stage(1).n.is_zero());
        assert_eq!(rec.decomposition().stage(1).r.dim(), 2);
    }

    #[test]
    fn scalar_multiple_of_identity() {
        let f = MatrixFamily::polynomial(vec![M::zeros(2, 2), M::identity(2)]);
        let mut rec = Recursion::new(f, ComplementStrategy::Pivot).unwrap();
        assert_eq!(rec.k(), None);
        assert_eq!(rec.stabilize(None).unwrap(), 1);
        assert!(rec.decomposition().stage(1).r.is_zero());
        assert_eq!(rec.decomposition().stage(2).r.dim(), 2);
    }

    #[test]
    fn diagonal_entries_of_e_and_m_are_identity() {
        let mut rec = Recursion::new(example1(), ComplementStrategy::Pivot).unwrap();
        rec.extend_to(6).unwrap();
        for j in 1..=6 {
            assert_eq!(rec.e(j, j), &M::identity(3));
            assert_eq!(rec.m(j, j), &M::identity(3));
            assert!(rec.chain_identity_holds(j));
        }
    }

    #[test]
    fn root_ranks() {
        let mut rec = Recursion::new(example1(), ComplementStrategy::Pivot).unwrap();
        rec.stabilize(None).unwrap();
        let r = |v: [i64; 3]| rec.rank_of_root(&v.map(|x| Rat::from_integer(x.into())));
        assert_eq!(r([0, 1, 0]).unwrap(), RootRank::Finite(3));
        assert_eq!(r([1, 0, 0]).unwrap(), RootRank::Finite(0));
        assert_eq!(r([0, 0, 1]).unwrap(), RootRank::Finite(1));
        assert!(matches!(r([0, 0, 0]), Err(Error::ZeroRoot)));
    }

    #[test]
    fn zero_family_is_rejected() {
        let f = MatrixFamily::<Rat>::polynomial(vec![M::zeros(2, 2)]);
        assert!(matches!(Recursion::new(f, ComplementStrategy::Pivot), Err(Error::ZeroFamily)));
    }

    #[test]
    fn truncation_is_reported_with_stage() {
        let f = MatrixFamily::truncated(vec![M::zeros(1, 1), M::identity(1)]);
        let mut rec = Recursion::new(f, ComplementStrategy::Pivot).unwrap();
        rec.run_stage().unwrap();
        let err = rec.run_stage().unwrap_err();
        assert_eq!(err, Error::TruncationExhausted { stage: 3, power: 2, available: 1 });
    }
}
