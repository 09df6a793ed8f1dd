mod common;

use common::*;
use opfamily::oracles::toeplitz_nullspace;
use opfamily::recursion::generic_rank;
use opfamily::{diagonalize, ComplementStrategy, Mat, MatFamily, Options, Recursion, RootRank, Subspace};
use proptest::prelude::*;

fn family_from_seed(seed: u64) -> MatFamily {
    corpus(seed, 4).swap_remove((seed % 4) as usize)
}

/// `b0` starts a chain of length `l` exactly when it is the last block of a Toeplitz null vector.
fn starts_chain(family: &MatFamily, b0: &Mat, l: usize) -> bool {
    let n = family.shape().1;
    let ns = toeplitz_nullspace(family, l).unwrap();
    let last: Vec<usize> = ((l - 1) * n..l * n).collect();
    Subspace::span(&ns.basis().select_rows(&last)).contains(&Subspace::span(b0))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn structured_exponents_are_recovered(seed in any::<u64>(), n in 1usize..=5) {
        let (fam, exps) = structured_family(&mut rng(seed), n);
        let d = diagonalize(&fam, Options::default()).unwrap();
        prop_assert_eq!(d.smith_factorize().unwrap().exponents, exps.clone());
        prop_assert_eq!(d.k(), *exps.iter().max().unwrap());
    }

    #[test]
    fn triangularization_and_partial_transformations(seed in any::<u64>()) {
        let fam = family_from_seed(seed);
        let d = diagonalize(&fam, Options::default()).unwrap();
        prop_assert!(d.triangularization_holds().unwrap());
        let mut rec = d.recursion().clone();
        for deg in 0..=d.k() + 1 {
            let (_, lp) = rec.partial_triangularize(deg, deg + 2).unwrap();
            for i in 0..=deg {
                prop_assert_eq!(lp.coeff(i), &rec.decomposition().stage(i + 1).s);
            }
        }
    }

    #[test]
    fn complement_choice_does_not_change_invariants(seed in any::<u64>()) {
        let fam = family_from_seed(seed);
        let base = diagonalize(&fam, Options::default()).unwrap();
        let strategy = random_given_strategy(&fam, &mut rng(seed ^ 0x5eed), base.k() + 3);
        let tilted = diagonalize(&fam, Options { strategy, ..Options::default() }).unwrap();
        prop_assert_eq!(base.k(), tilted.k());
        let dims = |d: &opfamily::DiagonalizationResult| -> Vec<(usize, usize)> {
            d.recursion().decomposition().stages()[..=d.k()].iter().map(|s| (s.n.dim(), s.nc.dim())).collect()
        };
        prop_assert_eq!(dims(&base), dims(&tilted));
        for i in 1..=base.k() + 1 {
            prop_assert_eq!(&base.recursion().decomposition().stage(i).n, &tilted.recursion().decomposition().stage(i).n);
        }
        prop_assert_eq!(base.smith_factorize().unwrap().exponents, tilted.smith_factorize().unwrap().exponents);
        prop_assert!(tilted.residual_failure().unwrap().is_none());
    }

    #[test]
    fn inverse_independent_of_complements_when_invertible(seed in any::<u64>()) {
        let fam = family_from_seed(seed);
        let (m, n) = fam.shape();
        prop_assume!(m == n && generic_rank(&fam) == n);
        let base = diagonalize(&fam, Options::default()).unwrap();
        let strategy = random_given_strategy(&fam, &mut rng(seed.rotate_left(7)), base.k() + 3);
        let tilted = diagonalize(&fam, Options { strategy, ..Options::default() }).unwrap();
        prop_assert_eq!(base.generalized_inverse(8).unwrap(), tilted.generalized_inverse(8).unwrap());
    }

    #[test]
    fn jordan_chains_fill_the_toeplitz_nullspace(seed in any::<u64>()) {
        let fam = family_from_seed(seed);
        let mut rec = Recursion::new(fam.clone(), ComplementStrategy::Pivot).unwrap();
        let k = rec.stabilize(None).unwrap();
        for l in 1..=k + 2 {
            let chains = rec.jordan_chains(l).unwrap();
            let oracle = toeplitz_nullspace(&fam, l).unwrap();
            prop_assert_eq!(chains.chains.rank(), chains.dim());
            prop_assert_eq!(Subspace::span(&chains.chains), oracle);
        }
    }

    #[test]
    fn root_rank_agrees_with_chain_lengths(seed in any::<u64>()) {
        let fam = family_from_seed(seed);
        let mut rec = Recursion::new(fam.clone(), ComplementStrategy::Pivot).unwrap();
        let k = rec.stabilize(None).unwrap();
        let n1 = rec.decomposition().stage(1).n.clone();
        prop_assume!(!n1.is_zero());
        let mut r = rng(seed);
        let coeffs = random_matrix(&mut r, n1.dim(), 1);
        let b0 = n1.basis() * &coeffs;
        prop_assume!(!b0.is_zero());
        let entries: Vec<_> = (0..b0.rows()).map(|i| b0[(i, 0)].clone()).collect();
        match rec.rank_of_root(&entries).unwrap() {
            RootRank::Finite(len) => {
                prop_assert!(len >= 1 && len <= k);
                prop_assert!(starts_chain(&fam, &b0, len));
                prop_assert!(!starts_chain(&fam, &b0, len + 1));
            }
            RootRank::Infinite => {
                prop_assert!(starts_chain(&fam, &b0, k + 3));
                prop_assert!(rec.decomposition().tail_kernel().contains_vector(&entries));
            }
        }
    }

    #[test]
    fn kernel_and_range_families(seed in any::<u64>()) {
        let fam = family_from_seed(seed);
        let d = diagonalize(&fam, Options::default()).unwrap();
        let order = 8;
        let (kernel, range) = d.kernel_range_families(order).unwrap();
        let l = fam.series(order).unwrap();
        prop_assert!(l.try_mul(&kernel).unwrap().is_zero());
        let (m, n) = fam.shape();
        let rank = generic_rank(&fam);
        prop_assert_eq!(kernel.coeff(0).rank(), n - rank);
        prop_assert_eq!(range.coeff(0).rank(), rank);
        prop_assert_eq!(range.shape().0, m);
        let (left, right) = d.projector_families(order).unwrap();
        prop_assert_eq!(left.try_mul(&left).unwrap(), left.clone());
        prop_assert_eq!(right.try_mul(&right).unwrap(), right.clone());
        prop_assert!(left.try_mul(&kernel).unwrap().is_zero());
        prop_assert_eq!(right.try_mul(&range).unwrap(), range);
    }

    #[test]
    fn truncated_inputs_agree_with_polynomials(seed in any::<u64>()) {
        let fam = family_from_seed(seed);
        let d = diagonalize(&fam, Options::default()).unwrap();
        let known = 2 * d.k() + 10;
        let t = MatFamily::truncated(fam.series(known).unwrap().into_coeffs());
        let (m, n) = fam.shape();
        if generic_rank(&fam) < m.min(n) {
            let err = diagonalize(&t, Options::default()).unwrap_err();
            let exhausted = matches!(err.root_cause(), opfamily::Error::TruncationExhausted { .. });
            prop_assert!(exhausted, "unexpected error: {}", err);
            return Ok(());
        }
        let dt = diagonalize(&t, Options::default()).unwrap();
        prop_assert_eq!(dt.k(), d.k());
        prop_assert_eq!(dt.order(), (2 * d.k() + 4).max(12).min(known - d.k()));
        prop_assert!(d.phi().agrees_through(dt.phi(), dt.order().min(d.order())));
    }
}

#[test]
fn zero_family_is_rejected() {
    let z = MatFamily::polynomial(vec![Mat::zeros(2, 3)]);
    assert!(Recursion::new(z, ComplementStrategy::Pivot).is_err());
}

#[test]
fn short_truncation_is_undetermined() {
    let mut r = rng(3);
    let (fam, exps) = loop {
        let (f, e) = structured_family(&mut r, 3);
        if e.iter().max() == Some(&2) {
            break (f, e);
        }
    };
    assert_eq!(exps.iter().max(), Some(&2));
    let t = MatFamily::truncated(fam.series(1).unwrap().into_coeffs());
    let err = diagonalize(&t, Options::default()).unwrap_err();
    assert!(matches!(err.root_cause(), opfamily::Error::TruncationExhausted { .. }), "{err:?}");
}
