#![allow(dead_code)]

use std::collections::BTreeMap;

use opfamily::{ComplementStrategy, GivenComplements, Mat, MatFamily, MatLaurent, MatSeries, Rat, Recursion};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn qq(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn e(n: usize, i: usize) -> Mat {
    Mat::unit_column(n, i)
}

/// Matrix from columns given as integer vectors, matching the `[c_1 c_2 c_3]` notation.
pub fn cols(columns: &[[i64; 3]]) -> Mat {
    Mat::from_fn(3, columns.len(), |i, j| q(columns[j][i]))
}

pub fn example1() -> MatFamily {
    MatFamily::polynomial(vec![
        cols(&[[1, 0, 0], [0, 0, 0], [0, 0, 0]]),
        cols(&[[0, 0, 0], [0, 0, 0], [0, 1, 0]]),
        cols(&[[0, 0, 0], [0, 1, 0], [0, 0, 1]]),
        cols(&[[0, 0, 1], [0, 0, 0], [1, 1, 0]]),
    ])
}

/// The complements used in the worked example, stage by stage.
pub fn example1_given() -> ComplementStrategy<Rat> {
    let span = |v: &[[i64; 3]]| Some(cols(v));
    let mut map = BTreeMap::new();
    map.insert(1, GivenComplements { nc: span(&[[1, 0, 0]]), rc: span(&[[0, 1, 0], [0, 0, 1]]) });
    map.insert(2, GivenComplements { nc: span(&[[0, 0, 1]]), rc: span(&[[0, 0, 1]]) });
    map.insert(3, GivenComplements { nc: span(&[]), rc: span(&[[0, 0, 1]]) });
    map.insert(4, GivenComplements { nc: span(&[[0, 1, 0]]), rc: span(&[]) });
    ComplementStrategy::Given(map)
}

/// Coefficient of `ε^p` in `sign · ε^shift / (1 − ε^period)`.
fn geometric(shift: isize, period: isize, sign: i64) -> impl Fn(isize) -> Rat {
    move |p| {
        if p >= shift && (p - shift) % period == 0 {
            q(sign)
        } else {
            q(0)
        }
    }
}

type Entry = Box<dyn Fn(isize) -> Rat>;

fn zero_entry() -> Entry {
    Box::new(|_| q(0))
}

/// Closed form of `φ(ε)` for the worked example, expanded through `order`.
pub fn example1_phi(order: usize) -> MatSeries {
    let grid: [[Entry; 3]; 3] = [
        [Box::new(|p| if p == 0 { q(1) } else { q(0) }), Box::new(geometric(4, 4, 1)), Box::new(geometric(3, 4, -1))],
        [zero_entry(), Box::new(geometric(0, 2, 1)), Box::new(geometric(1, 2, -1))],
        [zero_entry(), Box::new(geometric(1, 4, -1)), Box::new(geometric(0, 4, 1))],
    ];
    MatSeries::new((0..=order as isize).map(|p| Mat::from_fn(3, 3, |i, j| grid[i][j](p))).collect())
}

/// Closed form of `L⁻¹(ε)` for the worked example, from `ε^{−3}` through `order`.
pub fn example1_inverse(order: usize) -> MatLaurent {
    let grid: [[Entry; 3]; 3] = [
        [Box::new(geometric(0, 4, 1)), zero_entry(), Box::new(geometric(1, 4, -1))],
        [Box::new(geometric(0, 2, 1)), Box::new(|p| if p == -2 { q(1) } else { q(0) }), Box::new(geometric(-3, 2, -1))],
        [Box::new(geometric(1, 4, -1)), zero_entry(), Box::new(geometric(-2, 4, 1))],
    ];
    MatLaurent::new(3, (-3..=order as isize).map(|p| Mat::from_fn(3, 3, |i, j| grid[i][j](p))).collect())
}

pub fn small_rational(rng: &mut impl Rng) -> Rat {
    match rng.gen_range(0..10) {
        0..=5 => q(rng.gen_range(-2..=2)),
        6..=8 => q(0),
        _ => qq(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
    }
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| small_rational(rng))
}

pub fn random_invertible(rng: &mut impl Rng, n: usize) -> Mat {
    loop {
        let m = random_matrix(rng, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

fn random_of_rank(rng: &mut impl Rng, rows: usize, cols: usize, rank: usize) -> Mat {
    let a = random_matrix(rng, rows, rank);
    let b = random_matrix(rng, rank, cols);
    &a * &b
}

/// `(U_0 + εU_1) · diag(ε^{a_i}) · (V_0 + εV_1)` with invertible `U_0`, `V_0`.
///
/// The local Smith exponents are exactly the `a_i`.
pub fn structured_family(rng: &mut impl Rng, n: usize) -> (MatFamily, Vec<usize>) {
    let exps: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
    let u = MatSeries::from_polynomial(n, n, &[random_invertible(rng, n), random_matrix(rng, n, n)], 4);
    let v = MatSeries::from_polynomial(n, n, &[random_invertible(rng, n), random_matrix(rng, n, n)], 4);
    let d = MatSeries::new(
        (0..=4).map(|p| Mat::from_fn(n, n, |i, j| if i == j && exps[i] == p { q(1) } else { q(0) })).collect(),
    );
    let l = u.try_mul(&d).unwrap().try_mul(&v).unwrap();
    let mut sorted = exps;
    sorted.sort_unstable();
    (MatFamily::polynomial(l.into_coeffs()), sorted)
}

/// Random polynomial of the given degree with a rank-deficient constant term.
pub fn low_rank_family(rng: &mut impl Rng, rows: usize, cols: usize, degree: usize) -> MatFamily {
    let r0 = rng.gen_range(0..rows.min(cols));
    let mut coeffs = vec![random_of_rank(rng, rows, cols, r0)];
    for i in 1..=degree {
        // Later coefficients are low rank too, so singularities go deeper.
        let r = if i == degree { rows.min(cols) } else { rng.gen_range(0..=rows.min(cols)) };
        coeffs.push(random_of_rank(rng, rows, cols, r));
    }
    if coeffs.iter().all(|c| c.is_zero()) {
        coeffs[degree] = Mat::from_fn(rows, cols, |i, j| if i == j { q(1) } else { q(0) });
    }
    MatFamily::polynomial(coeffs)
}

/// `A(ε) · B(ε)` through an inner dimension smaller than both sides: generically singular.
pub fn singular_family(rng: &mut impl Rng, rows: usize, cols: usize) -> MatFamily {
    let inner = rng.gen_range(1..rows.min(cols).max(2));
    let a = MatSeries::from_polynomial(rows, inner, &[random_of_rank(rng, rows, inner, inner.saturating_sub(1)), random_matrix(rng, rows, inner)], 2);
    let b = MatSeries::from_polynomial(inner, cols, &[random_matrix(rng, inner, cols), random_matrix(rng, inner, cols)], 2);
    let l = a.try_mul(&b).unwrap();
    let fam = MatFamily::polynomial(l.into_coeffs());
    if fam.is_zero() {
        MatFamily::polynomial(vec![Mat::from_fn(rows, cols, |i, j| if i == j && i == 0 { q(1) } else { q(0) })])
    } else {
        fam
    }
}

/// A pencil `L_0 + εL_1` with singular `L_0` and invertible `L_0 + εL_1` for generic `ε`.
pub fn random_pencil(rng: &mut impl Rng, n: usize) -> MatFamily {
    loop {
        let r = rng.gen_range(0..n);
        let l0 = random_of_rank(rng, n, n, r);
        let l1 = random_matrix(rng, n, n);
        let f = MatFamily::polynomial(vec![l0, l1]);
        if opfamily::recursion::generic_rank(&f) == n {
            return f;
        }
    }
}

/// A mixed corpus: structured, low-rank square, rectangular and singular families.
pub fn corpus(seed: u64, count: usize) -> Vec<MatFamily> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let fam = match i % 4 {
            0 => {
                let n = r.gen_range(1..=6);
                structured_family(&mut r, n).0
            }
            1 => {
                let n = r.gen_range(1..=6);
                let d = r.gen_range(1..=4);
                low_rank_family(&mut r, n, n, d)
            }
            2 => {
                let (m, n) = (r.gen_range(1..=4), r.gen_range(1..=6));
                let d = r.gen_range(1..=3);
                low_rank_family(&mut r, m, n, d)
            }
            _ => {
                let (m, n) = (r.gen_range(2..=4), r.gen_range(2..=5));
                singular_family(&mut r, m, n)
            }
        };
        out.push(fam);
    }
    out
}

pub fn stack(blocks: &[Mat]) -> Mat {
    let refs: Vec<&Mat> = blocks.iter().collect();
    Mat::vstack(blocks[0].cols(), &refs)
}

/// Complements chosen at random stage by stage: pivot choices plus random multiples of the split-off part.
pub fn random_given_strategy(family: &MatFamily, rng: &mut impl Rng, stages: usize) -> ComplementStrategy<Rat> {
    let mut map = BTreeMap::new();
    for j in 1..=stages {
        let mut rec = Recursion::new(family.clone(), ComplementStrategy::Given(map.clone())).unwrap();
        rec.extend_to(j).unwrap();
        let st = rec.decomposition().stage(j);
        let tilt = |base: &Mat, other: &Mat, rng: &mut dyn rand::RngCore| -> Mat {
            if base.cols() == 0 || other.cols() == 0 {
                return base.clone();
            }
            let mut rr = rand_chacha::ChaCha8Rng::seed_from_u64(rng.next_u64());
            let coeffs = random_matrix(&mut rr, other.cols(), base.cols());
            base + &(other * &coeffs)
        };
        let nc = tilt(st.nc.basis(), st.n.basis(), rng);
        let rc = tilt(st.rc.basis(), st.r.basis(), rng);
        map.insert(j, GivenComplements { nc: Some(nc), rc: Some(rc) });
    }
    ComplementStrategy::Given(map)
}
