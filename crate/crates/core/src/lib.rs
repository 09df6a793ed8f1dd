//! Exact diagonalization of matrix families `L(ε) = Σ εⁱ L_i`.
//!
//! The stage recursion splits domain and codomain into nested direct sums and
//! produces transformations `φ(ε)`, `ψ(ε)` with `ψ⁻¹(ε) L(ε) φ(ε) = Δ(ε)`,
//! where `Δ(ε) = Σ ε^{i−1} S_i P_i` is diagonal with respect to the splits.
//! From there come Jordan chains, the local Smith form and a Laurent
//! generalized inverse. The [`oracles`] module holds brute-force checks that
//! share nothing with the recursion beyond basic matrix algebra.
//!
//! All types are generic over an exact field [`Scalar`]; the aliases below fix
//! it to arbitrary-precision rationals.

pub mod diagonalize;
pub mod error;
pub mod family;
pub mod laurent;
pub mod matrix;
pub mod oracles;
pub mod recursion;
pub mod scalar;
pub mod series;
pub mod subspace;

pub use diagonalize::{diagonalize, Diagonalization, Options, SmithFactorization};
pub use error::{Error, Result};
pub use family::{FamilyKind, MatrixFamily};
pub use laurent::LaurentSeries;
pub use matrix::Matrix;
pub use recursion::{JordanChains, Recursion, RootRank};
pub use scalar::Scalar;
pub use series::PowerSeries;
pub use subspace::{ComplementStrategy, Decomposition, GivenComplements, Stage, Subspace};

pub type Rat = num_rational::BigRational;
pub type Mat = Matrix<Rat>;
pub type MatSeries = PowerSeries<Rat>;
pub type MatLaurent = LaurentSeries<Rat>;
pub type MatFamily = MatrixFamily<Rat>;
pub type RatSubspace = Subspace<Rat>;
pub type RecursionState = Recursion<Rat>;
pub type DiagonalizationResult = Diagonalization<Rat>;
