//! Exact-arithmetic construction and certification of constant-rank affine
//! matrix subspaces.
//!
//! Everything is computed over the rationals: matrices and polynomials carry
//! `BigRational` entries, ranks and determinants come from fraction-free
//! elimination, real-root questions are decided by Sturm counting, and
//! symmetric signatures by exact congruence diagonalization. There is no
//! floating point anywhere in the core.
//!
//! The crate is organized around a scalar-generic [`Matrix<T>`](matrix::Matrix)
//! with two concrete instantiations used throughout:
//!
//! * [`QMatrix`] — dense matrices over [`Rational`],
//! * [`PMatrix`] — dense matrices over sparse multivariate polynomials
//!   ([`MPoly`]), which is how parametric families are represented.
//!
//! On top of that sit the affine-subspace model ([`subspace`]), the
//! constant-rank / constant-signature certifier ([`certify`]), and the
//! ACI-matrix machinery ([`aci`]).

mod error;

pub mod aci;
pub mod certify;
pub mod matrix;
pub mod mpoly;
pub mod scalar;
pub mod selftest;
pub mod subspace;
pub mod upoly;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;

pub use matrix::{signature, sym_minor_det, Matrix, MinorCache, PMatrix, QMatrix, Signature};
pub use mpoly::MPoly;
pub use scalar::Rational;
pub use subspace::{AffineSubspace, PatternKind, PatternSpace};
pub use upoly::UPoly;
