//! Gram matrices of multiparticle weight spaces, the twisted group algebra of the
//! symmetric group, and normally ordered number operators for multiparameter quon
//! algebras `a_i a_j† - q_ij a_j† a_i = δ_ij`.
//!
//! Letters are 0-based indices into a [`QMatrix`]; permutations are 1-based and act
//! on word positions from the right, `(w.p)[r] = w[p(r)]`.

pub mod error;
pub mod fock;
pub mod gram;
pub mod linalg;
pub mod numberop;
pub mod params;
pub mod perm;
pub mod scalar;
pub mod twisted;
pub mod verify;

pub use error::{QuonError, Result};
pub use fock::{FockVector, MixedLetter, OperatorPolynomial};
pub use gram::{GramBlock, Inverse};
pub use linalg::Matrix;
pub use numberop::{ExpansionMode, NumberOperatorExpansion, YElement};
pub use params::QMatrix;
pub use perm::{Letter, Permutation, SizeCap, Weight, Word, YoungSubgroup};
pub use scalar::{GaussRat, Scalar, C64};
pub use twisted::{SpecializedElement, TwistedElement, ZagierKind};
