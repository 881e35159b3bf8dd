//! The twisted group algebra of `S_n` over Laurent monomials in commuting
//! indeterminates `Q_{k,l}`, with the relation `π Q_{k,l} = Q_{π(k),π(l)} π`.
//!
//! Elements are kept symbolically in [`TwistedElement`]. For numerical work they are
//! specialized at a base word, `Q_{k,l} ↦ q[w_k, w_l]`, which turns them into the
//! matrices of the regular representation ([`SpecializedElement`]).

mod element;
mod monomial;
mod specialized;
mod zagier;

pub use element::{Coefficient, Gauss, TwistedElement};
pub use monomial::LaurentMonomial;
pub use specialized::{gamma_bar_inverse_closed, SpecializedElement};
pub use zagier::{gamma_alternating, parse_kind, zagier, ZagierKind};
