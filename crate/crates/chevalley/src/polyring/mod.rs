//! Exact sparse multivariate polynomials over Q with a base/fiber variable split.

mod monomial;
mod order;
pub mod parse;
mod polynomial;
mod ring;

pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use parse::{parse_polynomial, parse_polynomial_list, parse_rational, Fraction};
pub use polynomial::{canonical_order, inv_mod, pow_mod, rational_mod, Polynomial};
pub use ring::{Ring, RingContext, MAX_VARS};
