//! Coefficient domains for the Buchberger engine.
//!
//! The engine only needs to cancel a leading coefficient against another one and to
//! normalize a finished polynomial. Over Z this is done fraction-free (cross
//! multiplication, then content removal), which keeps rational arithmetic and its
//! gcd-heavy normalization out of the inner loop. The Q domain is kept for exact
//! remainders, and F_p backs the finite-field point oracle.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::polyring::{inv_mod, Monomial};

pub trait CoeffDomain: Sync + Send {
    type C: Clone + Send + Sync + Debug + PartialEq;

    fn is_zero(&self, a: &Self::C) -> bool;
    fn is_one(&self, a: &Self::C) -> bool;
    fn one(&self) -> Self::C;
    fn mul(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn neg(&self, a: &Self::C) -> Self::C;
    /// `u*x - v*y`
    fn mul_sub(&self, u: &Self::C, x: &Self::C, v: &Self::C, y: &Self::C) -> Self::C;
    /// Returns `(u, v)` with `u*a - v*b = 0` and `u` as small as possible.
    fn cancel_factors(&self, a: &Self::C, b: &Self::C) -> (Self::C, Self::C);
    /// Brings a nonzero polynomial to the domain's normal form up to units
    /// (primitive with positive leading coefficient over Z, monic over a field).
    fn normalize(&self, terms: &mut [(Monomial, Self::C)]);
    /// Whether [`CoeffDomain::normalize`] should also run periodically during long
    /// reductions to curb coefficient growth.
    fn wants_periodic_normalization(&self) -> bool {
        false
    }
}

/// Integers with fraction-free elimination.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntegerDomain;

impl CoeffDomain for IntegerDomain {
    type C = BigInt;

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigInt) -> bool {
        a.is_one()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul_sub(&self, u: &BigInt, x: &BigInt, v: &BigInt, y: &BigInt) -> BigInt {
        if u.is_one() {
            x - v * y
        } else {
            u * x - v * y
        }
    }
    fn cancel_factors(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        let g = a.gcd(b);
        let (mut u, mut v) = (b / &g, a / &g);
        if u.is_negative() {
            u = -u;
            v = -v;
        }
        (u, v)
    }
    fn normalize(&self, terms: &mut [(Monomial, BigInt)]) {
        if terms.is_empty() {
            return;
        }
        let mut g = BigInt::zero();
        for (_, c) in terms.iter() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if terms[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in terms.iter_mut() {
                *c /= &g;
            }
        }
    }
    fn wants_periodic_normalization(&self) -> bool {
        true
    }
}

/// Rationals, used where the exact remainder matters.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalDomain;

impl CoeffDomain for RationalDomain {
    type C = BigRational;

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul_sub(&self, u: &BigRational, x: &BigRational, v: &BigRational, y: &BigRational) -> BigRational {
        u * x - v * y
    }
    fn cancel_factors(&self, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
        (BigRational::one(), a / b)
    }
    fn normalize(&self, terms: &mut [(Monomial, BigRational)]) {
        if let Some((_, lc)) = terms.first() {
            let inv = lc.recip();
            for (_, c) in terms.iter_mut() {
                *c *= &inv;
            }
        }
    }
}

/// The prime field `F_p` for a prime `p < 2^31`.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!((2..1 << 31).contains(&p), "prime must fit in 31 bits");
        PrimeField { p }
    }
}

impl CoeffDomain for PrimeField {
    type C = u64;

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    fn one(&self) -> u64 {
        1
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul_sub(&self, u: &u64, x: &u64, v: &u64, y: &u64) -> u64 {
        (u * x % self.p + self.p - v * y % self.p) % self.p
    }
    fn cancel_factors(&self, a: &u64, b: &u64) -> (u64, u64) {
        (1, a * inv_mod(*b, self.p) % self.p)
    }
    fn normalize(&self, terms: &mut [(Monomial, u64)]) {
        if let Some(&(_, lc)) = terms.first() {
            if lc != 1 {
                let inv = inv_mod(lc, self.p);
                for (_, c) in terms.iter_mut() {
                    *c = *c * inv % self.p;
                }
            }
        }
    }
}
