use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::Monomial;
use super::order::MonomialOrder;
use super::ring::{Ring, RingContext};
use crate::error::{Error, Result};

/// Sparse polynomial over Q in a fixed ring context.
///
/// Terms are kept sorted strictly descending under the ring's canonical order
/// (fiber-block elimination order, degrevlex inside each block) with nonzero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Monomial, BigRational)>,
}

/// The order every polynomial of `ring` is stored and printed in.
pub fn canonical_order(ring: &RingContext) -> MonomialOrder {
    if ring.n_fiber() == 0 {
        MonomialOrder::DegRevLex
    } else {
        MonomialOrder::Block { elim: ring.fiber_mask() }
    }
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, BigRational::one())
    }

    pub fn constant(ring: &Ring, c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(Monomial::one(ring.nvars()), c)] }
    }

    pub fn from_int(ring: &Ring, c: i64) -> Self {
        Self::constant(ring, BigRational::from_integer(BigInt::from(c)))
    }

    /// The variable with index `i`.
    pub fn var(ring: &Ring, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i, 1), BigRational::one())
    }

    pub fn var_named(ring: &Ring, name: &str) -> Result<Self> {
        let i = ring.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var(ring, i))
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: BigRational) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial arity must match the ring");
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(m, c)] }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial arity must match the ring");
            *acc.entry(m).or_insert_with(BigRational::zero) += c;
        }
        let order = canonical_order(ring);
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Terms in canonical descending order.
    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, BigRational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self.as_constant(), Some(c) if c.is_one())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Bit mask of the variables occurring in the polynomial.
    pub fn support(&self) -> u64 {
        self.terms.iter().fold(0, |s, (m, _)| s | m.support())
    }

    /// Leading monomial and coefficient under `order`.
    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &BigRational)> {
        if order == canonical_order(&self.ring) {
            return self.terms.first().map(|(m, c)| (m, c));
        }
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(&a.0, &b.0))
            .map(|(m, c)| (m, c))
    }

    /// Largest total degree in the fiber variables, `None` for zero.
    pub fn fiber_degree(&self) -> Option<u32> {
        let fm = self.ring.fiber_mask();
        self.terms.iter().map(|(m, _)| m.degree_in(fm)).max()
    }

    /// Sum of the terms of maximal fiber degree. Degree zero keeps everything.
    pub fn maxdeg_part(&self) -> Result<Polynomial> {
        let d = self.fiber_degree().ok_or(Error::ZeroPolynomial("maxdeg_part"))?;
        let fm = self.ring.fiber_mask();
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree_in(fm) == d).cloned().collect(),
        })
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        RingContext::check_same(&self.ring, &other.ring)?;
        Ok(self.combine(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        RingContext::check_same(&self.ring, &other.ring)?;
        Ok(self.combine(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        RingContext::check_same(&self.ring, &other.ring)?;
        Ok(self.product(other))
    }

    fn combine(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let order = canonical_order(&self.ring);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match order.cmp(ma, mb) {
                std::cmp::Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((mb.clone(), if negate { -cb } else { cb.clone() }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(
            other.terms[j..]
                .iter()
                .map(|(m, c)| (m.clone(), if negate { -c } else { c.clone() })),
        );
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        let mut acc: HashMap<Monomial, BigRational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        Polynomial::from_terms(&self.ring, acc)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        // multiplication by a monomial preserves the (multiplicative) order
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.product(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base);
            }
        }
        result
    }

    /// Divides by the leading coefficient under `order`.
    pub fn monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Scales to a primitive integer polynomial with positive leading coefficient
    /// (canonical order). Useful as a normal form up to units.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let lcm_den = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let nums: Vec<BigInt> = self.terms.iter().map(|(_, c)| c.numer() * (&lcm_den / c.denom())).collect();
        let mut g = nums.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
        if nums[0].is_negative() {
            g = -g;
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .zip(nums)
                .map(|((m, _), n)| (m.clone(), BigRational::from_integer(n / &g)))
                .collect(),
        }
    }

    /// Ring homomorphism sending variable `i` to `images[i]` (all in `target`).
    pub fn substitute(&self, target: &Ring, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::ContextMismatch(format!(
                "substitution needs {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        for img in images {
            RingContext::check_same(img.ring(), target)?;
        }
        let mut power_cache: HashMap<(usize, u16), Polynomial> = HashMap::new();
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = power_cache
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e as u32))
                    .clone();
                term = term.product(&p);
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                *acc.entry(tm).or_insert_with(BigRational::zero) += tc;
            }
        }
        Ok(Polynomial::from_terms(target, acc))
    }

    /// Substitutes the named variables and keeps all others, staying in the same ring.
    pub fn substitute_named(&self, subs: &[(&str, Polynomial)]) -> Result<Polynomial> {
        let mut images: Vec<Polynomial> =
            (0..self.ring.nvars()).map(|i| Polynomial::var(&self.ring, i)).collect();
        for (name, img) in subs {
            let i = self
                .ring
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            RingContext::check_same(img.ring(), &self.ring)?;
            images[i] = img.clone();
        }
        self.substitute(&self.ring.clone(), &images)
    }

    /// Sets the variables in `mask` to zero.
    pub fn kill_vars(&self, mask: u64) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.support() & mask == 0).cloned().collect(),
        }
    }

    /// Re-expresses the polynomial in `target`, matching variables by name.
    /// Fails if a variable that occurs is missing from `target`.
    pub fn embed(&self, target: &Ring) -> Result<Polynomial> {
        if RingContext::same_as(&self.ring, target) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> =
            self.ring.names().iter().map(|n| target.index_of(n)).collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut nm = Monomial::one(target.nvars());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| Error::UnknownVariable(self.ring.name(i).to_string()))?;
                nm.set_exp(j, e);
            }
            terms.push((nm, c.clone()));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| m.exp(i) > 0).map(|(m, c)| {
            let e = m.exp(i);
            let mut nm = m.clone();
            nm.set_exp(i, e - 1);
            (nm, c * BigRational::from_integer(BigInt::from(e)))
        });
        Polynomial::from_terms(&self.ring, terms.collect::<Vec<_>>())
    }

    /// Substitutes constants for some variables, staying in the same ring.
    pub fn partial_evaluate(&self, assignment: &[(usize, BigRational)]) -> Polynomial {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut nm = m.clone();
                let mut nc = c.clone();
                for (i, v) in assignment {
                    let e = m.exp(*i);
                    if e > 0 {
                        nc *= num_traits::pow(v.clone(), e as usize);
                        nm.set_exp(*i, 0);
                    }
                }
                (nm, nc)
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch { expected: self.ring.nvars(), got: point.len() });
        }
        let mut sum = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            sum += t;
        }
        Ok(sum)
    }

    /// Evaluation of the reduction modulo `p` at a point of `F_p^n`.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> Result<u64> {
        if point.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch { expected: self.ring.nvars(), got: point.len() });
        }
        let mut sum = 0u64;
        for (m, c) in &self.terms {
            let mut t = rational_mod(c, p)?;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t * pow_mod(point[i], e as u64, p) % p;
                }
            }
            sum = (sum + t) % p;
        }
        Ok(sum)
    }

    /// Exact division, failing if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial> {
        RingContext::check_same(&self.ring, &divisor.ring)?;
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial("exact_div"));
        }
        let (lm, lc) = divisor.terms[0].clone();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            if !lm.divides(&m) {
                return Err(Error::InexactDivision(divisor.to_string()));
            }
            let q = lm.quotient_of(&m);
            let qc = c / &lc;
            rem = rem.combine(&divisor.mul_monomial(&q).scale(&qc), true);
            quot.push((q, qc));
        }
        Ok(Polynomial::from_terms(&self.ring, quot))
    }
}

/// Image of a rational number in `F_p`.
pub fn rational_mod(c: &BigRational, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let d = c.denom().mod_floor(&pb).to_u64().expect("reduced below p");
    if d == 0 {
        return Err(Error::BadReduction { prime: p });
    }
    let n = c.numer().mod_floor(&pb).to_u64().expect("reduced below p");
    Ok(n * inv_mod(d, p) % p)
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime by Fermat; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(ring: &RingContext, m: &Monomial) -> String {
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { ring.name(i).to_string() } else { format!("{}^{}", ring.name(i), e) })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_coeff(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", fmt_monomial(&self.ring, m))?;
            } else {
                write!(f, "{}*{}", fmt_coeff(&abs), fmt_monomial(&self.ring, m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            /// Panics on a ring mismatch; use the `checked_*` method to handle it.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomials from different rings")
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -(&self)
    }
}
