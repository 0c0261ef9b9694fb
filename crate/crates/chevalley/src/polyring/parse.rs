//! Text syntax for polynomials and rational functions.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("-" | "+") unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | identifier | "(" expr ")"
//! ```
//!
//! Division by a constant yields rational coefficients (`1/2*x`). Division by a
//! nonconstant polynomial is only accepted by [`parse_rational`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::polynomial::Polynomial;
use super::ring::Ring;
use crate::error::{Error, Result};

/// A quotient `num / den` kept unsimplified.
#[derive(Clone, Debug, PartialEq)]
pub struct Fraction {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl Fraction {
    fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.ring());
        Fraction { num: p, den }
    }

    fn add(self, o: Fraction, negate: bool) -> Fraction {
        if self.den == o.den {
            let num = if negate { &self.num - &o.num } else { &self.num + &o.num };
            return Fraction { num, den: self.den };
        }
        let a = &self.num * &o.den;
        let b = &o.num * &self.den;
        Fraction { num: if negate { a - b } else { a + b }, den: &self.den * &o.den }
    }

    fn mul(self, o: Fraction) -> Fraction {
        Fraction { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    fn div(self, o: Fraction, pos: usize) -> Result<Fraction> {
        if o.num.is_zero() {
            return Err(Error::parse(pos, "division by zero"));
        }
        Ok(Fraction { num: &self.num * &o.den, den: &self.den * &o.num })
    }

    fn pow(self, e: u32) -> Fraction {
        Fraction { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Collapses to a polynomial when the denominator divides the numerator.
    pub fn into_polynomial(self) -> Option<Polynomial> {
        if let Some(c) = self.den.as_constant() {
            return Some(self.num.scale(&c.recip()));
        }
        self.num.exact_div(&self.den).ok()
    }
}

/// Parses a polynomial over the variables of `ring`.
pub fn parse_polynomial(ring: &Ring, src: &str) -> Result<Polynomial> {
    let frac = parse_rational(ring, src)?;
    frac.into_polynomial()
        .ok_or_else(|| Error::parse(0, format!("`{src}` is not a polynomial")))
}

/// Parses a rational function `p/q` over the variables of `ring`.
pub fn parse_rational(ring: &Ring, src: &str) -> Result<Fraction> {
    let mut p = Parser { ring, src: src.as_bytes(), pos: 0 };
    let f = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::parse(p.pos, format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(f)
}

/// Parses a comma separated list of polynomials; an empty string gives an empty list.
pub fn parse_polynomial_list(ring: &Ring, src: &str) -> Result<Vec<Polynomial>> {
    split_top_level(src)
        .into_iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_polynomial(ring, s))
        .collect()
}

/// Splits at commas that are not nested in parentheses.
pub fn split_top_level(src: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in src.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&src[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&src[start..]);
    out
}

struct Parser<'a> {
    ring: &'a Ring,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Fraction> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = acc.add(rhs, c == b'-');
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Fraction> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' { acc.mul(rhs) } else { acc.div(rhs, at)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Fraction> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let f = self.unary()?;
                Ok(Fraction { num: -f.num, den: f.den })
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Fraction> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(Error::parse(at, "expected a nonnegative integer exponent"));
            }
            let e: u32 = digits
                .parse()
                .map_err(|_| Error::parse(at, "exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Fraction> {
        let at = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::parse(self.pos, "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().expect("digits parse as an integer");
                let c = BigRational::from_integer(n);
                Ok(Fraction::from_poly(if c.is_zero() {
                    Polynomial::zero(self.ring)
                } else {
                    Polynomial::constant(self.ring, c)
                }))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let v = Polynomial::var_named(self.ring, name)?;
                Ok(Fraction::from_poly(v))
            }
            Some(c) => Err(Error::parse(at, format!("unexpected `{}`", c as char))),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }
}
