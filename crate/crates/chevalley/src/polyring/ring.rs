use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Shared handle to a ring context. Polynomials hold one of these.
pub type Ring = Arc<RingContext>;

/// The polynomial ring `Q[b_1..b_m][x_1..x_n]`.
///
/// Variables are indexed base first, then fiber, and the variable with the smallest
/// index is the largest one for lex and reverse-lex tie breaking.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingContext {
    names: Vec<String>,
    n_base: usize,
}

/// Upper bound on the number of variables. Variable sets are `u64` bit masks.
pub const MAX_VARS: usize = 64;

impl RingContext {
    pub fn new<S: AsRef<str>, T: AsRef<str>>(base: &[S], fiber: &[T]) -> Result<Ring> {
        let names: Vec<String> = base
            .iter()
            .map(|s| s.as_ref().to_string())
            .chain(fiber.iter().map(|s| s.as_ref().to_string()))
            .collect();
        if names.len() > MAX_VARS {
            return Err(Error::InvalidRing(format!(
                "{} variables exceed the limit of {MAX_VARS}",
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::InvalidRing(format!("`{name}` is not a valid variable name")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidRing(format!("duplicate variable `{name}`")));
            }
        }
        Ok(Arc::new(RingContext { names, n_base: base.len() }))
    }

    /// A ring with only base variables.
    pub fn base_only<S: AsRef<str>>(base: &[S]) -> Result<Ring> {
        Self::new(base, &[] as &[&str])
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn n_base(&self) -> usize {
        self.n_base
    }

    pub fn n_fiber(&self) -> usize {
        self.names.len() - self.n_base
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn base_names(&self) -> &[String] {
        &self.names[..self.n_base]
    }

    pub fn fiber_names(&self) -> &[String] {
        &self.names[self.n_base..]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_fiber(&self, i: usize) -> bool {
        i >= self.n_base
    }

    /// Bit mask of the fiber variables.
    pub fn fiber_mask(&self) -> u64 {
        mask_range(self.n_base, self.nvars())
    }

    /// Bit mask of the base variables.
    pub fn base_mask(&self) -> u64 {
        mask_range(0, self.n_base)
    }

    /// The base ring `B` of this context, i.e. the same base variables and no fiber.
    pub fn base_ring(&self) -> Ring {
        Arc::new(RingContext { names: self.names[..self.n_base].to_vec(), n_base: self.n_base })
    }

    /// This ring with `extra` appended as additional fiber variables.
    pub fn with_fiber(&self, extra: &[String]) -> Result<Ring> {
        let base = self.base_names().to_vec();
        let mut fiber = self.fiber_names().to_vec();
        fiber.extend(extra.iter().cloned());
        RingContext::new(&base, &fiber)
    }

    /// A variable name not yet used in this ring, derived from `stem`.
    pub fn fresh_name(&self, stem: &str) -> String {
        if self.index_of(stem).is_none() {
            return stem.to_string();
        }
        (1..)
            .map(|k| format!("{stem}{k}"))
            .find(|cand| self.index_of(cand).is_none())
            .expect("infinitely many candidates")
    }

    /// Appends one auxiliary variable and returns the new ring and its index.
    pub fn with_aux(&self, stem: &str) -> (Ring, usize) {
        let name = self.fresh_name(stem);
        let ring = self
            .with_fiber(&[name])
            .expect("a fresh name keeps the ring valid");
        let idx = ring.nvars() - 1;
        (ring, idx)
    }

    /// Structural compatibility: identical variable lists and base/fiber split.
    pub fn same_as(a: &Ring, b: &Ring) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    pub(crate) fn check_same(a: &Ring, b: &Ring) -> Result<()> {
        if Self::same_as(a, b) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!("{a} vs {b}")))
        }
    }
}

fn mask_range(lo: usize, hi: usize) -> u64 {
    (lo..hi).fold(0u64, |m, i| m | (1u64 << i))
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}][{}]", self.base_names().join(","), self.fiber_names().join(","))
    }
}

impl fmt::Debug for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
