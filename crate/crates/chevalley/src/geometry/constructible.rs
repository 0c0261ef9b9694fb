use std::fmt;

use num_rational::BigRational;
use serde_json::{json, Value};

use super::ClosedSet;
use crate::error::{Error, Result};
use crate::polyring::{parse_polynomial, Ring};

/// `A \ (D_1 ∪ … ∪ D_a)`.
#[derive(Clone, Debug)]
pub struct MultipleDifference {
    closure: ClosedSet,
    subtrahends: Vec<ClosedSet>,
}

impl MultipleDifference {
    /// Normalizes the difference: empty subtrahends and subtrahends inside
    /// another one are dropped. Returns `None` when the difference is empty,
    /// that is when `A` is empty or some `D_i` contains `A`.
    pub fn new(closure: ClosedSet, subtrahends: Vec<ClosedSet>) -> Result<Option<Self>> {
        if closure.is_empty() {
            return Ok(None);
        }
        let mut kept: Vec<ClosedSet> = Vec::new();
        for d in subtrahends {
            if d.is_empty() {
                continue;
            }
            if d.contains(&closure)? {
                return Ok(None);
            }
            let mut dominated = false;
            for k in &kept {
                if k.contains(&d)? {
                    dominated = true;
                    break;
                }
            }
            if dominated {
                continue;
            }
            let mut survivors = Vec::with_capacity(kept.len() + 1);
            for k in kept {
                if !d.contains(&k)? {
                    survivors.push(k);
                }
            }
            survivors.push(d);
            kept = survivors;
        }
        Ok(Some(MultipleDifference { closure, subtrahends: kept }))
    }

    /// Builds a difference without normalization.
    pub fn raw(closure: ClosedSet, subtrahends: Vec<ClosedSet>) -> Self {
        MultipleDifference { closure, subtrahends }
    }

    pub fn closure(&self) -> &ClosedSet {
        &self.closure
    }

    pub fn subtrahends(&self) -> &[ClosedSet] {
        &self.subtrahends
    }

    /// Whether the difference is already closed (no subtrahends).
    pub fn is_closed(&self) -> bool {
        self.subtrahends.is_empty()
    }

    pub fn contains_point(&self, point: &[BigRational]) -> Result<bool> {
        if !self.closure.contains_point(point)? {
            return Ok(false);
        }
        for d in &self.subtrahends {
            if d.contains_point(point)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_point_mod(&self, point: &[u64], p: u64) -> Result<bool> {
        if !self.closure.contains_point_mod(point, p)? {
            return Ok(false);
        }
        for d in &self.subtrahends {
            if d.contains_point_mod(point, p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Canonical generators on every part, for deterministic output.
    pub fn canonical(&self) -> MultipleDifference {
        MultipleDifference {
            closure: self.closure.canonical(),
            subtrahends: self.subtrahends.iter().map(|d| d.canonical()).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "closure": self.closure.generator_strings(),
            "subtrahends": self.subtrahends.iter().map(|d| d.generator_strings()).collect::<Vec<_>>(),
        })
    }

    /// Inverse of [`MultipleDifference::to_json`]; no normalization.
    pub fn from_json(ring: &Ring, v: &Value) -> Result<Self> {
        let closure = closed_from_json(ring, &v["closure"])?;
        let subtrahends = v["subtrahends"]
            .as_array()
            .ok_or_else(|| Error::InvalidProblem("`subtrahends` must be an array".into()))?
            .iter()
            .map(|d| closed_from_json(ring, d))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultipleDifference { closure, subtrahends })
    }
}

fn closed_from_json(ring: &Ring, v: &Value) -> Result<ClosedSet> {
    let gens = v
        .as_array()
        .ok_or_else(|| Error::InvalidProblem("generator list must be an array".into()))?
        .iter()
        .map(|g| {
            let s = g.as_str().ok_or_else(|| Error::InvalidProblem("generators must be strings".into()))?;
            parse_polynomial(ring, s)
        })
        .collect::<Result<Vec<_>>>()?;
    ClosedSet::from_generators(ring, gens)
}

impl fmt::Display for MultipleDifference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.closure)?;
        match self.subtrahends.len() {
            0 => Ok(()),
            1 => write!(f, " \\ {}", self.subtrahends[0]),
            _ => {
                write!(f, " \\ ( ")?;
                for (i, d) in self.subtrahends.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ∪ ")?;
                    }
                    write!(f, "{d}")?;
                }
                write!(f, " )")
            }
        }
    }
}

/// A finite union of multiple differences. The empty union is the empty set.
#[derive(Clone, Debug, Default)]
pub struct ConstructibleSet {
    components: Vec<MultipleDifference>,
}

impl ConstructibleSet {
    pub fn empty() -> Self {
        ConstructibleSet { components: Vec::new() }
    }

    pub fn from_components(components: Vec<MultipleDifference>) -> Self {
        ConstructibleSet { components }
    }

    pub fn push(&mut self, component: MultipleDifference) {
        self.components.push(component);
    }

    pub fn extend(&mut self, other: ConstructibleSet) {
        self.components.extend(other.components);
    }

    pub fn components(&self) -> &[MultipleDifference] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains_point(&self, point: &[BigRational]) -> Result<bool> {
        for c in &self.components {
            if c.contains_point(point)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn contains_point_mod(&self, point: &[u64], p: u64) -> Result<bool> {
        for c in &self.components {
            if c.contains_point_mod(point, p)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Number of components containing the point mod `p`; used for the
    /// disjointness check.
    pub fn multiplicity_mod(&self, point: &[u64], p: u64) -> Result<usize> {
        let mut n = 0;
        for c in &self.components {
            if c.contains_point_mod(point, p)? {
                n += 1;
            }
        }
        Ok(n)
    }

    pub fn canonical(&self) -> ConstructibleSet {
        ConstructibleSet { components: self.components.iter().map(|c| c.canonical()).collect() }
    }

    pub fn to_json(&self) -> Value {
        json!({ "components": self.components.iter().map(|c| c.to_json()).collect::<Vec<_>>() })
    }

    pub fn from_json(ring: &Ring, v: &Value) -> Result<Self> {
        let comps = v["components"]
            .as_array()
            .ok_or_else(|| Error::InvalidProblem("`components` must be an array".into()))?;
        Ok(ConstructibleSet {
            components: comps.iter().map(|c| MultipleDifference::from_json(ring, c)).collect::<Result<_>>()?,
        })
    }

    /// The base variable count shared by all components, if any.
    pub fn check_point_len(&self, len: usize) -> Result<()> {
        if let Some(c) = self.components.first() {
            let n = c.closure().ring().nvars();
            if n != len {
                return Err(Error::DimensionMismatch { expected: n, got: len });
            }
        }
        Ok(())
    }
}

impl fmt::Display for ConstructibleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "∅");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊎ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
