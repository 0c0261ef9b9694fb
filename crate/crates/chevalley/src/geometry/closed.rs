use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::par;
use crate::polyring::{MonomialOrder, Polynomial, Ring, RingContext};

/// The zero set `V(I)` of an ideal, compared only up to radical.
#[derive(Clone, Debug)]
pub struct ClosedSet {
    ideal: Ideal,
}

impl ClosedSet {
    pub fn new(ideal: Ideal) -> Self {
        ClosedSet { ideal }
    }

    pub fn from_generators(ring: &Ring, gens: Vec<Polynomial>) -> Result<Self> {
        Ok(ClosedSet::new(Ideal::new(ring, gens)?))
    }

    /// The whole space, `V(0)`.
    pub fn whole(ring: &Ring) -> Self {
        ClosedSet::new(Ideal::zero(ring))
    }

    pub fn empty(ring: &Ring) -> Self {
        ClosedSet::new(Ideal::unit(ring))
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }

    pub fn generators(&self) -> &[Polynomial] {
        self.ideal.generators()
    }

    pub fn is_empty(&self) -> bool {
        self.ideal.is_unit()
    }

    pub fn is_whole(&self) -> bool {
        self.ideal.is_zero_ideal()
    }

    /// Whether `other ⊆ self`: every generator of `self` vanishes on `V(other)`.
    pub fn contains(&self, other: &ClosedSet) -> Result<bool> {
        RingContext::check_same(self.ring(), other.ring())?;
        if self.is_whole() || other.is_empty() {
            return Ok(true);
        }
        // warm the basis once so parallel workers share it
        let _ = other.ideal.any_gb();
        let verdicts = par::try_map(self.generators(), |g| other.ideal.radical_member(g))?;
        Ok(verdicts.into_iter().all(|v| v))
    }

    /// Radical-blind equality: mutual containment, with cheap exits first.
    pub fn set_eq(&self, other: &ClosedSet) -> Result<bool> {
        RingContext::check_same(self.ring(), other.ring())?;
        match (self.is_empty(), other.is_empty()) {
            (true, true) => return Ok(true),
            (true, false) | (false, true) => return Ok(false),
            _ => {}
        }
        if self.ideal.same_ideal(&other.ideal)? {
            return Ok(true);
        }
        if self.ring().nvars() <= crate::groebner::dimension::EXHAUSTIVE_LIMIT
            && self.dimension()? != other.dimension()?
        {
            return Ok(false);
        }
        Ok(self.contains(other)? && other.contains(self)?)
    }

    /// `self ∩ other = V(I + J)`.
    pub fn intersect(&self, other: &ClosedSet) -> Result<ClosedSet> {
        Ok(ClosedSet::new(self.ideal.sum(&other.ideal)?))
    }

    /// `self ∪ other = V(I ∩ J)`.
    pub fn union(&self, other: &ClosedSet) -> Result<ClosedSet> {
        Ok(ClosedSet::new(self.ideal.intersect(&other.ideal)?))
    }

    /// `Γ ∩ π⁻¹(D)` for `Γ = self` in the total space and `D` in the base.
    pub fn preimage_intersect(&self, d: &ClosedSet) -> Result<ClosedSet> {
        if d.is_whole() {
            return Ok(self.clone());
        }
        let lifted = d
            .generators()
            .iter()
            .map(|g| g.embed(self.ring()))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClosedSet::new(self.ideal.with_generators(&lifted)?))
    }

    /// `V(I : J^∞)`, a closed set containing the closure of `self \ other`.
    pub fn difference_closure(&self, other: &ClosedSet) -> Result<ClosedSet> {
        RingContext::check_same(self.ring(), other.ring())?;
        if other.is_whole() {
            return Ok(ClosedSet::empty(self.ring()));
        }
        Ok(ClosedSet::new(self.ideal.saturate_ideal(&other.ideal)?))
    }

    pub fn dimension(&self) -> Result<i64> {
        Ok(self.ideal.dimension()?.dim)
    }

    /// The same set generated by its reduced degrevlex basis, scaled to
    /// primitive integer polynomials. Used for deterministic output.
    pub fn canonical(&self) -> ClosedSet {
        let gb = self.ideal.gb(MonomialOrder::DegRevLex);
        // the basis is sorted ascending; print leading elements first
        let gens: Vec<Polynomial> = gb.iter().rev().map(|g| g.primitive()).collect();
        let ideal = Ideal::new(self.ring(), gens).expect("same ring");
        ClosedSet::new(ideal)
    }

    /// Whether a rational point lies on the set.
    pub fn contains_point(&self, point: &[BigRational]) -> Result<bool> {
        self.check_point_len(point.len())?;
        for g in self.generators() {
            if !g.evaluate(point)?.eq(&BigRational::from_integer(0.into())) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether a point over `F_p` lies on the reduction of the set mod `p`.
    pub fn contains_point_mod(&self, point: &[u64], p: u64) -> Result<bool> {
        self.check_point_len(point.len())?;
        for g in self.generators() {
            if g.eval_mod(point, p)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_point_len(&self, len: usize) -> Result<()> {
        let n = self.ring().nvars();
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, got: len });
        }
        Ok(())
    }

    /// Generator strings, as used by the structured output.
    pub fn generator_strings(&self) -> Vec<String> {
        self.generators().iter().map(|g| g.to_string()).collect()
    }
}

impl fmt::Display for ClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_whole() {
            return if self.ring().n_fiber() == 0 { write!(f, "Spec B") } else { write!(f, "V(0)") };
        }
        write!(f, "V(")?;
        for (i, g) in self.generators().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}
