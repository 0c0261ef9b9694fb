use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::coeff::{IntegerDomain, PrimeField};
use super::dimension::{dimension_of_monomials, DimensionReport};
use super::engine::{buchberger, convert_via_homogenization, normal_form, remainder, EngineStats, Terms};
use crate::error::{Error, Result};
use crate::par;
use crate::polyring::{canonical_order, rational_mod, Monomial, MonomialOrder, Polynomial, Ring, RingContext};

static GB_CALLS: AtomicU64 = AtomicU64::new(0);

/// Number of Gröbner basis computations (cache misses) since process start.
pub fn gb_call_count() -> u64 {
    GB_CALLS.load(Ordering::Relaxed)
}

type GbCache = Mutex<HashMap<MonomialOrder, Arc<Vec<Polynomial>>>>;

/// A finitely generated ideal with memoized reduced Gröbner bases.
///
/// Values are immutable; clones share the memo. Concurrent first computations
/// of the same basis may race, in which case the first stored result wins.
#[derive(Clone)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Polynomial>,
    cache: Arc<GbCache>,
}

/// Sorts canonical-order terms into the working order.
fn sorted_terms<C: Clone>(p: &Polynomial, order: MonomialOrder, mut conv: impl FnMut(&BigRational) -> C) -> Terms<C> {
    let mut t: Terms<C> = p.terms().iter().map(|(m, c)| (m.clone(), conv(c))).collect();
    if order != canonical_order(p.ring()) {
        t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    }
    t
}

/// Clears denominators, giving an integer polynomial sorted for `order`.
pub(crate) fn to_int_terms(p: &Polynomial, order: MonomialOrder) -> Terms<BigInt> {
    let den = p.terms().iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    sorted_terms(p, order, |c| c.numer() * (&den / c.denom()))
}

pub(crate) fn to_fp_terms(p: &Polynomial, order: MonomialOrder, prime: u64) -> Result<Terms<u64>> {
    let mut bad = false;
    let mut t = sorted_terms(p, order, |c| {
        rational_mod(c, prime).unwrap_or_else(|_| {
            bad = true;
            0
        })
    });
    if bad {
        return Err(Error::BadReduction { prime });
    }
    t.retain(|(_, c)| *c != 0);
    Ok(t)
}

fn from_int_terms(ring: &Ring, t: Terms<BigInt>) -> Polynomial {
    let lc = t.first().map(|(_, c)| c.clone()).unwrap_or_else(BigInt::one);
    Polynomial::from_terms(ring, t.into_iter().map(|(m, c)| (m, BigRational::new(c, lc.clone()))))
}

/// Reduced Gröbner basis over Q of `gens`, monic, sorted by leading monomial.
///
/// Orders other than degrevlex go through a degrevlex basis and homogenization.
pub fn reduced_gb_of(ring: &Ring, gens: &[Polynomial], order: MonomialOrder) -> (Vec<Polynomial>, EngineStats) {
    let mut stats = EngineStats::default();
    let drl = int_gb(ring.nvars(), gens, MonomialOrder::DegRevLex, &mut stats);
    let out = if order == MonomialOrder::DegRevLex {
        drl
    } else {
        convert_int(ring.nvars(), &drl, order, &mut stats)
    };
    (out.into_iter().map(|t| from_int_terms(ring, t)).collect(), stats)
}

fn int_gb(nvars: usize, gens: &[Polynomial], order: MonomialOrder, stats: &mut EngineStats) -> Vec<Terms<BigInt>> {
    GB_CALLS.fetch_add(1, Ordering::Relaxed);
    let input: Vec<Terms<BigInt>> = gens.iter().map(|g| to_int_terms(g, order)).collect();
    buchberger(&IntegerDomain, order, nvars, input, stats)
}

fn convert_int(nvars: usize, drl: &[Terms<BigInt>], order: MonomialOrder, stats: &mut EngineStats) -> Vec<Terms<BigInt>> {
    if drl.len() == 1 && drl[0][0].0.is_one() {
        return drl.to_vec();
    }
    GB_CALLS.fetch_add(1, Ordering::Relaxed);
    convert_via_homogenization(&IntegerDomain, order, nvars, drl, stats)
}

/// Reduced Gröbner basis over `F_p`, as coefficient vectors in engine form.
pub fn reduced_gb_mod_p(gens: &[Polynomial], order: MonomialOrder, prime: u64) -> Result<Vec<Terms<u64>>> {
    let nvars = gens.first().map(|g| g.ring().nvars()).unwrap_or(0);
    let input = gens
        .iter()
        .map(|g| to_fp_terms(g, MonomialOrder::DegRevLex, prime))
        .collect::<Result<Vec<_>>>()?;
    let field = PrimeField::new(prime);
    let mut stats = EngineStats::default();
    let drl = buchberger(&field, MonomialOrder::DegRevLex, nvars, input, &mut stats);
    if order == MonomialOrder::DegRevLex || (drl.len() == 1 && drl[0][0].0.is_one()) {
        return Ok(drl);
    }
    Ok(convert_via_homogenization(&field, order, nvars, &drl, &mut stats))
}

impl Ideal {
    /// The ideal generated by `gens` (zeros and duplicates are dropped).
    pub fn new(ring: &Ring, gens: Vec<Polynomial>) -> Result<Self> {
        let mut kept: Vec<Polynomial> = Vec::with_capacity(gens.len());
        for g in gens {
            RingContext::check_same(g.ring(), ring)?;
            if !g.is_zero() && !kept.contains(&g) {
                kept.push(g);
            }
        }
        Ok(Ideal { ring: ring.clone(), gens: kept, cache: Arc::new(Mutex::new(HashMap::new())) })
    }

    pub fn zero(ring: &Ring) -> Self {
        Ideal { ring: ring.clone(), gens: Vec::new(), cache: Arc::new(Mutex::new(HashMap::new())) }
    }

    pub fn unit(ring: &Ring) -> Self {
        Ideal::new(ring, vec![Polynomial::one(ring)]).expect("same ring")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// Reduced Gröbner basis for `order` (memoized).
    pub fn gb(&self, order: MonomialOrder) -> Arc<Vec<Polynomial>> {
        if let Some(g) = self.cache.lock().expect("gb cache poisoned").get(&order) {
            return g.clone();
        }
        let computed = if self.gens.is_empty() {
            Vec::new()
        } else if self.gens.iter().any(|g| g.is_constant()) {
            vec![Polynomial::one(&self.ring)]
        } else if order == MonomialOrder::DegRevLex {
            let mut stats = EngineStats::default();
            let gb = int_gb(self.ring.nvars(), &self.gens, order, &mut stats);
            gb.into_iter().map(|t| from_int_terms(&self.ring, t)).collect()
        } else {
            let drl = self.gb(MonomialOrder::DegRevLex);
            let drl: Vec<Terms<BigInt>> = drl.iter().map(|g| to_int_terms(g, MonomialOrder::DegRevLex)).collect();
            let mut stats = EngineStats::default();
            let gb = convert_int(self.ring.nvars(), &drl, order, &mut stats);
            gb.into_iter().map(|t| from_int_terms(&self.ring, t)).collect()
        };
        let computed = Arc::new(computed);
        let mut cache = self.cache.lock().expect("gb cache poisoned");
        cache.entry(order).or_insert(computed).clone()
    }

    /// Some cached basis, preferring degrevlex; computes degrevlex if none exists.
    pub fn any_gb(&self) -> (MonomialOrder, Arc<Vec<Polynomial>>) {
        {
            let cache = self.cache.lock().expect("gb cache poisoned");
            if let Some(g) = cache.get(&MonomialOrder::DegRevLex) {
                return (MonomialOrder::DegRevLex, g.clone());
            }
            if let Some((o, g)) = cache.iter().next() {
                return (*o, g.clone());
            }
        }
        (MonomialOrder::DegRevLex, self.gb(MonomialOrder::DegRevLex))
    }

    /// Seeds the memo with a basis known to be reduced for `order`.
    pub(crate) fn seed_gb(&self, order: MonomialOrder, basis: Vec<Polynomial>) {
        self.cache
            .lock()
            .expect("gb cache poisoned")
            .entry(order)
            .or_insert_with(|| Arc::new(basis));
    }

    /// Remainder of `f` modulo the reduced basis for `order` (exact over Q).
    pub fn normal_form(&self, f: &Polynomial, order: MonomialOrder) -> Result<Polynomial> {
        RingContext::check_same(f.ring(), &self.ring)?;
        let gb = self.gb(order);
        let conv = |p: &Polynomial| sorted_terms(p, order, |c| c.clone());
        let basis: Vec<Terms<BigRational>> = gb.iter().map(conv).collect();
        Ok(Polynomial::from_terms(&self.ring, remainder(order, conv(f), &basis)))
    }

    /// Ideal membership.
    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        RingContext::check_same(f.ring(), &self.ring)?;
        if f.is_zero() {
            return Ok(true);
        }
        let (order, gb) = self.any_gb();
        let basis: Vec<Terms<BigInt>> = gb.iter().map(|g| to_int_terms(g, order)).collect();
        Ok(normal_form(&IntegerDomain, order, to_int_terms(f, order), &basis).is_empty())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_unit(&self) -> bool {
        if self.gens.iter().any(|g| g.is_constant()) {
            return true;
        }
        if self.gens.is_empty() {
            return false;
        }
        let (_, gb) = self.any_gb();
        gb.len() == 1 && gb[0].is_constant()
    }

    /// `I + J`.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        RingContext::check_same(&self.ring, &other.ring)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn with_generators(&self, extra: &[Polynomial]) -> Result<Ideal> {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    /// Extension of the ideal to a ring containing all its variables by name.
    pub fn embed(&self, target: &Ring) -> Result<Ideal> {
        let gens = self.gens.iter().map(|g| g.embed(target)).collect::<Result<Vec<_>>>()?;
        Ideal::new(target, gens)
    }

    /// Image under a ring homomorphism given by variable images in `target`.
    pub fn substitute(&self, target: &Ring, images: &[Polynomial]) -> Result<Ideal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.substitute(target, images))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(target, gens)
    }

    /// `I ∩ k[vars outside elim]`, expressed in `target` (matched by names).
    pub fn eliminate_vars(&self, elim: u64, target: &Ring) -> Result<Ideal> {
        if elim == 0 {
            return self.embed(target);
        }
        let gb = self.gb(MonomialOrder::eliminating(elim));
        let kept: Vec<Polynomial> = gb
            .iter()
            .filter(|g| g.support() & elim == 0)
            .map(|g| g.embed(target))
            .collect::<Result<_>>()?;
        let out = Ideal::new(target, kept.clone())?;
        // G ∩ B is the reduced degrevlex basis of the elimination ideal when the
        // remaining block is ordered by degrevlex
        if target.n_fiber() == 0 && elim == self.ring.fiber_mask() {
            out.seed_gb(MonomialOrder::DegRevLex, kept);
        }
        Ok(out)
    }

    /// The elimination ideal `I ∩ B` in the base ring.
    pub fn eliminate(&self) -> Result<Ideal> {
        self.eliminate_vars(self.ring.fiber_mask(), &self.ring.base_ring())
    }

    /// `I ∩ J` via `t·I + (1-t)·J`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        RingContext::check_same(&self.ring, &other.ring)?;
        if self.is_zero_ideal() || other.is_zero_ideal() {
            return Ok(Ideal::zero(&self.ring));
        }
        if self.is_unit() {
            return Ok(other.clone());
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        let (ext, t_idx) = self.ring.with_aux("t");
        let t = Polynomial::var(&ext, t_idx);
        let one_minus_t = &Polynomial::one(&ext) - &t;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(&g.embed(&ext)? * &t);
        }
        for g in &other.gens {
            gens.push(&g.embed(&ext)? * &one_minus_t);
        }
        Ideal::new(&ext, gens)?.eliminate_vars(1u64 << t_idx, &self.ring)
    }

    /// `(I : f) = (I ∩ ⟨f⟩) / f`.
    pub fn quotient(&self, f: &Polynomial) -> Result<Ideal> {
        RingContext::check_same(f.ring(), &self.ring)?;
        if f.is_zero() {
            return Err(Error::ZeroPolynomial("quotient"));
        }
        if f.is_constant() {
            return Ok(self.clone());
        }
        let inter = self.intersect(&Ideal::new(&self.ring, vec![f.clone()])?)?;
        let gens = inter
            .gens
            .iter()
            .map(|g| g.exact_div(f))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(&self.ring, gens)
    }

    /// `(I : f^∞)` via elimination of `t` from `I + ⟨t·f - 1⟩`.
    pub fn saturate(&self, f: &Polynomial) -> Result<Ideal> {
        RingContext::check_same(f.ring(), &self.ring)?;
        if f.is_zero() {
            return Err(Error::ZeroPolynomial("saturate"));
        }
        if f.is_constant() || self.is_zero_ideal() {
            return Ok(self.clone());
        }
        if self.is_unit() {
            return Ok(Ideal::unit(&self.ring));
        }
        let (ext, t_idx) = self.ring.with_aux("t");
        let t = Polynomial::var(&ext, t_idx);
        let mut gens = self.gens.iter().map(|g| g.embed(&ext)).collect::<Result<Vec<_>>>()?;
        gens.push(&(&t * &f.embed(&ext)?) - &Polynomial::one(&ext));
        Ideal::new(&ext, gens)?.eliminate_vars(1u64 << t_idx, &self.ring)
    }

    /// `(I : J^∞) = ⋂_g (I : g^∞)` over the generators of `J`.
    pub fn saturate_ideal(&self, j: &Ideal) -> Result<Ideal> {
        RingContext::check_same(&self.ring, &j.ring)?;
        if j.is_zero_ideal() {
            return Err(Error::ZeroPolynomial("saturate_ideal"));
        }
        if j.gens.iter().any(|g| g.is_constant()) {
            return Ok(self.clone());
        }
        let parts = par::try_map(&j.gens, |g| self.saturate(g))?;
        let mut it = parts.into_iter();
        let mut acc = it.next().expect("nonzero ideal has a generator");
        for p in it {
            acc = acc.intersect(&p)?;
        }
        Ok(acc)
    }

    /// `f ∈ √I`, decided by `1 ∈ I + ⟨t·f - 1⟩`.
    pub fn radical_member(&self, f: &Polynomial) -> Result<bool> {
        RingContext::check_same(f.ring(), &self.ring)?;
        if f.is_zero() || self.is_unit() {
            return Ok(true);
        }
        if self.is_zero_ideal() {
            return Ok(false);
        }
        if self.contains(f)? {
            return Ok(true);
        }
        if f.is_constant() {
            return Ok(false);
        }
        let (ext, t_idx) = self.ring.with_aux("t");
        let t = Polynomial::var(&ext, t_idx);
        let mut gens = self.gens.iter().map(|g| g.embed(&ext)).collect::<Result<Vec<_>>>()?;
        gens.push(&(&t * &f.embed(&ext)?) - &Polynomial::one(&ext));
        Ok(Ideal::new(&ext, gens)?.is_unit())
    }

    /// Krull dimension of the quotient ring.
    pub fn dimension(&self) -> Result<DimensionReport> {
        self.dimension_in(full_mask(self.ring.nvars()))
    }

    /// Krull dimension of `k[vars in mask] / (I ∩ k[vars in mask])`, read off a
    /// basis for an order eliminating the complement of `mask`.
    pub fn dimension_in(&self, mask: u64) -> Result<DimensionReport> {
        let all = full_mask(self.ring.nvars());
        let (order, gb) = if mask == all {
            self.any_gb()
        } else {
            let o = MonomialOrder::eliminating(all & !mask);
            (o, self.gb(o))
        };
        let lms: Vec<Monomial> = gb
            .iter()
            .filter_map(|g| g.leading_term(order).map(|(m, _)| m.clone()))
            .collect();
        let (dim, witness) = dimension_of_monomials(&lms, mask)?;
        Ok(DimensionReport {
            dim,
            witness_independent_set: (0..self.ring.nvars())
                .filter(|i| witness >> i & 1 == 1)
                .map(|i| self.ring.name(i).to_string())
                .collect(),
        })
    }

    /// Equality of ideals via reduced degrevlex bases.
    pub fn same_ideal(&self, other: &Ideal) -> Result<bool> {
        RingContext::check_same(&self.ring, &other.ring)?;
        Ok(*self.gb(MonomialOrder::DegRevLex) == *other.gb(MonomialOrder::DegRevLex))
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "⟩")
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{self}")
    }
}
