use crate::error::{Error, Result};
use crate::geometry::ClosedSet;
use crate::groebner::Ideal;
use crate::polyring::{MonomialOrder, Polynomial};

use super::{zero_dimensional_fibers, HyperplaneIterator, SolverOptions, Strategy};

/// A locally closed approximation `A \ D` of the projection of `Γ`.
#[derive(Clone, Debug)]
pub struct LcaResult {
    /// `A`, the closure of the projection.
    pub image_closure: ClosedSet,
    /// `D`, a relative boundary hull: a proper closed subset of `A` outside of
    /// which every point of `A` has a preimage.
    pub boundary_hull: ClosedSet,
    /// Parts of `Γ` split off during fiber reduction, still to be projected.
    pub extra_components: Vec<ClosedSet>,
    pub hyperplane_attempts: usize,
    pub base_splits: usize,
    pub total_splits: usize,
    /// Set when the configured strategy could not produce a strict hull and
    /// the hull at infinity was used instead.
    pub strategy_fallback: bool,
}

/// Runs the configured strategy.
pub fn lca(gamma: &ClosedSet, opts: &SolverOptions) -> Result<LcaResult> {
    match opts.strategy {
        Strategy::Infinity => {
            let mut hp = HyperplaneIterator::new(
                gamma.ring(),
                opts.seed,
                opts.hyperplane_budget,
                opts.explicit_hyperplanes.clone(),
            );
            lca_infinity(gamma, &mut hp)
        }
        Strategy::Kemper => match lca_kemper(gamma) {
            // generic freeness needs an irreducible Γ; over a reducible or
            // nonreduced one the product of leading coefficients may vanish on
            // all of the closure, and the hull at infinity is still valid
            Err(Error::StrictnessViolated(_)) => {
                let mut hp = HyperplaneIterator::new(
                    gamma.ring(),
                    opts.seed,
                    opts.hyperplane_budget,
                    opts.explicit_hyperplanes.clone(),
                );
                let mut res = lca_infinity(gamma, &mut hp)?;
                res.strategy_fallback = true;
                Ok(res)
            }
            other => other,
        },
    }
}

/// Hull from the points at infinity of a fiber-reduced `Γ_0`: the top fiber
/// degree parts of a block basis cut out the closure at infinity, saturating by
/// the fiber variables removes the irrelevant locus, and setting the fiber
/// variables to zero projects to the base.
pub fn lca_infinity(gamma: &ClosedSet, hp: &mut HyperplaneIterator) -> Result<LcaResult> {
    let red = zero_dimensional_fibers(gamma, hp)?;
    let image = red.data.image.clone();
    let hull = hull_at_infinity(&red.reduced, &image)?;
    check_strict(&image, &hull)?;
    Ok(LcaResult {
        image_closure: image,
        boundary_hull: hull,
        extra_components: red.extras,
        hyperplane_attempts: red.attempts,
        base_splits: red.base_splits,
        total_splits: red.total_splits,
        strategy_fallback: false,
    })
}

/// The projection of the points at infinity of `reduced`, joined with the
/// closure `image` of its projection. This is a relative boundary hull only
/// when `reduced` has generically finite fibers.
pub fn hull_at_infinity(reduced: &ClosedSet, image: &ClosedSet) -> Result<ClosedSet> {
    let ring = reduced.ring().clone();
    let base = ring.base_ring();
    if image.is_empty() || ring.n_fiber() == 0 {
        return Ok(ClosedSet::empty(&base));
    }
    let g0 = reduced.ideal().gb(MonomialOrder::eliminating(ring.fiber_mask()));
    let maxdeg = g0.iter().map(|g| g.maxdeg_part()).collect::<Result<Vec<_>>>()?;
    let fiber_vars: Vec<Polynomial> = (0..ring.nvars())
        .filter(|&i| ring.is_fiber(i))
        .map(|i| Polynomial::var(&ring, i))
        .collect();
    let sat = Ideal::new(&ring, maxdeg)?.saturate_ideal(&Ideal::new(&ring, fiber_vars)?)?;
    let mut gens = sat
        .generators()
        .iter()
        .map(|g| g.kill_vars(ring.fiber_mask()).embed(&base))
        .collect::<Result<Vec<_>>>()?;
    gens.extend(image.generators().iter().cloned());
    ClosedSet::from_generators(&base, gens)
}

/// The base coefficient of the leading fiber monomial of `g`: the sum of the
/// base parts of all terms sharing the fiber part of the leading monomial.
pub fn kemper_leading_coefficient(g: &Polynomial, order: MonomialOrder) -> Result<Polynomial> {
    let ring = g.ring();
    let (lm, _) = g.leading_term(order).ok_or(Error::ZeroPolynomial("leading coefficient"))?;
    let fib = lm.restrict(ring.fiber_mask());
    let terms = g
        .terms()
        .iter()
        .filter(|(m, _)| m.restrict(ring.fiber_mask()) == fib)
        .map(|(m, c)| (m.restrict(ring.base_mask()), c.clone()));
    Polynomial::from_terms(ring, terms).embed(&ring.base_ring())
}

/// Hull from generic freeness: the product of the leading base coefficients of
/// the fiber-dependent elements of a reduced block basis. No fiber reduction.
pub fn lca_kemper(gamma: &ClosedSet) -> Result<LcaResult> {
    let ring = gamma.ring().clone();
    let base = ring.base_ring();
    let order = MonomialOrder::eliminating(ring.fiber_mask());
    let gb = gamma.ideal().gb(order);
    let image = ClosedSet::new(gamma.ideal().eliminate()?);
    let hull = if image.is_empty() {
        ClosedSet::empty(&base)
    } else {
        let mut prod = Polynomial::one(&base);
        for g in gb.iter().filter(|g| g.support() & ring.fiber_mask() != 0) {
            prod = &prod * &kemper_leading_coefficient(g, order)?;
        }
        let mut gens = vec![prod];
        gens.extend(image.generators().iter().cloned());
        ClosedSet::from_generators(&base, gens)?
    };
    check_strict(&image, &hull)?;
    Ok(LcaResult {
        image_closure: image,
        boundary_hull: hull,
        extra_components: Vec::new(),
        hyperplane_attempts: 0,
        base_splits: 0,
        total_splits: 0,
        strategy_fallback: false,
    })
}

pub(crate) fn check_strict(image: &ClosedSet, hull: &ClosedSet) -> Result<()> {
    if !image.is_empty() && hull.contains(image)? {
        return Err(Error::StrictnessViolated(format!("hull {hull} contains closure {image}")));
    }
    Ok(())
}
