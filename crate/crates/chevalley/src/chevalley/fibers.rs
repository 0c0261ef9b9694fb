use crate::error::{Error, Result};
use crate::geometry::ClosedSet;
use crate::groebner::full_mask;
use crate::polyring::MonomialOrder;

use super::HyperplaneIterator;

/// Dimensions of a closed set and of the closure of its projection, both read
/// off one block Gröbner basis.
#[derive(Clone, Debug)]
pub struct ProjectionData {
    pub dim: i64,
    pub image_dim: i64,
    pub image: ClosedSet,
}

pub fn projection_data(gamma: &ClosedSet) -> Result<ProjectionData> {
    let ring = gamma.ring();
    let ideal = gamma.ideal();
    let block = MonomialOrder::eliminating(ring.fiber_mask());
    // the block basis serves both dimensions: the leading ideal has the same
    // dimension under every global order, and G ∩ B is a basis of I ∩ B
    let _ = ideal.gb(block);
    let image = ClosedSet::new(ideal.eliminate()?);
    let dim = dimension_under(gamma, block, full_mask(ring.nvars()))?;
    let image_dim = dimension_under(gamma, block, ring.base_mask())?;
    Ok(ProjectionData { dim, image_dim, image })
}

fn dimension_under(gamma: &ClosedSet, order: MonomialOrder, mask: u64) -> Result<i64> {
    let gb = gamma.ideal().gb(order);
    let lms: Vec<_> = gb
        .iter()
        .filter_map(|g| g.leading_term(order).map(|(m, _)| m.clone()))
        .collect();
    Ok(crate::groebner::dimension_of_monomials(&lms, mask)?.0)
}

/// Output of the fiber reduction: a closed subset with generically finite
/// fibers and the pieces split off on the way.
#[derive(Clone, Debug)]
pub struct FiberReduction {
    pub reduced: ClosedSet,
    pub data: ProjectionData,
    pub extras: Vec<ClosedSet>,
    pub attempts: usize,
    pub base_splits: usize,
    pub total_splits: usize,
}

/// Cuts `gamma` by hyperplanes until its fibers are generically finite, without
/// primary decomposition. When no admissible hyperplane is found the set is
/// split, first along the base and later in the total space, and the other
/// part is returned in `extras`.
pub fn zero_dimensional_fibers(gamma: &ClosedSet, hp: &mut HyperplaneIterator) -> Result<FiberReduction> {
    let n = gamma.ring().n_fiber();
    let mut cur = gamma.clone();
    let mut data = projection_data(&cur)?;
    let mut extras = Vec::new();
    let (mut base_splits, mut total_splits) = (0, 0);
    let mut s = 1usize;
    while data.dim - data.image_dim > 0 {
        let h = hp.next().ok_or(Error::FiberReductionExhausted { attempts: hp.attempts() })?;
        let h = h.embed(gamma.ring())?;
        let cand = ClosedSet::new(cur.ideal().with_generators(&[h])?);
        let cand_data = projection_data(&cand)?;
        if cand_data.dim < data.dim {
            if cand_data.image.contains(&data.image)? {
                cur = cand;
                data = cand_data;
            } else if s > n {
                let delta = data.image.difference_closure(&cand_data.image)?;
                if !delta.contains(&data.image)? {
                    cur = gamma.preimage_intersect(&cand_data.image)?;
                    extras.push(gamma.preimage_intersect(&delta)?);
                    data = projection_data(&cur)?;
                    base_splits += 1;
                } else if s > 4 * n {
                    let gamma1 = gamma.preimage_intersect(&cand_data.image)?;
                    if !gamma1.contains(gamma)? {
                        let lifted = cand_data
                            .image
                            .generators()
                            .iter()
                            .map(|g| g.embed(gamma.ring()))
                            .collect::<Result<Vec<_>>>()?;
                        let lifted = crate::groebner::Ideal::new(gamma.ring(), lifted)?;
                        let gamma2 = ClosedSet::new(gamma.ideal().saturate_ideal(&lifted)?);
                        if !gamma2.contains(gamma)? {
                            cur = gamma1;
                            extras.push(gamma2);
                            data = projection_data(&cur)?;
                            total_splits += 1;
                        }
                    }
                }
            }
        }
        s += 1;
    }
    Ok(FiberReduction { reduced: cur, data, extras, attempts: hp.attempts(), base_splits, total_splits })
}
