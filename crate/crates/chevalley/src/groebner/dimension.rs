use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::Monomial;

/// Largest variable count for which the independent-set search is exhaustive.
pub const EXHAUSTIVE_LIMIT: usize = 16;

/// Krull dimension with a witnessing maximal independent variable set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    /// `-1` for the unit ideal.
    pub dim: i64,
    pub witness_independent_set: Vec<String>,
}

/// Dimension of `k[vars in var_mask] / ⟨lms⟩` where only leading monomials
/// supported inside `var_mask` are taken into account. Returns the dimension and
/// the witness as a bit mask.
///
/// A set `S` is independent iff no leading monomial is supported inside `S`.
pub fn dimension_of_monomials(lms: &[Monomial], var_mask: u64) -> Result<(i64, u64)> {
    let nvars = var_mask.count_ones() as usize;
    let mut masks: Vec<u64> = lms
        .iter()
        .map(|m| m.support())
        .filter(|s| s & !var_mask == 0)
        .collect();
    if masks.contains(&0) {
        return Ok((-1, 0));
    }
    if nvars > EXHAUSTIVE_LIMIT {
        return Err(Error::DimensionNotCertified { nvars });
    }
    masks.sort_unstable_by_key(|m| m.count_ones());
    masks.dedup();
    // drop masks that contain a smaller mask; they never decide independence
    let mut minimal: Vec<u64> = Vec::new();
    for m in masks {
        if !minimal.iter().any(|&k| k & !m == 0) {
            minimal.push(m);
        }
    }
    let mut best = (0u32, 0u64);
    let mut s = var_mask;
    loop {
        let size = s.count_ones();
        if size > best.0 && minimal.iter().all(|&l| l & !s != 0) {
            best = (size, s);
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & var_mask;
    }
    Ok((best.0 as i64, best.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn zero_ideal_has_full_dimension() {
        assert_eq!(dimension_of_monomials(&[], 0b11).unwrap().0, 2);
    }

    #[test]
    fn unit_ideal_is_minus_one() {
        assert_eq!(dimension_of_monomials(&[m(&[0, 0])], 0b11).unwrap().0, -1);
    }

    #[test]
    fn product_of_two_variables() {
        let (d, w) = dimension_of_monomials(&[m(&[1, 1])], 0b11).unwrap();
        assert_eq!(d, 1);
        assert_eq!(w.count_ones(), 1);
    }

    #[test]
    fn restriction_ignores_foreign_monomials() {
        // x*b with only b counted: the monomial is outside the subring
        let (d, _) = dimension_of_monomials(&[m(&[1, 1])], 0b01).unwrap();
        assert_eq!(d, 1);
    }

    #[test]
    fn too_many_variables_is_not_certified() {
        let mask = (1u64 << 17) - 1;
        assert!(matches!(
            dimension_of_monomials(&[], mask),
            Err(Error::DimensionNotCertified { nvars: 17 })
        ));
    }
}
