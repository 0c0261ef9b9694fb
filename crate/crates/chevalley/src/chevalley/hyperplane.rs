use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::polyring::{Polynomial, Ring};

/// Candidate affine hyperplanes in the fiber coordinates, constant over the base.
///
/// Explicit candidates come first. Then the coordinate hyperplanes `x_i`, then
/// `x_i - a` for `a = 1, -1, 2, -2, …`, then seeded random `x_i - a1*x_j - a0`.
/// The last two stages each emit `per_stage` candidates (default `8n`).
#[derive(Clone, Debug)]
pub struct HyperplaneIterator {
    ring: Ring,
    fibers: Vec<usize>,
    explicit: VecDeque<Polynomial>,
    stage: u8,
    index: usize,
    per_stage: usize,
    rng: ChaCha8Rng,
    emitted: usize,
}

impl HyperplaneIterator {
    pub fn new(ring: &Ring, seed: u64, per_stage: Option<usize>, explicit: Vec<Polynomial>) -> Self {
        let fibers: Vec<usize> = (0..ring.nvars()).filter(|&i| ring.is_fiber(i)).collect();
        let per_stage = per_stage.unwrap_or(8 * fibers.len());
        HyperplaneIterator {
            ring: ring.clone(),
            fibers,
            explicit: explicit.into(),
            stage: 0,
            index: 0,
            per_stage,
            rng: ChaCha8Rng::seed_from_u64(seed),
            emitted: 0,
        }
    }

    /// Candidates handed out so far.
    pub fn attempts(&self) -> usize {
        self.emitted
    }

    pub fn stage(&self) -> u8 {
        self.stage
    }

    fn var(&self, k: usize) -> Polynomial {
        Polynomial::var(&self.ring, self.fibers[k])
    }

    fn constant(&self, a: i64) -> Polynomial {
        Polynomial::from_int(&self.ring, a)
    }
}

impl Iterator for HyperplaneIterator {
    type Item = Polynomial;

    fn next(&mut self) -> Option<Polynomial> {
        let n = self.fibers.len();
        if let Some(h) = self.explicit.pop_front() {
            self.emitted += 1;
            return Some(h);
        }
        if n == 0 {
            return None;
        }
        loop {
            match self.stage {
                0 if self.index < n => {
                    self.index += 1;
                    self.emitted += 1;
                    return Some(self.var(self.index - 1));
                }
                1 if self.index < self.per_stage => {
                    let k = self.index;
                    self.index += 1;
                    let step = (k / n) as i64;
                    let a = (step / 2 + 1) * if step % 2 == 0 { 1 } else { -1 };
                    self.emitted += 1;
                    return Some(&self.var(k % n) - &self.constant(a));
                }
                2 if self.index < self.per_stage => {
                    self.index += 1;
                    self.emitted += 1;
                    let i = self.rng.gen_range(0..n);
                    if n == 1 {
                        let a0 = self.rng.gen_range(-12..=12);
                        return Some(&self.var(i) - &self.constant(a0));
                    }
                    let mut j = self.rng.gen_range(0..n - 1);
                    if j >= i {
                        j += 1;
                    }
                    let mut a1 = self.rng.gen_range(1..=3);
                    if self.rng.gen_bool(0.5) {
                        a1 = -a1;
                    }
                    let a0 = self.rng.gen_range(-3..=3);
                    let xi = self.var(i);
                    let xj = self.var(j);
                    return Some(&(&xi - &xj.scale(&num_rational::BigRational::from_integer(a1.into()))) - &self.constant(a0));
                }
                0 | 1 => {
                    self.stage += 1;
                    self.index = 0;
                }
                _ => return None,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_polynomial, RingContext};

    #[test]
    fn emits_coordinate_planes_then_shifts() {
        let r = RingContext::new(&["b"], &["x", "y"]).unwrap();
        let it = HyperplaneIterator::new(&r, 7, None, vec![]);
        let first: Vec<String> = it.take(6).map(|p| p.to_string()).collect();
        assert_eq!(first, ["x", "y", "x - 1", "y - 1", "x + 1", "y + 1"]);
    }

    #[test]
    fn explicit_candidates_come_first() {
        let r = RingContext::new(&["b"], &["x"]).unwrap();
        let h = parse_polynomial(&r, "x - 1").unwrap();
        let mut it = HyperplaneIterator::new(&r, 0, None, vec![h.clone(), h.clone()]);
        assert_eq!(it.next().unwrap(), h);
        assert_eq!(it.next().unwrap(), h);
        assert_eq!(it.next().unwrap().to_string(), "x");
    }

    #[test]
    fn budget_bounds_the_stream_and_is_deterministic() {
        let r = RingContext::new(&["b"], &["x", "y", "z"]).unwrap();
        let a: Vec<_> = HyperplaneIterator::new(&r, 42, Some(4), vec![]).collect();
        let b: Vec<_> = HyperplaneIterator::new(&r, 42, Some(4), vec![]).collect();
        assert_eq!(a.len(), 3 + 4 + 4);
        assert_eq!(a, b);
        for h in &a {
            assert_eq!(h.support() & r.base_mask(), 0);
        }
    }

    #[test]
    fn no_fibers_means_no_candidates() {
        let r = RingContext::base_only(&["b"]).unwrap();
        assert!(HyperplaneIterator::new(&r, 0, None, vec![]).next().is_none());
    }
}
