//! Independent check of a computed image over a finite field.
//!
//! A base point `b ∈ F_p^m` is in the image of `Γ` over the algebraic closure
//! of `F_p` iff the fiber ideal (the generators with `b` substituted) is not
//! the unit ideal, which one Gröbner basis over `F_p` decides. The oracle
//! compares that verdict with membership in the reduction of the computed
//! constructible set, on every point when the base is small and otherwise on
//! a grid of small coordinates, random points, and images of source points.
//! For all but finitely many primes the two must agree.

use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::{ClosedSet, ConstructibleSet};
use crate::groebner::reduced_gb_mod_p;
use crate::par;
use crate::polyring::{inv_mod, Fraction, MonomialOrder};

/// Point sets up to this size are enumerated completely.
pub const EXHAUSTIVE_POINTS: u64 = 4096;
/// Cap on the grid of small coordinates.
const GRID_CAP: usize = 1024;

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub prime: u64,
    pub exhaustive: bool,
    pub base_points: usize,
    pub agreements: usize,
    /// The first few disagreeing points with both verdicts.
    pub mismatches: Vec<String>,
    pub source_points: usize,
    pub source_hits: usize,
    /// Points lying in more than one component of the result.
    pub overlaps: usize,
}

impl OracleReport {
    pub fn ok(&self) -> bool {
        self.agreements == self.base_points && self.source_hits == self.source_points
    }

    pub fn to_text(&self) -> String {
        format!(
            "oracle p={} base {}/{} agree{} source {}/{} hit overlaps={}",
            self.prime,
            self.agreements,
            self.base_points,
            if self.exhaustive { " (exhaustive)" } else { "" },
            self.source_hits,
            self.source_points,
            self.overlaps
        )
    }
}

/// Whether some `Γ` has a point over the algebraic closure of `F_p` above `b`.
pub fn fiber_nonempty_mod(gammas: &[ClosedSet], b: &[u64], p: u64) -> Result<bool> {
    for gamma in gammas {
        let subs: Vec<(usize, BigRational)> =
            b.iter().enumerate().map(|(i, &v)| (i, BigRational::from_integer(v.into()))).collect();
        let gens: Vec<_> = gamma.generators().iter().map(|g| g.partial_evaluate(&subs)).collect();
        let gb = reduced_gb_mod_p(&gens, MonomialOrder::DegRevLex, p)?;
        let unit = gb.iter().any(|g| g.len() == 1 && g[0].0.is_one());
        if !unit {
            return Ok(true);
        }
    }
    Ok(false)
}

fn exhaustive_size(p: u64, dim: usize) -> Option<u64> {
    let mut n = 1u64;
    for _ in 0..dim {
        n = n.checked_mul(p)?;
        if n > EXHAUSTIVE_POINTS {
            return None;
        }
    }
    Some(n)
}

fn all_points(p: u64, dim: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::with_capacity(dim)];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// Base points to test: everything for a small base, otherwise coordinates
/// from `{0, 1, -1, 2}` (which meet the coordinate subspaces where images tend
/// to degenerate) plus uniform random points.
pub fn sample_base_points(dim: usize, p: u64, samples: usize, rng: &mut ChaCha8Rng) -> (Vec<Vec<u64>>, bool) {
    if exhaustive_size(p, dim).is_some() {
        return (all_points(p, dim), true);
    }
    let small: Vec<u64> = [0, 1, p - 1, 2].into_iter().filter(|&c| c < p).collect::<BTreeSet<_>>().into_iter().collect();
    let mut pts: BTreeSet<Vec<u64>> = BTreeSet::new();
    let grid_size = (small.len() as f64).powi(dim as i32);
    if grid_size <= GRID_CAP as f64 {
        let mut grid = vec![Vec::with_capacity(dim)];
        for _ in 0..dim {
            grid = grid
                .into_iter()
                .flat_map(|v| {
                    small.iter().map(move |&c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        pts.extend(grid);
    } else {
        while pts.len() < GRID_CAP {
            pts.insert((0..dim).map(|_| small[rng.gen_range(0..small.len())]).collect());
        }
    }
    for _ in 0..samples {
        pts.insert((0..dim).map(|_| rng.gen_range(0..p)).collect());
    }
    (pts.into_iter().collect(), false)
}

/// Images `b = p(x)/q(x)` of source points where every denominator is
/// nonzero. `comps` live in a ring whose fiber variables are the source.
pub fn pushforward_points(comps: &[Fraction], p: u64, samples: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<u64>>> {
    let Some(first) = comps.first() else { return Ok(Vec::new()) };
    let ring = first.num.ring();
    let (nb, nf) = (ring.n_base(), ring.n_fiber());
    let sources: Vec<Vec<u64>> = match exhaustive_size(p, nf) {
        Some(_) => all_points(p, nf),
        None => (0..samples).map(|_| (0..nf).map(|_| rng.gen_range(0..p)).collect()).collect(),
    };
    let mut out = Vec::with_capacity(sources.len());
    'points: for x in sources {
        let full: Vec<u64> = std::iter::repeat_n(0, nb).chain(x).collect();
        let mut b = Vec::with_capacity(comps.len());
        for f in comps {
            let den = f.den.eval_mod(&full, p)?;
            if den == 0 {
                continue 'points;
            }
            b.push(f.num.eval_mod(&full, p)? * inv_mod(den, p) % p);
        }
        out.push(b);
    }
    Ok(out)
}

/// Runs the oracle for one prime. `comps` enables the source-side check for
/// map problems without a domain restriction.
pub fn point_oracle(
    gammas: &[ClosedSet],
    comps: Option<&[Fraction]>,
    result: &ConstructibleSet,
    p: u64,
    samples: usize,
    seed: u64,
) -> Result<OracleReport> {
    let dim = gammas.first().map_or(0, |g| g.ring().n_base());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
    let images = match comps {
        Some(c) => pushforward_points(c, p, samples, &mut rng)?,
        None => Vec::new(),
    };
    let (mut points, exhaustive) = sample_base_points(dim, p, samples, &mut rng);
    let mut source_hits = 0;
    for b in &images {
        if result.contains_point_mod(b, p)? {
            source_hits += 1;
        }
    }
    if !exhaustive {
        let have: BTreeSet<Vec<u64>> = points.iter().cloned().collect();
        let extra: BTreeSet<Vec<u64>> = images.iter().filter(|b| !have.contains(*b)).cloned().collect();
        points.extend(extra);
    }
    let verdicts = par::try_map(&points, |b| -> Result<(bool, usize)> {
        Ok((fiber_nonempty_mod(gammas, b, p)?, result.multiplicity_mod(b, p)?))
    })?;
    let mut agreements = 0;
    let mut overlaps = 0;
    let mut mismatches = Vec::new();
    for (b, (hit, mult)) in points.iter().zip(verdicts) {
        if mult > 1 {
            overlaps += 1;
        }
        if hit == (mult > 0) {
            agreements += 1;
        } else if mismatches.len() < 5 {
            mismatches.push(format!("{b:?}: fiber {} but result says {}", if hit { "nonempty" } else { "empty" }, mult > 0));
        }
    }
    Ok(OracleReport {
        prime: p,
        exhaustive,
        base_points: points.len(),
        agreements,
        mismatches,
        source_points: images.len(),
        source_hits,
        overlaps,
    })
}

/// Points of `points` on which the reductions of `a` and `b` differ.
pub fn disagreements_mod(a: &ConstructibleSet, b: &ConstructibleSet, points: &[Vec<u64>], p: u64) -> Result<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for pt in points {
        if a.contains_point_mod(pt, p)? != b.contains_point_mod(pt, p)? {
            out.push(pt.clone());
        }
    }
    Ok(out)
}
