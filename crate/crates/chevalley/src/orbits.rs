//! Orbits of algebraic group actions.
//!
//! An orbit `yG` is the image of the orbit morphism `g ↦ y·g`, so the general
//! solver applies, but group structure allows three shortcuts. The fiber
//! dimension is read off the tangent space at `(y, 1_G)` instead of searched
//! for. An injective orbit morphism needs no fiber reduction at all. And since
//! the boundary of an orbit is invariant, a first hull `D` can be shrunk by
//! intersecting it with translates `D·g` until no point of the orbit is left
//! in it, instead of iterating the solver.

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::chevalley::{
    check_strict, constructible_projection_graph, hull_at_infinity, lca, lca_kemper,
    projection_data, LcaResult, SolverOptions, SolverStats, Strategy,
};
use crate::error::{Error, Result};
use crate::geometry::{ClosedSet, ConstructibleSet, MultipleDifference};
use crate::polyring::{Polynomial, Ring};

/// A group element acting on the base, given as the substitution `y ↦ y·g⁻¹`
/// (one polynomial per base variable). Pulling back the ideal of `D` along it
/// gives the ideal of `D·g`.
#[derive(Clone, Debug)]
pub struct Translation {
    pub label: String,
    pub map: Vec<Polynomial>,
    pub inverse: Option<Vec<Polynomial>>,
}

impl Translation {
    /// Checks the arity and, when an inverse is supplied, that both
    /// compositions are the identity.
    pub fn new(base: &Ring, label: impl Into<String>, map: Vec<Polynomial>, inverse: Option<Vec<Polynomial>>) -> Result<Self> {
        let label = label.into();
        if map.len() != base.nvars() {
            return Err(Error::Orbit(format!(
                "translation `{label}` has {} coordinates, expected {}",
                map.len(),
                base.nvars()
            )));
        }
        let map = map.iter().map(|p| p.embed(base)).collect::<Result<Vec<_>>>()?;
        if let Some(inv) = &inverse {
            if inv.len() != base.nvars() {
                return Err(Error::Orbit(format!("inverse of `{label}` has the wrong arity")));
            }
            let inv = inv.iter().map(|p| p.embed(base)).collect::<Result<Vec<_>>>()?;
            for (a, b) in [(&map, &inv), (&inv, &map)] {
                for (i, p) in a.iter().enumerate() {
                    if p.substitute(base, b)? != Polynomial::var(base, i) {
                        return Err(Error::Orbit(format!("`{label}` is not inverse to the supplied map")));
                    }
                }
            }
            return Ok(Translation { label, map, inverse: Some(inv) });
        }
        Ok(Translation { label, map, inverse: None })
    }

    /// `D·g` for a closed subset `D` of the base.
    pub fn apply(&self, d: &ClosedSet) -> Result<ClosedSet> {
        let base = d.ring();
        let gens = d
            .generators()
            .iter()
            .map(|g| g.substitute(base, &self.map))
            .collect::<Result<Vec<_>>>()?;
        ClosedSet::from_generators(base, gens)
    }
}

/// The orbit of `y` as the image of the graph of `α_y ⊆ Y × G`, with the
/// group variables in the fiber.
#[derive(Clone, Debug)]
pub struct OrbitProblem {
    pub graph: ClosedSet,
    /// Coordinates `ξ` of the identity element, one per fiber variable.
    pub identity: Vec<BigRational>,
    /// Coordinates `β` of `y`, one per base variable.
    pub base_point: Vec<BigRational>,
    pub translations: Vec<Translation>,
    /// Asserted by the caller, not verified.
    pub injective: bool,
}

impl OrbitProblem {
    pub fn new(
        graph: ClosedSet,
        identity: Vec<BigRational>,
        base_point: Vec<BigRational>,
        translations: Vec<Translation>,
        injective: bool,
    ) -> Result<Self> {
        let ring = graph.ring();
        if identity.len() != ring.n_fiber() || base_point.len() != ring.n_base() {
            return Err(Error::Orbit(format!(
                "expected {} identity and {} base coordinates, got {} and {}",
                ring.n_fiber(),
                ring.n_base(),
                identity.len(),
                base_point.len()
            )));
        }
        let p = OrbitProblem { graph, identity, base_point, translations, injective };
        if !p.graph.contains_point(&p.point())? {
            return Err(Error::Orbit("(y, 1) does not lie on the graph".into()));
        }
        Ok(p)
    }

    /// `(β, ξ)` in the variable order of the graph's ring.
    pub fn point(&self) -> Vec<BigRational> {
        self.base_point.iter().chain(&self.identity).cloned().collect()
    }

    /// Dimension of the fiber over `y`, i.e. of the stabilizer.
    pub fn stabilizer_dimension(&self) -> Result<i64> {
        let ring = self.graph.ring();
        let subs: Vec<(usize, BigRational)> = self.base_point.iter().cloned().enumerate().collect();
        let gens = self.graph.generators().iter().map(|g| g.partial_evaluate(&subs)).collect();
        let fiber = ClosedSet::from_generators(ring, gens)?;
        Ok(fiber.ideal().dimension_in(ring.fiber_mask())?.dim)
    }
}

/// The fiber Jacobian at `(y, 1_G)` and its row echelon form.
#[derive(Clone, Debug, PartialEq)]
pub struct EchelonReport {
    pub jacobian: Vec<Vec<BigRational>>,
    pub echelon: Vec<Vec<BigRational>>,
    pub pivots: Vec<usize>,
    pub non_pivots: Vec<usize>,
}

impl EchelonReport {
    pub fn to_json(&self, fiber_names: &[String]) -> Value {
        let mat = |m: &Vec<Vec<BigRational>>| -> Vec<Vec<String>> {
            m.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect()
        };
        json!({
            "jacobian": mat(&self.jacobian),
            "echelon": mat(&self.echelon),
            "pivots": self.pivots,
            "non_pivots": self.non_pivots.iter().map(|&i| fiber_names[i].clone()).collect::<Vec<_>>(),
        })
    }
}

/// Row echelon form over Q; the pivot in each column is the first row with a
/// nonzero entry there.
pub fn echelon(matrix: &[Vec<BigRational>], ncols: usize) -> EchelonReport {
    let mut m: Vec<Vec<BigRational>> = matrix.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for c in col..ncols {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in row + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..ncols {
                let delta = &f * &m[row][c];
                m[r][c] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    let non_pivots = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    EchelonReport { jacobian: matrix.to_vec(), echelon: m, pivots, non_pivots }
}

/// `∂(f_a with b := β)/∂x_i` at `x := ξ`. Substituting the base point first
/// keeps the polynomials small.
pub fn fiber_jacobian(p: &OrbitProblem) -> Vec<Vec<BigRational>> {
    let ring = p.graph.ring();
    let nb = ring.n_base();
    let base_subs: Vec<(usize, BigRational)> = p.base_point.iter().cloned().enumerate().collect();
    let fiber_subs: Vec<(usize, BigRational)> =
        p.identity.iter().cloned().enumerate().map(|(i, c)| (nb + i, c)).collect();
    p.graph
        .generators()
        .iter()
        .map(|f| {
            let f = f.partial_evaluate(&base_subs);
            (0..ring.n_fiber())
                .map(|i| {
                    f.derivative(nb + i)
                        .partial_evaluate(&fiber_subs)
                        .as_constant()
                        .unwrap_or_else(BigRational::zero)
                })
                .collect()
        })
        .collect()
}

/// The tangent cut: `E = ⟨x_i − ξ_i : i non-pivot⟩` and `Γ_0 = V(I + E)`.
#[derive(Clone, Debug)]
pub struct JacobianCut {
    pub report: EchelonReport,
    pub equations: Vec<Polynomial>,
    pub reduced: ClosedSet,
    /// Whether `Γ_0` passed the checks: finite generic fibers and an image of
    /// full dimension.
    pub admissible: bool,
}

pub fn jacobian_hyperplanes(p: &OrbitProblem) -> Result<JacobianCut> {
    let ring = p.graph.ring();
    let nb = ring.n_base();
    let report = echelon(&fiber_jacobian(p), ring.n_fiber());
    let equations: Vec<Polynomial> = report
        .non_pivots
        .iter()
        .map(|&i| &Polynomial::var(ring, nb + i) - &Polynomial::constant(ring, p.identity[i].clone()))
        .collect();
    let mut gens = p.graph.generators().to_vec();
    gens.extend(equations.iter().cloned());
    let reduced = ClosedSet::from_generators(ring, gens)?;
    // the graph is irreducible for a connected group, so the image closures
    // agree as soon as their dimensions do; the orbit dimension is dim Γ minus
    // the stabilizer dimension
    let data = projection_data(&reduced)?;
    let orbit_dim = p.graph.dimension()? - p.stabilizer_dimension()?;
    let admissible = data.dim == data.image_dim && data.image_dim == orbit_dim;
    Ok(JacobianCut { report, equations, reduced, admissible })
}

/// Everything [`orbit_image`] found out.
#[derive(Clone, Debug)]
pub struct OrbitResult {
    pub orbit: ConstructibleSet,
    pub closure: ClosedSet,
    pub first_hull: ClosedSet,
    /// The hull after intersecting with translates, when that succeeded.
    pub hull: Option<ClosedSet>,
    pub translations_used: usize,
    pub cut: Option<JacobianCut>,
    pub fallback: bool,
    pub warnings: Vec<String>,
    pub stats: SolverStats,
}

impl OrbitResult {
    pub fn to_json(&self) -> Value {
        let ring = self.closure.ring();
        json!({
            "orbit": self.orbit.to_json(),
            "closure": self.closure.canonical().generator_strings(),
            "first_hull": self.first_hull.canonical().generator_strings(),
            "hull": self.hull.as_ref().map(|h| h.canonical().generator_strings()),
            "translations_used": self.translations_used,
            "tangent_cut": self.cut.as_ref().map(|c| {
                let graph_ring = c.reduced.ring();
                let mut v = c.report.to_json(graph_ring.fiber_names());
                v["admissible"] = json!(c.admissible);
                v
            }),
            "fallback": self.fallback,
            "warnings": self.warnings,
            "base_vars": ring.names(),
        })
    }
}

/// The orbit `yG` as a locally closed set.
///
/// For an injective orbit morphism one hull computation on the graph itself
/// gives the boundary. Otherwise the graph is cut by the tangent heuristic
/// (or the generic reducer if that cut is inadmissible), and the hull is
/// intersected with translates until it meets no point of the orbit. If the
/// supplied translations run out first, the general graph iteration is used.
pub fn orbit_image(p: &OrbitProblem, opts: &SolverOptions) -> Result<OrbitResult> {
    let mut stats = SolverStats::new();
    let mut warnings = Vec::new();
    if p.injective {
        let res = match opts.strategy {
            Strategy::Infinity => {
                let image = projection_data(&p.graph)?.image;
                let hull = hull_at_infinity(&p.graph, &image)?;
                check_strict(&image, &hull)?;
                LcaResult {
                    image_closure: image,
                    boundary_hull: hull,
                    extra_components: Vec::new(),
                    hyperplane_attempts: 0,
                    base_splits: 0,
                    total_splits: 0,
                    strategy_fallback: false,
                }
            }
            Strategy::Kemper => lca_kemper(&p.graph)?,
        };
        stats.record_lca(&res);
        let orbit = single(&res.image_closure, &res.boundary_hull)?;
        stats.finish();
        return Ok(OrbitResult {
            orbit,
            closure: res.image_closure,
            first_hull: res.boundary_hull.clone(),
            hull: Some(res.boundary_hull),
            translations_used: 0,
            cut: None,
            fallback: false,
            warnings,
            stats,
        });
    }

    let cut = jacobian_hyperplanes(p)?;
    let res = if cut.admissible {
        lca(&cut.reduced, opts)?
    } else {
        warnings.push("tangent heuristic inadmissible, using the generic fiber reduction".into());
        lca(&p.graph, opts)?
    };
    stats.record_lca(&res);
    let closure = res.image_closure.clone();
    let first_hull = res.boundary_hull.clone();

    let mut hull = first_hull.clone();
    let mut used = 0;
    let invariant = loop {
        if p.graph.preimage_intersect(&hull)?.is_empty() {
            break true;
        }
        let Some(t) = p.translations.get(used) else { break false };
        hull = hull.intersect(&t.apply(&hull)?)?;
        used += 1;
    };
    if invariant {
        let orbit = single(&closure, &hull)?;
        stats.finish();
        return Ok(OrbitResult {
            orbit,
            closure,
            first_hull,
            hull: Some(hull),
            translations_used: used,
            cut: Some(cut),
            fallback: false,
            warnings,
            stats,
        });
    }
    warnings.push(format!(
        "{} translations did not empty the hull's preimage, falling back to the graph iteration",
        p.translations.len()
    ));
    let mut graph_stats = SolverStats::new();
    let orbit = constructible_projection_graph(&p.graph, opts, &mut graph_stats)?;
    graph_stats.lca_calls += stats.lca_calls;
    Ok(OrbitResult {
        orbit,
        closure,
        first_hull,
        hull: None,
        translations_used: used,
        cut: Some(cut),
        fallback: true,
        warnings,
        stats: graph_stats,
    })
}

fn single(closure: &ClosedSet, hull: &ClosedSet) -> Result<ConstructibleSet> {
    let mut out = ConstructibleSet::empty();
    if let Some(md) = MultipleDifference::new(closure.clone(), vec![hull.clone()])? {
        out.push(md);
    }
    Ok(out)
}

/// One orbit of a stratification: the points whose orbit closures coincide
/// share an entry.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub points: Vec<usize>,
    pub closure: ClosedSet,
    /// Strata whose closures are maximal among those strictly inside this one.
    pub covers: Vec<usize>,
    pub orbit: MultipleDifference,
}

#[derive(Clone, Debug)]
pub struct Stratification {
    pub strata: Vec<Stratum>,
    /// `(i, j)` whenever the closure of stratum `j` lies strictly inside that of `i`.
    pub containments: Vec<(usize, usize)>,
}

impl Stratification {
    pub fn as_union(&self) -> ConstructibleSet {
        ConstructibleSet::from_components(self.strata.iter().map(|s| s.orbit.clone()).collect())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "strata": self.strata.iter().map(|s| json!({
                "points": s.points,
                "closure": s.closure.canonical().generator_strings(),
                "covers": s.covers,
                "orbit": s.orbit.canonical().to_json(),
            })).collect::<Vec<_>>(),
            "containments": self.containments,
        })
    }
}

/// Orbit closure by elimination, through the tangent cut when it is admissible.
pub fn orbit_closure(p: &OrbitProblem) -> Result<ClosedSet> {
    let cut = jacobian_hyperplanes(p)?;
    let gamma = if cut.admissible { &cut.reduced } else { &p.graph };
    Ok(ClosedSet::new(gamma.ideal().eliminate()?))
}

/// Orbits of finitely many representatives, each as its closure minus the
/// maximal orbit closures strictly below it. Correct when the representatives
/// meet every orbit inside their closures.
pub fn orbit_stratification(points: &[OrbitProblem]) -> Result<Stratification> {
    let closures = points.iter().map(orbit_closure).collect::<Result<Vec<_>>>()?;
    let mut groups: Vec<(Vec<usize>, ClosedSet)> = Vec::new();
    'outer: for (i, c) in closures.into_iter().enumerate() {
        for (pts, rep) in groups.iter_mut() {
            if rep.set_eq(&c)? {
                pts.push(i);
                continue 'outer;
            }
        }
        groups.push((vec![i], c));
    }
    let k = groups.len();
    let mut below = vec![vec![false; k]; k];
    let mut containments = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i != j && groups[i].1.contains(&groups[j].1)? {
                below[i][j] = true;
                containments.push((i, j));
            }
        }
    }
    let mut strata = Vec::with_capacity(k);
    for i in 0..k {
        let covers: Vec<usize> = (0..k)
            .filter(|&j| below[i][j] && !(0..k).any(|m| below[i][m] && below[m][j]))
            .collect();
        let subs = covers.iter().map(|&j| groups[j].1.clone()).collect();
        let orbit = MultipleDifference::new(groups[i].1.clone(), subs)?
            .ok_or_else(|| Error::Orbit(format!("orbit of point {} is empty", groups[i].0[0])))?;
        strata.push(Stratum { points: groups[i].0.clone(), closure: groups[i].1.clone(), covers, orbit });
    }
    Ok(Stratification { strata, containments })
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Builds rational coordinates from integers.
pub fn rationals(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| q(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_polynomial_list, RingContext};

    fn v(r: &Ring, s: &str) -> ClosedSet {
        ClosedSet::from_generators(r, parse_polynomial_list(r, s).unwrap()).unwrap()
    }

    fn jordan(translations: bool) -> OrbitProblem {
        let r = RingContext::new(&["b11", "b12", "b21", "b22"], &["g11", "g12", "g21", "g22"]).unwrap();
        let graph = v(&r, "g21*g22 - b11, g22^2 - b12, -g21^2 - b21, -g21*g22 - b22, g11*g22 - g12*g21 - 1");
        let base = r.base_ring();
        let ts = if translations {
            // conjugation by [[0,1],[-1,0]]
            let map = parse_polynomial_list(&base, "b22, -b21, -b12, b11").unwrap();
            vec![Translation::new(&base, "w", map.clone(), None).unwrap()]
        } else {
            vec![]
        };
        OrbitProblem::new(graph, rationals(&[1, 0, 0, 1]), rationals(&[0, 1, 0, 0]), ts, false).unwrap()
    }

    #[test]
    fn jacobian_of_the_jordan_block() {
        let p = jordan(true);
        let j = fiber_jacobian(&p);
        let expect = [[0, 0, 1, 0], [0, 0, 0, 2], [0, 0, 0, 0], [0, 0, -1, 0], [1, 0, 0, 1]];
        for (row, e) in j.iter().zip(expect) {
            assert_eq!(row, &rationals(&e));
        }
        let cut = jacobian_hyperplanes(&p).unwrap();
        assert_eq!(cut.report.non_pivots, [1]);
        assert_eq!(cut.equations[0].to_string(), "g12");
        assert!(cut.admissible);
    }

    #[test]
    fn echelon_of_full_and_zero_matrices() {
        let id = vec![rationals(&[2, 0]), rationals(&[1, 3])];
        let r = echelon(&id, 2);
        assert_eq!(r.pivots, [0, 1]);
        assert!(r.non_pivots.is_empty());
        assert_eq!(r.echelon[1], rationals(&[0, 1]));
        let z = vec![rationals(&[0, 0])];
        assert_eq!(echelon(&z, 2).non_pivots, [0, 1]);
    }

    #[test]
    fn translations_shrink_the_jordan_hull_to_the_origin() {
        let p = jordan(true);
        let res = orbit_image(&p, &SolverOptions::default()).unwrap();
        let base = p.graph.ring().base_ring();
        assert!(res.closure.set_eq(&v(&base, "b11 + b22, b11*b22 - b12*b21")).unwrap());
        assert!(res.first_hull.set_eq(&v(&base, "b11, b12, b22")).unwrap());
        assert_eq!(res.translations_used, 1);
        assert!(res.hull.unwrap().set_eq(&v(&base, "b11, b12, b21, b22")).unwrap());
        assert!(!res.fallback);
    }

    #[test]
    fn missing_translations_fall_back() {
        let p = jordan(false);
        let res = orbit_image(&p, &SolverOptions::default()).unwrap();
        assert!(res.fallback);
        assert_eq!(res.warnings.len(), 1);
        for (pt, inside) in [([0u64, 1, 0, 0], true), ([0, 0, 0, 0], false), ([0, 0, 1, 0], true)] {
            assert_eq!(res.orbit.contains_point_mod(&pt, 7).unwrap(), inside);
        }
    }

    #[test]
    fn point_off_the_graph_is_rejected() {
        let r = RingContext::new(&["b"], &["g"]).unwrap();
        let graph = v(&r, "b - g");
        assert!(matches!(
            OrbitProblem::new(graph, rationals(&[1]), rationals(&[0]), vec![], false),
            Err(Error::Orbit(_))
        ));
    }

    #[test]
    fn translation_inverse_is_checked() {
        let base = RingContext::base_only(&["b1", "b2"]).unwrap();
        let map = parse_polynomial_list(&base, "b2, b1").unwrap();
        assert!(Translation::new(&base, "swap", map.clone(), Some(map.clone())).is_ok());
        let bad = parse_polynomial_list(&base, "b1, b1").unwrap();
        assert!(Translation::new(&base, "bad", map, Some(bad)).is_err());
    }

    #[test]
    fn trivial_group_fixes_the_point() {
        let r = RingContext::new(&["b1", "b2"], &[] as &[&str]).unwrap();
        let graph = v(&r, "b1 - 2, b2 + 1");
        let base = r.base_ring();
        let id = Translation::new(&base, "1", parse_polynomial_list(&base, "b1, b2").unwrap(), None).unwrap();
        let p = OrbitProblem::new(graph, vec![], rationals(&[2, -1]), vec![id], false).unwrap();
        let res = orbit_image(&p, &SolverOptions::default()).unwrap();
        assert!(res.first_hull.is_empty());
        assert_eq!(res.orbit.components().len(), 1);
        assert!(res.orbit.components()[0].is_closed());
    }
}
