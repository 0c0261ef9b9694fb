//! From a problem spec to closed sets the solver can project.

use num_rational::BigRational;

use super::spec::{DomainMember, Mode, ProblemSpec};
use crate::chevalley::{SolverOptions, Strategy};
use crate::error::{Error, Result};
use crate::geometry::ClosedSet;
use crate::orbits::{OrbitProblem, Translation};
use crate::polyring::{parse_polynomial, parse_polynomial_list, parse_rational, Fraction, Polynomial, Ring, RingContext};

/// The ambient ring `B[x]` of a spec.
pub fn spec_ring(spec: &ProblemSpec) -> Result<Ring> {
    RingContext::new(&spec.base, &spec.fiber)
}

fn parse_all(ring: &Ring, gens: &[String]) -> Result<Vec<Polynomial>> {
    gens.iter().map(|g| parse_polynomial(ring, g)).collect()
}

/// Map components `b_i = p_i / q_i`, in base variable order, as fractions in
/// the fiber variables of `ring`.
pub fn map_components(spec: &ProblemSpec, ring: &Ring) -> Result<Vec<Fraction>> {
    let mut out = Vec::with_capacity(spec.base.len());
    for b in &spec.base {
        let mut hits = spec.map.iter().filter(|c| &c.target == b);
        let c = hits
            .next()
            .ok_or_else(|| Error::InvalidProblem(format!("no map component for `{b}`")))?;
        if hits.next().is_some() {
            return Err(Error::InvalidProblem(format!("two map components for `{b}`")));
        }
        let f = parse_rational(ring, &c.expr)?;
        if f.den.is_zero() {
            return Err(Error::ZeroPolynomial("map denominator"));
        }
        if (f.num.support() | f.den.support()) & ring.base_mask() != 0 {
            return Err(Error::InvalidProblem(format!("component of `{b}` uses base variables")));
        }
        out.push(f);
    }
    if let Some(c) = spec.map.iter().find(|c| !spec.base.contains(&c.target)) {
        return Err(Error::InvalidProblem(format!("map target `{}` is not a base variable", c.target)));
    }
    Ok(out)
}

/// `⟨q_i b_i − p_i⟩`. With `saturate`, the Rabinowitsch factor `t·∏q_i − 1`
/// restricts the graph to the domain of definition.
pub fn graph_from_components(ring: &Ring, comps: &[Fraction], saturate: bool) -> Result<ClosedSet> {
    let mut gens: Vec<Polynomial> = comps
        .iter()
        .enumerate()
        .map(|(i, f)| &(&f.den * &Polynomial::var(ring, i)) - &f.num)
        .collect();
    let denominators: Vec<&Polynomial> = comps.iter().map(|f| &f.den).filter(|d| !d.is_constant()).collect();
    if !saturate || denominators.is_empty() {
        return ClosedSet::from_generators(ring, gens);
    }
    let (ext, t) = ring.with_aux("t");
    let mut prod = Polynomial::one(&ext);
    for d in denominators {
        prod = &prod * &d.embed(&ext)?;
    }
    let mut lifted = gens.drain(..).map(|g| g.embed(&ext)).collect::<Result<Vec<_>>>()?;
    lifted.push(&(&Polynomial::var(&ext, t) * &prod) - &Polynomial::one(&ext));
    ClosedSet::from_generators(&ext, lifted)
}

/// The graph of a map-mode spec.
pub fn build_graph_ideal(spec: &ProblemSpec) -> Result<ClosedSet> {
    if spec.mode != Mode::Map {
        return Err(Error::InvalidProblem("a graph ideal needs mode = map".into()));
    }
    let ring = spec_ring(spec)?;
    let comps = map_components(spec, &ring)?;
    graph_from_components(&ring, &comps, spec.options.saturate_graph)
}

/// A locally closed `V(J) \ V(Q_1) \ … \ V(Q_k)` with parsed generators.
#[derive(Clone, Debug)]
pub struct LocallyClosed {
    pub equations: Vec<Polynomial>,
    pub removed: Vec<Vec<Polynomial>>,
}

impl LocallyClosed {
    pub fn parse(ring: &Ring, m: &DomainMember) -> Result<Self> {
        Ok(LocallyClosed {
            equations: parse_all(ring, &m.equations)?,
            removed: m.removed.iter().map(|r| parse_all(ring, r)).collect::<Result<_>>()?,
        })
    }
}

/// Closed sets, one per member, in rings with one fresh fiber variable per
/// removed set, that project onto the members: `V(Q) = V(q_1, …, q_r)` is
/// removed by the factor `(t q_1 − 1)⋯(t q_r − 1)`. A member without removed
/// sets is passed through.
pub fn rabinowitsch_cover(ring: &Ring, domain: &[LocallyClosed]) -> Result<Vec<ClosedSet>> {
    domain
        .iter()
        .map(|m| {
            let mut ext = ring.clone();
            let mut ts = Vec::new();
            for _ in &m.removed {
                let (next, t) = ext.with_aux("t");
                ext = next;
                ts.push(t);
            }
            let mut gens = m.equations.iter().map(|g| g.embed(&ext)).collect::<Result<Vec<_>>>()?;
            for (qs, &t) in m.removed.iter().zip(&ts) {
                let tv = Polynomial::var(&ext, t);
                let mut factor = Polynomial::one(&ext);
                for q in qs {
                    factor = &factor * &(&(&tv * &q.embed(&ext)?) - &Polynomial::one(&ext));
                }
                gens.push(factor);
            }
            ClosedSet::from_generators(&ext, gens)
        })
        .collect()
}

/// The closed sets whose projections make up the answer of a projection or
/// map spec: the graph (or ideal) intersected with each domain cover.
pub fn working_sets(spec: &ProblemSpec) -> Result<Vec<ClosedSet>> {
    let ring = spec_ring(spec)?;
    let base_set = match spec.mode {
        Mode::Projection => ClosedSet::from_generators(&ring, parse_all(&ring, &spec.ideal)?)?,
        Mode::Map => build_graph_ideal(spec)?,
        Mode::Orbit | Mode::Stratification => {
            return orbit_problems(spec).map(|ps| ps.into_iter().map(|p| p.graph).collect())
        }
    };
    if spec.domain.is_empty() {
        return Ok(vec![base_set]);
    }
    let members = spec
        .domain
        .iter()
        .map(|m| LocallyClosed::parse(base_set.ring(), m))
        .collect::<Result<Vec<_>>>()?;
    rabinowitsch_cover(base_set.ring(), &members)?
        .into_iter()
        .map(|cover| {
            let mut gens = cover.generators().to_vec();
            for g in base_set.generators() {
                gens.push(g.embed(cover.ring())?);
            }
            ClosedSet::from_generators(cover.ring(), gens)
        })
        .collect()
}

/// Solver settings from the spec; explicit hyperplanes are parsed over the
/// full ring.
pub fn solver_options(spec: &ProblemSpec) -> Result<SolverOptions> {
    let ring = spec_ring(spec)?;
    let o = &spec.options;
    Ok(SolverOptions {
        strategy: o.strategy.unwrap_or(Strategy::Infinity),
        iteration: o.iteration.unwrap_or_default(),
        seed: o.seed.unwrap_or(0),
        hyperplane_budget: o.hyperplane_budget,
        explicit_hyperplanes: parse_all(&ring, &o.hyperplanes)?,
    })
}

fn rationals(ring: &Ring, vals: &[String]) -> Result<Vec<BigRational>> {
    vals.iter()
        .map(|v| {
            parse_polynomial(ring, v)?
                .as_constant()
                .ok_or_else(|| Error::InvalidProblem(format!("`{v}` is not a rational number")))
        })
        .collect()
}

/// One orbit problem per listed point. The action formulas in `[map]` may use
/// the point variables, which are replaced by the point's coordinates; the
/// group equations are added to every graph.
pub fn orbit_problems(spec: &ProblemSpec) -> Result<Vec<OrbitProblem>> {
    let o = spec
        .orbit
        .as_ref()
        .ok_or_else(|| Error::InvalidProblem("missing [orbit] section".into()))?;
    if o.points.is_empty() {
        return Err(Error::InvalidProblem("no orbit point given".into()));
    }
    if spec.mode == Mode::Orbit && o.points.len() != 1 {
        return Err(Error::InvalidProblem("orbit mode takes exactly one point".into()));
    }
    if !o.point_vars.is_empty() && o.point_vars.len() != spec.base.len() {
        return Err(Error::InvalidProblem("one point variable per base variable is needed".into()));
    }
    let ring = spec_ring(spec)?;
    let base = ring.base_ring();
    let with_points = ring.with_fiber(&o.point_vars)?;
    let identity = rationals(&ring, &o.identity)?;
    let translations = o
        .translations
        .iter()
        .map(|t| {
            let inv = if t.inverse.is_empty() { None } else { Some(parse_all(&base, &t.inverse)?) };
            Translation::new(&base, t.label.clone(), parse_all(&base, &t.map)?, inv)
        })
        .collect::<Result<Vec<_>>>()?;
    let group = parse_all(&ring, &o.group)?;
    let mut problems = Vec::with_capacity(o.points.len());
    for point in &o.points {
        let beta = rationals(&ring, point)?;
        let gens = if spec.map.is_empty() {
            parse_all(&ring, &spec.ideal)?
        } else {
            let subs: Vec<(usize, BigRational)> = o
                .point_vars
                .iter()
                .zip(&beta)
                .map(|(v, c)| (with_points.index_of(v).expect("point variables were added"), c.clone()))
                .collect();
            let mut tmp = spec.clone();
            tmp.fiber.extend(o.point_vars.iter().cloned());
            let comps = map_components(&tmp, &with_points)?
                .into_iter()
                .map(|f| {
                    Ok(Fraction {
                        num: f.num.partial_evaluate(&subs).embed(&ring)?,
                        den: f.den.partial_evaluate(&subs).embed(&ring)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            graph_from_components(&ring, &comps, false)?.generators().to_vec()
        };
        let mut all = gens;
        all.extend(group.iter().cloned());
        let graph = ClosedSet::from_generators(&ring, all)?;
        problems.push(OrbitProblem::new(graph, identity.clone(), beta, translations.clone(), o.injective)?);
    }
    Ok(problems)
}

/// Explicit hyperplanes given as a list string over the spec ring.
pub fn parse_hyperplanes(spec: &ProblemSpec, src: &str) -> Result<Vec<Polynomial>> {
    parse_polynomial_list(&spec_ring(spec)?, src)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(src: &str) -> ProblemSpec {
        ProblemSpec::from_text(src).unwrap()
    }

    #[test]
    fn monomial_map_graph() {
        let s = spec("[problem]\nmode = map\nbase = b1, b2\nfiber = x1, x2\n[map]\nb1 = x1\nb2 = x1*x2");
        let g = build_graph_ideal(&s).unwrap();
        assert_eq!(g.to_string(), "V(-x1 + b1, -x1*x2 + b2)");
    }

    #[test]
    fn identity_map_graph() {
        let s = spec("[problem]\nmode = map\nbase = b\nfiber = x\n[map]\nb = x");
        assert_eq!(build_graph_ideal(&s).unwrap().to_string(), "V(-x + b)");
    }

    #[test]
    fn saturated_graph_of_a_quotient() {
        let s = spec("[problem]\nmode = map\nbase = b\nfiber = x\n[map]\nb = x/x\n[options]\nsaturate_graph = true");
        let g = build_graph_ideal(&s).unwrap();
        assert_eq!(g.ring().names(), ["b", "x", "t"]);
        assert_eq!(g.generators().len(), 2);
        let image = g.ideal().eliminate().unwrap();
        assert_eq!(image.generators()[0].to_string(), "b - 1");
    }

    #[test]
    fn map_errors() {
        let missing = spec("[problem]\nmode = map\nbase = b1, b2\nfiber = x\n[map]\nb1 = x");
        assert!(matches!(build_graph_ideal(&missing), Err(Error::InvalidProblem(_))));
        let zero = spec("[problem]\nmode = map\nbase = b\nfiber = x\n[map]\nb = 1/(x - x)");
        assert_eq!(build_graph_ideal(&zero).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn covers() {
        let r = RingContext::base_only(&["b1", "b2"]).unwrap();
        let j = parse_polynomial_list(&r, "b1*b2").unwrap();
        let p = parse_polynomial_list(&r, "b1").unwrap();
        let q = parse_polynomial_list(&r, "b2").unwrap();
        let single = LocallyClosed { equations: j.clone(), removed: vec![p.clone()] };
        let iterated = LocallyClosed { equations: j.clone(), removed: vec![p.clone(), q.clone()] };
        let closed = LocallyClosed { equations: j, removed: vec![] };
        let pair = LocallyClosed { equations: vec![], removed: vec![vec![p[0].clone(), q[0].clone()]] };
        let c = rabinowitsch_cover(&r, &[single, iterated, closed, pair]).unwrap();
        assert_eq!(c[0].to_string(), "V(b1*b2, b1*t - 1)");
        assert_eq!(c[1].ring().fiber_names(), ["t", "t1"]);
        assert_eq!(c[2].to_string(), "V(b1*b2)");
        assert_eq!(c[3].generators()[0].to_string(), "b1*b2*t^2 - b1*t - b2*t + 1");
    }
}
