//! Buchberger's algorithm with the Gebauer–Möller pair criteria and the sugar
//! selection strategy, generic over the coefficient domain.

use std::cmp::Ordering;

use num_rational::BigRational;

use super::coeff::{CoeffDomain, RationalDomain};
use crate::polyring::{Monomial, MonomialOrder};

/// Polynomial in engine form: terms sorted descending under the working order.
pub type Terms<C> = Vec<(Monomial, C)>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub pairs_considered: usize,
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub basis_peak: usize,
}

struct Entry<C> {
    terms: Terms<C>,
    lm: Monomial,
    mask: u64,
    sugar: u32,
    active: bool,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Computes `u*f[..idx]`, then `u*f[idx+1..] - v*m*g[1..]` merged, dropping the
/// cancelled terms `f[idx]` and `m*lead(g)`.
fn reduce_step<D: CoeffDomain>(
    dom: &D,
    order: MonomialOrder,
    f: &Terms<D::C>,
    idx: usize,
    u: &D::C,
    v: &D::C,
    m: &Monomial,
    g: &Terms<D::C>,
) -> Terms<D::C> {
    let scale_u = !dom.is_one(u);
    let mut out: Terms<D::C> = Vec::with_capacity(f.len() + g.len());
    for (mon, c) in &f[..idx] {
        out.push((mon.clone(), if scale_u { dom.mul(u, c) } else { c.clone() }));
    }
    let mut a = idx + 1;
    let mut b = 1;
    let mut shifted = g.get(b).map(|(gm, _)| gm.mul(m));
    while a < f.len() || b < g.len() {
        let ord = match (&f.get(a), &shifted) {
            (Some((fm, _)), Some(gm)) => order.cmp(fm, gm),
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (None, None) => break,
        };
        match ord {
            Ordering::Greater => {
                let (fm, fc) = &f[a];
                out.push((fm.clone(), if scale_u { dom.mul(u, fc) } else { fc.clone() }));
                a += 1;
            }
            Ordering::Less => {
                let gm = shifted.take().expect("checked above");
                out.push((gm, dom.neg(&dom.mul(v, &g[b].1))));
                b += 1;
                shifted = g.get(b).map(|(gm, _)| gm.mul(m));
            }
            Ordering::Equal => {
                let c = dom.mul_sub(u, &f[a].1, v, &g[b].1);
                if !dom.is_zero(&c) {
                    out.push((f[a].0.clone(), c));
                }
                a += 1;
                b += 1;
                shifted = g.get(b).map(|(gm, _)| gm.mul(m));
            }
        }
    }
    out
}

/// A set of reducers with their leading monomials and support masks.
pub struct Reducers<'a, C> {
    items: Vec<(&'a Monomial, u64, &'a Terms<C>, u32)>,
}

impl<'a, C> Reducers<'a, C> {
    pub fn new(polys: &'a [Terms<C>]) -> Self {
        Reducers {
            items: polys
                .iter()
                .filter(|p| !p.is_empty())
                .map(|p| (&p[0].0, p[0].0.support(), p, 0))
                .collect(),
        }
    }

    fn find(&self, m: &Monomial) -> Option<(&'a Monomial, &'a Terms<C>, u32)> {
        let ms = m.support();
        let mut best: Option<(&'a Monomial, &'a Terms<C>, u32)> = None;
        for &(lm, mask, p, sugar) in &self.items {
            if mask & !ms == 0 && lm.divides(m) && best.is_none_or(|(_, bp, _)| p.len() < bp.len()) {
                best = Some((lm, p, sugar));
            }
        }
        best
    }
}

/// Full reduction of `f` by `reducers`, starting at term index `start`.
/// Returns the normalized remainder and the updated sugar.
pub fn reduce_full<D: CoeffDomain>(
    dom: &D,
    order: MonomialOrder,
    f: Terms<D::C>,
    sugar: u32,
    reducers: &Reducers<'_, D::C>,
    start: usize,
) -> (Terms<D::C>, u32) {
    let (mut f, sugar) = reduce_raw(dom, order, f, sugar, reducers, start);
    dom.normalize(&mut f);
    (f, sugar)
}

/// Full reduction without the final normalization. Over a field, where the
/// cancellation factor of `f` is one, this is the exact remainder.
fn reduce_raw<D: CoeffDomain>(
    dom: &D,
    order: MonomialOrder,
    mut f: Terms<D::C>,
    mut sugar: u32,
    reducers: &Reducers<'_, D::C>,
    start: usize,
) -> (Terms<D::C>, u32) {
    let mut idx = start;
    let mut steps = 0usize;
    while idx < f.len() {
        let Some((lm, g, gs)) = reducers.find(&f[idx].0) else {
            idx += 1;
            continue;
        };
        let q = lm.quotient_of(&f[idx].0);
        let (u, v) = dom.cancel_factors(&f[idx].1, &g[0].1);
        sugar = sugar.max(q.degree() + gs);
        f = reduce_step(dom, order, &f, idx, &u, &v, &q, g);
        steps += 1;
        if dom.wants_periodic_normalization() && steps.is_multiple_of(8) {
            dom.normalize(&mut f);
        }
    }
    (f, sugar)
}

/// Reduces `f` modulo `basis` (any list, not necessarily a Gröbner basis).
pub fn normal_form<D: CoeffDomain>(
    dom: &D,
    order: MonomialOrder,
    f: Terms<D::C>,
    basis: &[Terms<D::C>],
) -> Terms<D::C> {
    let reducers = Reducers::new(basis);
    reduce_full(dom, order, f, 0, &reducers, 0).0
}

/// The exact remainder of `f` modulo a monic `basis` over Q.
pub fn remainder(order: MonomialOrder, f: Terms<BigRational>, basis: &[Terms<BigRational>]) -> Terms<BigRational> {
    let reducers = Reducers::new(basis);
    reduce_raw(&RationalDomain, order, f, 0, &reducers, 0).0
}

fn spoly<D: CoeffDomain>(dom: &D, order: MonomialOrder, a: &Entry<D::C>, b: &Entry<D::C>, lcm: &Monomial) -> Terms<D::C> {
    let ma = a.lm.quotient_of(lcm);
    let mb = b.lm.quotient_of(lcm);
    let (u, v) = dom.cancel_factors(&a.terms[0].1, &b.terms[0].1);
    let fa: Terms<D::C> = a.terms.iter().map(|(m, c)| (m.mul(&ma), c.clone())).collect();
    reduce_step(dom, order, &fa, 0, &u, &v, &mb, &b.terms)
}

fn pair_sugar<C>(a: &Entry<C>, b: &Entry<C>, lcm: &Monomial) -> u32 {
    let da = lcm.degree() - a.lm.degree();
    let db = lcm.degree() - b.lm.degree();
    (a.sugar + da).max(b.sugar + db)
}

/// Gebauer–Möller update after adding entry `h` to the basis.
fn update<C>(basis: &mut [Entry<C>], pairs: &mut Vec<Pair>, h: usize) {
    let hlm = basis[h].lm.clone();
    // candidate pairs (g, h) for active g
    let mut cands: Vec<(usize, Monomial, bool)> = basis
        .iter()
        .enumerate()
        .filter(|(g, e)| *g != h && e.active)
        .map(|(g, e)| (g, e.lm.lcm(&hlm), e.lm.is_coprime(&hlm)))
        .collect();
    // chain criterion among the new pairs: drop (g1,h) if some other candidate's
    // lcm properly divides it; coprime pairs are kept here and dropped below
    let mut keep = vec![true; cands.len()];
    for a in 0..cands.len() {
        if cands[a].2 {
            continue;
        }
        for b in 0..cands.len() {
            if a == b || !keep[b] {
                continue;
            }
            if cands[b].1.divides(&cands[a].1) && (cands[b].1 != cands[a].1 || b < a) {
                keep[a] = false;
                break;
            }
        }
    }
    // product criterion
    let mut new_pairs: Vec<Pair> = Vec::new();
    for (k, (g, lcm, coprime)) in cands.drain(..).enumerate() {
        if keep[k] && !coprime {
            let sugar = pair_sugar(&basis[g], &basis[h], &lcm);
            new_pairs.push(Pair { i: g, j: h, lcm, sugar });
        }
    }
    // old pairs made redundant by h
    pairs.retain(|p| {
        if !hlm.divides(&p.lcm) {
            return true;
        }
        let li = basis[p.i].lm.lcm(&hlm);
        let lj = basis[p.j].lm.lcm(&hlm);
        li == p.lcm || lj == p.lcm
    });
    pairs.extend(new_pairs);
    // deactivate elements whose leading monomial is divisible by lm(h)
    for (g, e) in basis.iter_mut().enumerate() {
        if g != h && e.active && hlm.divides(&e.lm) {
            e.active = false;
        }
    }
}

/// Reduced Gröbner basis of `input` with respect to `order`, normalized by the
/// domain and sorted ascending by leading monomial. A unit ideal yields `[1]`.
pub fn buchberger<D: CoeffDomain>(
    dom: &D,
    order: MonomialOrder,
    nvars: usize,
    input: Vec<Terms<D::C>>,
    stats: &mut EngineStats,
) -> Vec<Terms<D::C>> {
    let mut basis: Vec<Entry<D::C>> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let unit = || vec![vec![(Monomial::one(nvars), dom.one())]];

    let mut input: Vec<Terms<D::C>> = input.into_iter().filter(|f| !f.is_empty()).collect();
    input.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    for f in input {
        let sugar = f.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
        let (h, sugar) = reduce_full(dom, order, f, sugar, &active_reducers(&basis), 0);
        if h.is_empty() {
            continue;
        }
        if h[0].0.is_one() {
            return unit();
        }
        push_entry(&mut basis, &mut pairs, h, sugar);
    }

    while !pairs.is_empty() {
        let k = select_pair(order, &pairs);
        let p = pairs.swap_remove(k);
        stats.pairs_considered += 1;
        let s = spoly(dom, order, &basis[p.i], &basis[p.j], &p.lcm);
        stats.pairs_reduced += 1;
        let reducers = active_reducers(&basis);
        let (h, sugar) = reduce_full(dom, order, s, p.sugar, &reducers, 0);
        if h.is_empty() {
            stats.zero_reductions += 1;
            continue;
        }
        if h[0].0.is_one() {
            return unit();
        }
        push_entry(&mut basis, &mut pairs, h, sugar);
        stats.basis_peak = stats.basis_peak.max(basis.iter().filter(|e| e.active).count());
    }

    interreduce(dom, order, basis)
}

fn active_reducers<C>(basis: &[Entry<C>]) -> Reducers<'_, C> {
    Reducers {
        items: basis
            .iter()
            .filter(|e| e.active)
            .map(|e| (&e.lm, e.mask, &e.terms, e.sugar))
            .collect(),
    }
}

fn push_entry<C>(basis: &mut Vec<Entry<C>>, pairs: &mut Vec<Pair>, h: Terms<C>, sugar: u32) {
    let lm = h[0].0.clone();
    let mask = lm.support();
    basis.push(Entry { terms: h, lm, mask, sugar, active: true });
    let idx = basis.len() - 1;
    update(basis, pairs, idx);
}

fn select_pair(order: MonomialOrder, pairs: &[Pair]) -> usize {
    let mut best = 0;
    for k in 1..pairs.len() {
        let (a, b) = (&pairs[k], &pairs[best]);
        let better = match a.sugar.cmp(&b.sugar) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => match order.cmp(&a.lcm, &b.lcm) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => (a.i, a.j) < (b.i, b.j),
            },
        };
        if better {
            best = k;
        }
    }
    best
}

fn interreduce<D: CoeffDomain>(dom: &D, order: MonomialOrder, basis: Vec<Entry<D::C>>) -> Vec<Terms<D::C>> {
    let mut polys: Vec<Terms<D::C>> = basis.into_iter().filter(|e| e.active).map(|e| e.terms).collect();
    polys.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    // minimality is guaranteed by the update step; tail-reduce each element
    for k in 0..polys.len() {
        let f = std::mem::take(&mut polys[k]);
        let (r, _) = reduce_full(dom, order, f, 0, &Reducers::new(&polys), 1);
        polys[k] = r;
    }
    polys
}

/// Turns a Gröbner basis (terms sorted for `order`) into the reduced one:
/// drops elements whose leading monomial is divisible by another's, then
/// tail-reduces the rest.
pub fn reduce_basis<D: CoeffDomain>(dom: &D, order: MonomialOrder, polys: Vec<Terms<D::C>>) -> Vec<Terms<D::C>> {
    let mut polys: Vec<Terms<D::C>> = polys.into_iter().filter(|p| !p.is_empty()).collect();
    polys.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let mut kept: Vec<Terms<D::C>> = Vec::with_capacity(polys.len());
    for p in polys {
        // ascending order: any divisor of lm(p) was seen before p
        if !kept.iter().any(|k| k[0].0.divides(&p[0].0)) {
            kept.push(p);
        }
    }
    for k in 0..kept.len() {
        let f = std::mem::take(&mut kept[k]);
        let (r, _) = reduce_full(dom, order, f, 0, &Reducers::new(&kept), 1);
        kept[k] = r;
    }
    kept
}

/// Appends a homogenizing variable `h` as the last variable.
pub fn homogenize<C: Clone>(f: &Terms<C>) -> Terms<C> {
    let deg = f.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
    f.iter()
        .map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.push((deg - m.degree()) as u16);
            (Monomial::from_exponents(&e), c.clone())
        })
        .collect()
}

/// Sets the last variable to one. Terms of a homogeneous polynomial stay distinct.
pub fn dehomogenize<C>(f: Terms<C>) -> Terms<C> {
    f.into_iter()
        .map(|(m, c)| {
            let e = m.exponents();
            (Monomial::from_exponents(&e[..e.len() - 1]), c)
        })
        .collect()
}

/// Reduced Gröbner basis for `order` from a degrevlex basis of the same ideal.
///
/// The homogenized degrevlex basis generates the homogenization of the ideal.
/// Its basis for `order` extended by a smallest variable `h` is computed degree
/// by degree, which avoids the coefficient and degree swell that sugar selection
/// suffers under elimination orders, and setting `h = 1` gives a basis for
/// `order`. Valid for block orders and for lex, where `h` sits in the last block.
pub fn convert_via_homogenization<D: CoeffDomain>(
    dom: &D,
    order: MonomialOrder,
    nvars: usize,
    drl_basis: &[Terms<D::C>],
    stats: &mut EngineStats,
) -> Vec<Terms<D::C>> {
    let input: Vec<Terms<D::C>> = drl_basis
        .iter()
        .map(|f| {
            let mut h = homogenize(f);
            h.sort_by(|a, b| order.cmp(&b.0, &a.0));
            h
        })
        .collect();
    let hom = buchberger(dom, order, nvars + 1, input, stats);
    let deh = hom
        .into_iter()
        .map(|f| {
            let mut d = dehomogenize(f);
            d.sort_by(|a, b| order.cmp(&b.0, &a.0));
            d
        })
        .collect();
    let mut out = reduce_basis(dom, order, deh);
    for p in &mut out {
        dom.normalize(p);
    }
    out
}

/// Checks Buchberger's criterion: every S-polynomial reduces to zero.
pub fn is_groebner<D: CoeffDomain>(dom: &D, order: MonomialOrder, basis: &[Terms<D::C>]) -> bool {
    let entries: Vec<Entry<D::C>> = basis
        .iter()
        .filter(|p| !p.is_empty())
        .map(|p| Entry { terms: p.clone(), lm: p[0].0.clone(), mask: p[0].0.support(), sugar: 0, active: true })
        .collect();
    let reducers = active_reducers(&entries);
    for i in 0..entries.len() {
        for j in (i + 1)..entries.len() {
            let lcm = entries[i].lm.lcm(&entries[j].lm);
            let s = spoly(dom, order, &entries[i], &entries[j], &lcm);
            let (r, _) = reduce_full(dom, order, s, 0, &reducers, 0);
            if !r.is_empty() {
                return false;
            }
        }
    }
    true
}
