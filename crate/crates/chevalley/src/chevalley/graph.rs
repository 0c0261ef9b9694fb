use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::geometry::{ClosedSet, ConstructibleSet, MultipleDifference};
use crate::par;
use crate::polyring::Ring;

use super::{lca, LcaResult, SolverOptions, SolverStats, StepEvent};

/// A closure of a partial image. Children are the hulls cut out of it.
#[derive(Clone, Debug)]
pub struct PositiveNode {
    pub set: ClosedSet,
    pub parents: BTreeSet<usize>,
    pub children: BTreeSet<usize>,
    /// Ids of every `Γ` whose projection produced this node.
    pub gammas: Vec<usize>,
    alive: bool,
}

/// A hull, or the root `Spec B`. Children are closures of images over it.
#[derive(Clone, Debug)]
pub struct NegativeNode {
    pub set: ClosedSet,
    pub parents: BTreeSet<usize>,
    pub children: BTreeSet<usize>,
    alive: bool,
}

/// Pending work: project `Γ ∩ π⁻¹(D)` and attach the result below `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreNode {
    pub node: usize,
    pub level: usize,
    pub gamma: usize,
}

/// Bipartite bookkeeping graph of closures and hulls.
///
/// Nodes are kept in arenas and never reused, so ids stay valid after removal.
/// Underlying sets are compared up to radical. A positive node reached from
/// several `Γ` remembers all of them, and every hull below it is processed
/// against each one, so that merging equal closures never loses image points.
#[derive(Clone, Debug)]
pub struct ImageGraph {
    base: Ring,
    positives: Vec<PositiveNode>,
    negatives: Vec<NegativeNode>,
    fifo: VecDeque<PreNode>,
    gammas: Vec<ClosedSet>,
    seen: HashSet<(usize, usize)>,
    pub squash_deletions: usize,
}

pub const ROOT: usize = 0;

impl ImageGraph {
    /// A graph whose only negative node is `Spec B`, with the pre-node
    /// `(Spec B, 0, Γ)`.
    pub fn new(gamma: &ClosedSet) -> Self {
        let base = gamma.ring().base_ring();
        let mut g = ImageGraph {
            base: base.clone(),
            positives: Vec::new(),
            negatives: vec![NegativeNode {
                set: ClosedSet::whole(&base),
                parents: BTreeSet::new(),
                children: BTreeSet::new(),
                alive: true,
            }],
            fifo: VecDeque::new(),
            gammas: Vec::new(),
            seen: HashSet::new(),
            squash_deletions: 0,
        };
        let gid = g.intern(gamma.clone());
        g.push_back(ROOT, 0, gid);
        g
    }

    pub fn is_done(&self) -> bool {
        self.fifo.is_empty()
    }

    /// Removes and returns the oldest pre-node.
    pub fn pop(&mut self) -> Result<PreNode> {
        self.fifo.pop_front().ok_or(Error::EmptyFifo)
    }

    pub fn minimal_level(&self) -> Result<usize> {
        self.fifo.iter().map(|p| p.level).min().ok_or(Error::EmptyFifo)
    }

    pub fn pending(&self) -> impl Iterator<Item = &PreNode> {
        self.fifo.iter()
    }

    pub fn gamma(&self, id: usize) -> &ClosedSet {
        &self.gammas[id]
    }

    pub fn positive(&self, id: usize) -> Option<&PositiveNode> {
        self.positives.get(id).filter(|n| n.alive)
    }

    pub fn negative(&self, id: usize) -> Option<&NegativeNode> {
        self.negatives.get(id).filter(|n| n.alive)
    }

    pub fn positive_ids(&self) -> Vec<usize> {
        (0..self.positives.len()).filter(|&i| self.positives[i].alive).collect()
    }

    pub fn negative_ids(&self) -> Vec<usize> {
        (0..self.negatives.len()).filter(|&i| self.negatives[i].alive).collect()
    }

    fn intern(&mut self, gamma: ClosedSet) -> usize {
        if let Some(i) = self.gammas.iter().position(|g| g.generators() == gamma.generators()) {
            return i;
        }
        self.gammas.push(gamma);
        self.gammas.len() - 1
    }

    fn push_back(&mut self, node: usize, level: usize, gamma: usize) {
        if self.seen.insert((node, gamma)) {
            self.fifo.push_back(PreNode { node, level, gamma });
        }
    }

    /// Queues a split-off component `(D, ℓ, Γ_i)` ahead of everything else.
    pub fn push_front(&mut self, node: usize, level: usize, gamma: ClosedSet) {
        let gid = self.intern(gamma);
        if self.seen.insert((node, gid)) {
            self.fifo.push_front(PreNode { node, level, gamma: gid });
        }
    }

    fn check_negative(&self, d: usize) -> Result<()> {
        if self.negative(d).is_none() {
            return Err(Error::NodeNotInGraph(d));
        }
        Ok(())
    }

    /// Attaches the closure `a` below the negative node `d` and the hulls below
    /// it, reusing equal nodes, and queues the follow-up pre-nodes.
    pub fn attach(&mut self, d: usize, level: usize, a: ClosedSet, hulls: Vec<ClosedSet>, gamma: ClosedSet) -> Result<()> {
        self.check_negative(d)?;
        let gid = self.intern(gamma);
        let mut existing = None;
        for id in self.positive_ids() {
            if self.positives[id].set.set_eq(&a)? {
                existing = Some(id);
                break;
            }
        }
        let aid = match existing {
            Some(id) => id,
            None => {
                self.positives.push(PositiveNode {
                    set: a,
                    parents: BTreeSet::new(),
                    children: BTreeSet::new(),
                    gammas: Vec::new(),
                    alive: true,
                });
                self.positives.len() - 1
            }
        };
        self.positives[aid].parents.insert(d);
        self.negatives[d].children.insert(aid);
        if !self.positives[aid].gammas.contains(&gid) {
            self.positives[aid].gammas.push(gid);
            let children: Vec<usize> = self.positives[aid].children.iter().copied().collect();
            for c in children {
                self.push_back(c, level + 1, gid);
            }
        }
        for h in hulls {
            if h.is_empty() {
                continue;
            }
            let mut found = None;
            for id in self.negative_ids() {
                if self.negatives[id].set.set_eq(&h)? {
                    found = Some(id);
                    break;
                }
            }
            let di = match found {
                Some(id) => id,
                None => {
                    self.negatives.push(NegativeNode {
                        set: h,
                        parents: BTreeSet::new(),
                        children: BTreeSet::new(),
                        alive: true,
                    });
                    self.negatives.len() - 1
                }
            };
            self.negatives[di].parents.insert(aid);
            self.positives[aid].children.insert(di);
            let gammas = self.positives[aid].gammas.clone();
            for g in gammas {
                self.push_back(di, level + 1, g);
            }
        }
        Ok(())
    }

    fn has_pending(&self, d: usize) -> bool {
        self.fifo.iter().any(|p| p.node == d)
    }

    /// Removes redundant structure until nothing changes; returns the number of
    /// removed nodes.
    pub fn squash(&mut self) -> Result<usize> {
        let before = self.squash_deletions;
        loop {
            let removed = self.squash_once()?;
            if removed == 0 {
                break;
            }
            self.squash_deletions += removed;
        }
        Ok(self.squash_deletions - before)
    }

    fn squash_once(&mut self) -> Result<usize> {
        let mut removed = 0;
        // first loop: a closure equal to its only parent hull, which has no other
        // child, adds nothing; splice it out
        for a in self.positive_ids() {
            let parents = &self.positives[a].parents;
            if parents.len() != 1 {
                continue;
            }
            let d = *parents.iter().next().expect("one parent");
            if d == ROOT || self.negatives[d].children.len() != 1 || self.has_pending(d) {
                continue;
            }
            if !self.positives[a].set.set_eq(&self.negatives[d].set)? {
                continue;
            }
            let grandparents: Vec<usize> = self.negatives[d].parents.iter().copied().collect();
            let grandchildren: Vec<usize> = self.positives[a].children.iter().copied().collect();
            for &gp in &grandparents {
                self.positives[gp].children.remove(&d);
                self.positives[gp].children.extend(grandchildren.iter().copied());
            }
            for &gc in &grandchildren {
                self.negatives[gc].parents.remove(&a);
                self.negatives[gc].parents.extend(grandparents.iter().copied());
            }
            self.positives[a].alive = false;
            self.negatives[d].alive = false;
            removed += 2;
        }
        // second loop: a hull inside a sibling hull cuts out nothing new
        for a in self.positive_ids() {
            let children: Vec<usize> = self.positives[a].children.iter().copied().collect();
            for &d in &children {
                if !self.positives[a].children.contains(&d) {
                    continue;
                }
                let mut dominator = None;
                for &other in &children {
                    if other != d
                        && self.positives[a].children.contains(&other)
                        && self.negatives[other].set.contains(&self.negatives[d].set)?
                    {
                        dominator = Some(other);
                        break;
                    }
                }
                let Some(dom) = dominator else { continue };
                self.positives[a].children.remove(&d);
                self.negatives[d].parents.remove(&a);
                if self.negatives[d].parents.is_empty() {
                    self.delete_negative(d, dom);
                    removed += 1;
                }
            }
        }
        Ok(removed)
    }

    /// Deletes an orphaned negative node; its pending work moves to `dom`,
    /// which contains it.
    fn delete_negative(&mut self, d: usize, dom: usize) {
        self.negatives[d].alive = false;
        for c in std::mem::take(&mut self.negatives[d].children) {
            self.positives[c].parents.remove(&d);
        }
        let fifo = std::mem::take(&mut self.fifo);
        for p in fifo {
            if p.node == d {
                if self.seen.insert((dom, p.gamma)) {
                    self.fifo.push_back(PreNode { node: dom, ..p });
                }
            } else {
                self.fifo.push_back(p);
            }
        }
    }

    /// One multiple difference per positive node, minus its children.
    pub fn as_union(&self) -> Result<ConstructibleSet> {
        if !self.is_done() {
            return Err(Error::PendingPreNodes(self.fifo.len()));
        }
        let mut out = ConstructibleSet::empty();
        for a in self.positive_ids() {
            let node = &self.positives[a];
            let subs = node.children.iter().map(|&d| self.negatives[d].set.clone()).collect();
            if let Some(md) = MultipleDifference::new(node.set.clone(), subs)? {
                out.push(md);
            }
        }
        Ok(out)
    }

    pub fn base_ring(&self) -> &Ring {
        &self.base
    }
}

/// The graph iteration. Pre-nodes of one level are projected as a batch (in
/// parallel when enabled) and attached in FIFO order, so the result does not
/// depend on the thread count.
pub fn constructible_projection_graph(
    gamma: &ClosedSet,
    opts: &SolverOptions,
    stats: &mut SolverStats,
) -> Result<ConstructibleSet> {
    if gamma.is_empty() {
        stats.finish();
        return Ok(ConstructibleSet::empty());
    }
    let mut c = ImageGraph::new(gamma);
    while !c.is_done() {
        let level = c.minimal_level()?;
        let mut batch: Vec<(PreNode, ClosedSet)> = Vec::new();
        while c.fifo.front().is_some_and(|p| p.level == level) {
            let p = c.pop()?;
            let Some(d) = c.negative(p.node) else { continue };
            let restricted = c.gamma(p.gamma).preimage_intersect(&d.set)?;
            batch.push((p, restricted));
        }
        let results: Vec<Result<Option<LcaResult>>> = par::map(&batch, |(_, g)| {
            if g.is_empty() {
                Ok(None)
            } else {
                lca(g, opts).map(Some)
            }
        });
        let mut extras: Vec<(usize, ClosedSet)> = Vec::new();
        for ((p, restricted), res) in batch.into_iter().zip(results) {
            let Some(res) = res? else { continue };
            stats.record_lca(&res);
            stats.max_level = stats.max_level.max(level);
            let closure = res.image_closure.to_string();
            let hull = res.boundary_hull.to_string();
            let n_extra = res.extra_components.len();
            extras.extend(res.extra_components.into_iter().map(|e| (p.node, e)));
            if !res.image_closure.is_empty() {
                c.attach(p.node, level, res.image_closure, vec![res.boundary_hull], restricted)?;
            }
            stats.events.push(StepEvent {
                step: stats.lca_calls,
                kind: "graph",
                level,
                closure,
                hull,
                extras: n_extra,
                hyperplane_attempts: res.hyperplane_attempts,
                gb_calls: stats.gb_calls_so_far(),
                elapsed_ms: stats.elapsed_ms(),
                positive_nodes: c.positive_ids().len(),
                negative_nodes: c.negative_ids().len(),
            });
        }
        for (node, e) in extras.into_iter().rev() {
            c.push_front(node, level, e);
        }
        if c.is_done() || c.minimal_level()? > level {
            c.squash()?;
        }
    }
    stats.squash_deletions += c.squash_deletions;
    stats.positive_nodes = c.positive_ids().len();
    stats.negative_nodes = c.negative_ids().len();
    let out = c.as_union()?;
    stats.finish();
    Ok(out)
}
