use std::collections::VecDeque;

use crate::error::Result;
use crate::geometry::{ClosedSet, ConstructibleSet, MultipleDifference};

use super::{lca, SolverOptions, SolverStats, StepEvent};

/// The plain outer loop: project, record `A \ D`, continue on `Γ ∩ π⁻¹(D)`.
///
/// Components split off by the fiber reduction go to a worklist and are
/// projected the same way. Every step strictly shrinks the set being worked on
/// because the hull never contains the closure of the image.
pub fn constructible_projection_linear(
    gamma: &ClosedSet,
    opts: &SolverOptions,
    stats: &mut SolverStats,
) -> Result<ConstructibleSet> {
    let mut out = ConstructibleSet::empty();
    let mut work: VecDeque<ClosedSet> = VecDeque::from([gamma.clone()]);
    while let Some(mut cur) = work.pop_front() {
        let mut level = 0;
        while !cur.is_empty() {
            let res = lca(&cur, opts)?;
            stats.record_lca(&res);
            stats.max_level = stats.max_level.max(level);
            stats.events.push(StepEvent {
                step: stats.lca_calls,
                kind: "linear",
                level,
                closure: res.image_closure.to_string(),
                hull: res.boundary_hull.to_string(),
                extras: res.extra_components.len(),
                hyperplane_attempts: res.hyperplane_attempts,
                gb_calls: stats.gb_calls_so_far(),
                elapsed_ms: stats.elapsed_ms(),
                positive_nodes: 0,
                negative_nodes: 0,
            });
            work.extend(res.extra_components);
            if res.image_closure.is_empty() {
                break;
            }
            let done = res.boundary_hull.is_empty();
            if let Some(md) = MultipleDifference::new(res.image_closure, vec![res.boundary_hull.clone()])? {
                out.push(md);
            }
            if done {
                break;
            }
            cur = cur.preimage_intersect(&res.boundary_hull)?;
            level += 1;
        }
    }
    stats.finish();
    Ok(out)
}
