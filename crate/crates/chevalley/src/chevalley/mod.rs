//! The solver core: locally closed approximations of a projection, fiber
//! reduction without decompositions, and the linear and graph iterations.

mod fibers;
mod graph;
mod hyperplane;
mod lca;
mod linear;
mod stats;

use serde::{Deserialize, Serialize};

pub use fibers::{projection_data, zero_dimensional_fibers, FiberReduction, ProjectionData};
pub use graph::{constructible_projection_graph, ImageGraph, NegativeNode, PositiveNode, PreNode};
pub use hyperplane::HyperplaneIterator;
pub use lca::{hull_at_infinity, kemper_leading_coefficient, lca, lca_infinity, lca_kemper, LcaResult};
pub(crate) use lca::check_strict;
pub use linear::constructible_projection_linear;
pub use stats::{LevelSummary, SolverStats, StepEvent};

use crate::error::Result;
use crate::geometry::{ClosedSet, ConstructibleSet};
use crate::polyring::Polynomial;

/// How the relative boundary hull is obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Points at infinity of a fiber-reduced closed set.
    #[default]
    Infinity,
    /// Products of leading base coefficients of a block Gröbner basis.
    Kemper,
}

/// Which outer loop assembles the constructible image.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Iteration {
    Linear,
    #[default]
    Graph,
}

#[derive(Clone, Debug, Default)]
pub struct SolverOptions {
    pub strategy: Strategy,
    pub iteration: Iteration,
    pub seed: u64,
    /// Candidates per escalation stage of the hyperplane search (default `8n`).
    pub hyperplane_budget: Option<usize>,
    /// Hyperplanes tried before the default family, in any ring sharing the
    /// fiber variable names.
    pub explicit_hyperplanes: Vec<Polynomial>,
}

/// Image of `gamma` under the projection to the base, with the configured
/// iteration and strategy.
pub fn constructible_projection(
    gamma: &ClosedSet,
    opts: &SolverOptions,
    stats: &mut SolverStats,
) -> Result<ConstructibleSet> {
    match opts.iteration {
        Iteration::Linear => constructible_projection_linear(gamma, opts, stats),
        Iteration::Graph => constructible_projection_graph(gamma, opts, stats),
    }
}
