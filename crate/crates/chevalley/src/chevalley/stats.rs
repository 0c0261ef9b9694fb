use std::time::Instant;

use serde::Serialize;

use super::LcaResult;
use crate::groebner::gb_call_count;

/// One solver step, emitted as a structured event.
#[derive(Clone, Debug, Serialize)]
pub struct StepEvent {
    pub step: usize,
    pub kind: &'static str,
    pub level: usize,
    pub closure: String,
    pub hull: String,
    pub extras: usize,
    pub hyperplane_attempts: usize,
    pub gb_calls: u64,
    pub elapsed_ms: f64,
    pub positive_nodes: usize,
    pub negative_nodes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSummary {
    pub level: usize,
    pub steps: usize,
    pub gb_calls: u64,
}

/// Counters accumulated over one run.
#[derive(Clone, Debug, Serialize)]
pub struct SolverStats {
    pub lca_calls: usize,
    pub hyperplane_attempts: usize,
    pub base_splits: usize,
    pub total_splits: usize,
    /// Hull computations where the configured strategy was replaced by the
    /// hull at infinity.
    pub strategy_fallbacks: usize,
    pub extra_components: usize,
    pub max_level: usize,
    pub positive_nodes: usize,
    pub negative_nodes: usize,
    pub squash_deletions: usize,
    pub gb_calls: u64,
    pub wall_ms: f64,
    pub events: Vec<StepEvent>,
    #[serde(skip)]
    started: Instant,
    #[serde(skip)]
    gb_at_start: u64,
}

impl Default for SolverStats {
    fn default() -> Self {
        SolverStats {
            lca_calls: 0,
            hyperplane_attempts: 0,
            base_splits: 0,
            total_splits: 0,
            strategy_fallbacks: 0,
            extra_components: 0,
            max_level: 0,
            positive_nodes: 0,
            negative_nodes: 0,
            squash_deletions: 0,
            gb_calls: 0,
            wall_ms: 0.0,
            events: Vec::new(),
            started: Instant::now(),
            gb_at_start: gb_call_count(),
        }
    }
}

impl SolverStats {
    pub fn new() -> Self {
        SolverStats::default()
    }

    pub(crate) fn elapsed_ms(&self) -> f64 {
        self.started.elapsed().as_secs_f64() * 1e3
    }

    pub(crate) fn gb_calls_so_far(&self) -> u64 {
        gb_call_count().saturating_sub(self.gb_at_start)
    }

    /// Freezes the totals; the GB count is process-wide and includes work done
    /// by concurrent runs.
    pub fn finish(&mut self) {
        self.wall_ms = self.elapsed_ms();
        self.gb_calls = self.gb_calls_so_far();
    }

    /// Counts one hull computation.
    pub fn record_lca(&mut self, res: &LcaResult) {
        self.lca_calls += 1;
        self.hyperplane_attempts += res.hyperplane_attempts;
        self.base_splits += res.base_splits;
        self.total_splits += res.total_splits;
        self.strategy_fallbacks += usize::from(res.strategy_fallback);
        self.extra_components += res.extra_components.len();
    }

    /// Adds the counters of a run over another working set. Event step
    /// numbers are shifted to stay unique.
    pub fn absorb(&mut self, other: &SolverStats) {
        let offset = self.lca_calls;
        self.lca_calls += other.lca_calls;
        self.hyperplane_attempts += other.hyperplane_attempts;
        self.base_splits += other.base_splits;
        self.total_splits += other.total_splits;
        self.strategy_fallbacks += other.strategy_fallbacks;
        self.extra_components += other.extra_components;
        self.max_level = self.max_level.max(other.max_level);
        self.positive_nodes += other.positive_nodes;
        self.negative_nodes += other.negative_nodes;
        self.squash_deletions += other.squash_deletions;
        self.gb_calls += other.gb_calls;
        self.wall_ms += other.wall_ms;
        self.events.extend(other.events.iter().cloned().map(|mut e| {
            e.step += offset;
            e
        }));
    }

    /// Per level: the number of hull computations and the GB calls spent
    /// between the end of the previous level and the end of this one.
    pub fn per_level(&self) -> Vec<LevelSummary> {
        let mut out: Vec<LevelSummary> = Vec::new();
        let mut last_gb = 0;
        let mut levels: Vec<usize> = self.events.iter().map(|e| e.level).collect();
        levels.sort_unstable();
        levels.dedup();
        for level in levels {
            let evs: Vec<&StepEvent> = self.events.iter().filter(|e| e.level == level).collect();
            let end = evs.iter().map(|e| e.gb_calls).max().unwrap_or(last_gb);
            out.push(LevelSummary { level, steps: evs.len(), gb_calls: end.saturating_sub(last_gb) });
            last_gb = end.max(last_gb);
        }
        out
    }

    pub fn to_text(&self) -> String {
        format!(
            "lca_calls={} hyperplanes={} base_splits={} total_splits={} fallbacks={} extras={} levels={} positive={} negative={} squashed={} gb_calls={} wall_ms={:.1}",
            self.lca_calls,
            self.hyperplane_attempts,
            self.base_splits,
            self.total_splits,
            self.strategy_fallbacks,
            self.extra_components,
            self.max_level,
            self.positive_nodes,
            self.negative_nodes,
            self.squash_deletions,
            self.gb_calls,
            self.wall_ms
        )
    }
}
