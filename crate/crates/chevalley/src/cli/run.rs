//! Dispatch of one problem spec to the solver, plus reporting.

use serde_json::{json, Value};

use super::build::{map_components, orbit_problems, solver_options, spec_ring, working_sets};
use super::oracle::{point_oracle, OracleReport};
use super::spec::{Mode, ProblemSpec};
use crate::chevalley::{constructible_projection, Iteration, SolverStats, Strategy};
use crate::error::{Error, Result};
use crate::geometry::ConstructibleSet;
use crate::orbits::{orbit_image, orbit_stratification};
use crate::polyring::Ring;

/// Primes used when oracle checking is requested without a list.
pub const DEFAULT_PRIMES: [u64; 2] = [10007, 31013];
/// Random base and source points per prime unless the spec says otherwise.
pub const DEFAULT_SAMPLES: usize = 64;

/// Command line settings that take precedence over a spec's `[options]`.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub strategy: Option<Strategy>,
    pub iteration: Option<Iteration>,
    pub seed: Option<u64>,
    pub hyperplane_budget: Option<usize>,
    pub saturate_graph: bool,
    pub oracle: Option<Vec<u64>>,
    pub samples: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, spec: &mut ProblemSpec) {
        let o = &mut spec.options;
        if self.strategy.is_some() {
            o.strategy = self.strategy;
        }
        if self.iteration.is_some() {
            o.iteration = self.iteration;
        }
        if self.seed.is_some() {
            o.seed = self.seed;
        }
        if self.hyperplane_budget.is_some() {
            o.hyperplane_budget = self.hyperplane_budget;
        }
        o.saturate_graph |= self.saturate_graph;
        if let Some(p) = &self.oracle {
            o.oracle = p.clone();
        }
        if self.samples.is_some() {
            o.samples = self.samples;
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub name: String,
    pub mode: Mode,
    pub base: Ring,
    pub result: ConstructibleSet,
    pub stats: SolverStats,
    pub oracle: Vec<OracleReport>,
    /// Orbit or stratification details.
    pub orbit: Option<Value>,
    pub warnings: Vec<String>,
}

impl RunReport {
    /// The deterministic one-line rendering of the result.
    pub fn result_text(&self) -> String {
        let c = self.result.canonical();
        if c.is_empty() {
            return "∅".into();
        }
        c.to_string()
    }

    pub fn oracle_ok(&self) -> bool {
        self.oracle.iter().all(OracleReport::ok)
    }

    /// Fails with an oracle mismatch when any requested check disagreed.
    pub fn check_oracle(&self) -> Result<()> {
        match self.oracle.iter().find(|r| !r.ok()) {
            None => Ok(()),
            Some(r) => Err(Error::OracleMismatch(format!("{}: {}; {}", self.name, r.to_text(), r.mismatches.join("; ")))),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "mode": self.mode,
            "base": self.base.names(),
            "text": self.result_text(),
            "result": self.result.canonical().to_json(),
            "stats": {
                "totals": self.stats,
                "levels": self.stats.per_level(),
            },
            "oracle": self.oracle,
            "orbit": self.orbit,
            "warnings": self.warnings,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.name, self.result_text());
        for r in &self.oracle {
            out.push_str(&r.to_text());
            out.push('\n');
        }
        for w in &self.warnings {
            out.push_str("warning: ");
            out.push_str(w);
            out.push('\n');
        }
        out
    }
}

/// Runs a spec end to end and, when the spec lists oracle primes, checks the
/// result against them. Oracle disagreements are recorded in the report, not
/// raised; see [`RunReport::check_oracle`].
pub fn run(spec: &ProblemSpec) -> Result<RunReport> {
    let opts = solver_options(spec)?;
    let base = spec_ring(spec)?.base_ring();
    let mut stats = SolverStats::new();
    let mut warnings = Vec::new();
    let mut orbit = None;
    let gammas = working_sets(spec)?;
    let result = match spec.mode {
        Mode::Projection | Mode::Map => {
            let mut out = ConstructibleSet::empty();
            for gamma in &gammas {
                let mut s = SolverStats::new();
                let part = constructible_projection(gamma, &opts, &mut s)?;
                s.finish();
                stats.absorb(&s);
                out.extend(part);
            }
            out
        }
        Mode::Orbit => {
            let problems = orbit_problems(spec)?;
            let res = orbit_image(&problems[0], &opts)?;
            stats.absorb(&res.stats);
            warnings.extend(res.warnings.iter().cloned());
            orbit = Some(res.to_json());
            res.orbit
        }
        Mode::Stratification => {
            let problems = orbit_problems(spec)?;
            let strat = orbit_stratification(&problems)?;
            orbit = Some(strat.to_json());
            strat.as_union()
        }
    };
    let mut report = RunReport {
        name: spec.name.clone(),
        mode: spec.mode,
        base,
        result,
        stats,
        oracle: Vec::new(),
        orbit,
        warnings,
    };
    if !spec.options.oracle.is_empty() {
        report.oracle = oracle_reports(spec, &gammas, &report.result, &spec.options.oracle)?;
    }
    Ok(report)
}

/// Oracle checks of `result` against the working sets of `spec`.
pub fn oracle_reports(
    spec: &ProblemSpec,
    gammas: &[crate::geometry::ClosedSet],
    result: &ConstructibleSet,
    primes: &[u64],
) -> Result<Vec<OracleReport>> {
    let ring = spec_ring(spec)?;
    let comps = if spec.mode == Mode::Map && spec.domain.is_empty() {
        Some(map_components(spec, &ring)?)
    } else {
        None
    };
    let samples = spec.options.samples.unwrap_or(DEFAULT_SAMPLES);
    let seed = spec.options.seed.unwrap_or(0);
    primes
        .iter()
        .map(|&p| point_oracle(gammas, comps.as_deref(), result, p, samples, seed))
        .collect()
}
