//! Problem files, cover construction, the run driver, the finite-field point
//! oracle and the corpus runner behind the `chevalley` binary.

pub mod build;
pub mod corpus;
pub mod oracle;
pub mod run;
pub mod spec;

pub use build::{build_graph_ideal, rabinowitsch_cover, working_sets, LocallyClosed};
pub use corpus::{load_corpus, run_corpus, summary_table, CorpusEntry, CorpusOptions, CorpusRow, Verdict};
pub use oracle::{fiber_nonempty_mod, point_oracle, OracleReport};
pub use run::{run, Overrides, RunReport, DEFAULT_PRIMES};
pub use spec::{Mode, ProblemSpec};
