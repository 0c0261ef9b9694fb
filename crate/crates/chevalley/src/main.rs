use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chevalley::chevalley::{Iteration, Strategy};
use chevalley::cli::corpus::{all_passed, default_corpus_dir, load_corpus, run_corpus, summary_table, write_golden, CorpusOptions};
use chevalley::cli::{run, Overrides, ProblemSpec, DEFAULT_PRIMES};
use chevalley::{par, Error, Result};

#[derive(Parser)]
#[command(name = "chevalley", version, about = "Constructible images of polynomial and rational maps over Q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem file.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        flags: SolverFlags,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run the bundled examples against their golden outputs.
    Corpus {
        #[arg(long, default_value_os_t = default_corpus_dir())]
        dir: PathBuf,
        /// Only entries whose name contains this string.
        #[arg(long)]
        only: Option<String>,
        /// Include entries tagged `slow`.
        #[arg(long)]
        slow: bool,
        /// Rewrite the golden files from this run instead of comparing.
        #[arg(long)]
        bless: bool,
        #[command(flatten)]
        flags: SolverFlags,
    },
    /// Parse a problem file and print it back in text or JSON form.
    Print {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StatsFormat {
    Json,
    Text,
}

#[derive(Args)]
struct SolverFlags {
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    #[arg(long, value_enum)]
    iteration: Option<IterationArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    hyperplane_budget: Option<usize>,
    /// Restrict rational maps to the locus where all denominators are nonzero.
    #[arg(long)]
    saturate_graph: bool,
    /// Check the result over these primes; without a value the defaults are used.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    oracle: Option<Vec<u64>>,
    /// Random points per prime for the oracle.
    #[arg(long)]
    samples: Option<usize>,
    /// Print solver statistics: `json` emits one object per solver step.
    #[arg(long, value_enum)]
    stats: Option<StatsFormat>,
    /// Worker threads for within-level parallelism; 1 keeps everything sequential.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Infinity,
    Kemper,
}

#[derive(Clone, Copy, ValueEnum)]
enum IterationArg {
    Linear,
    Graph,
}

impl SolverFlags {
    fn overrides(&self) -> Overrides {
        Overrides {
            strategy: self.strategy.map(|s| match s {
                StrategyArg::Infinity => Strategy::Infinity,
                StrategyArg::Kemper => Strategy::Kemper,
            }),
            iteration: self.iteration.map(|i| match i {
                IterationArg::Linear => Iteration::Linear,
                IterationArg::Graph => Iteration::Graph,
            }),
            seed: self.seed,
            hyperplane_budget: self.hyperplane_budget,
            saturate_graph: self.saturate_graph,
            oracle: self
                .oracle
                .as_ref()
                .map(|p| if p.is_empty() { DEFAULT_PRIMES.to_vec() } else { p.clone() }),
            samples: self.samples,
        }
    }

    fn configure(&self) {
        if self.threads > 1 {
            par::configure_threads(self.threads);
            par::set_parallel(true);
        }
    }
}

fn read_spec(file: &PathBuf) -> Result<ProblemSpec> {
    ProblemSpec::parse(&fs::read_to_string(file)?)
}

fn solve(file: &PathBuf, flags: &SolverFlags, json: bool) -> Result<()> {
    flags.configure();
    let mut spec = read_spec(file)?;
    if spec.name.is_empty() {
        spec.name = file.file_stem().unwrap_or_default().to_string_lossy().into_owned();
    }
    flags.overrides().apply(&mut spec);
    let report = run(&spec)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report.to_json())?);
    } else {
        print!("{}", report.to_text());
    }
    match flags.stats {
        Some(StatsFormat::Json) => {
            for e in &report.stats.events {
                eprintln!("{}", serde_json::to_string(e)?);
            }
            eprintln!("{}", serde_json::json!({ "levels": report.stats.per_level(), "totals": report.stats }));
        }
        Some(StatsFormat::Text) => eprintln!("{}", report.stats.to_text()),
        None => {}
    }
    report.check_oracle()
}

fn corpus(dir: &Path, only: Option<String>, slow: bool, bless: bool, flags: &SolverFlags) -> Result<bool> {
    flags.configure();
    let entries = load_corpus(dir)?;
    let opts = CorpusOptions {
        overrides: flags.overrides(),
        only,
        include_slow: slow,
        oracle: flags.oracle.is_some(),
    };
    let rows = run_corpus(&entries, &opts);
    if bless {
        for row in &rows {
            if let Some(report) = &row.report {
                write_golden(dir, &row.name, report)?;
            }
        }
    }
    print!("{}", summary_table(&rows));
    if matches!(flags.stats, Some(StatsFormat::Text)) {
        for row in &rows {
            if let Some(r) = &row.report {
                println!("{}: {}", row.name, r.stats.to_text());
            }
        }
    }
    Ok(bless || all_passed(&rows))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve { file, flags, json } => solve(file, flags, *json).map(|_| true),
        Command::Corpus { dir, only, slow, bless, flags } => corpus(dir, only.clone(), *slow, *bless, flags),
        Command::Print { file, json } => read_spec(file).map(|s| {
            if *json {
                println!("{}", s.to_json());
            } else {
                print!("{}", s.to_text());
            }
            true
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &Error) -> ExitCode {
    eprintln!("error [{}]: {e}", e.code());
    ExitCode::from(e.exit_code() as u8)
}
