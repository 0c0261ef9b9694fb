//! The bundled example corpus and its golden outputs.
//!
//! Layout: `corpus/<name>.problem` holds a spec, `corpus/golden/<name>.json`
//! the expected result as written by [`write_golden`]. Under the spec's own
//! settings the printed result must match the golden text exactly; with
//! overridden settings (another strategy or iteration) only set equality is
//! required, checked on sampled points over the oracle primes.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::oracle::{disagreements_mod, sample_base_points};
use super::run::{run, Overrides, RunReport, DEFAULT_PRIMES, DEFAULT_SAMPLES};
use super::spec::ProblemSpec;
use crate::error::{Error, Result};
use crate::geometry::ConstructibleSet;

/// Entries tagged this way only run on request.
pub const SLOW_TAG: &str = "slow";

/// The corpus shipped with the crate.
pub fn default_corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub path: PathBuf,
    pub spec: ProblemSpec,
    pub golden: Option<Value>,
}

impl CorpusEntry {
    pub fn is_slow(&self) -> bool {
        self.spec.tags.iter().any(|t| t == SLOW_TAG)
    }
}

/// All `*.problem` files of `dir`, sorted by name, with their goldens.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusEntry>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "problem"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let stem = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let mut spec = ProblemSpec::parse(&fs::read_to_string(&path)?)
                .map_err(|e| Error::InvalidProblem(format!("{}: {e}", path.display())))?;
            if spec.name.is_empty() {
                spec.name = stem.clone();
            }
            let golden_path = dir.join("golden").join(format!("{stem}.json"));
            let golden = if golden_path.exists() {
                Some(serde_json::from_str(&fs::read_to_string(&golden_path)?)?)
            } else {
                None
            };
            Ok(CorpusEntry { name: stem, path, spec, golden })
        })
        .collect()
}

/// Writes the golden file for a finished run.
pub fn write_golden(dir: &Path, name: &str, report: &RunReport) -> Result<()> {
    let golden_dir = dir.join("golden");
    fs::create_dir_all(&golden_dir)?;
    let v = json!({
        "name": report.name,
        "text": report.result_text(),
        "result": report.result.canonical().to_json(),
    });
    fs::write(golden_dir.join(format!("{name}.json")), serde_json::to_string_pretty(&v)? + "\n")?;
    Ok(())
}

#[derive(Clone, Debug, Default)]
pub struct CorpusOptions {
    pub overrides: Overrides,
    pub only: Option<String>,
    pub include_slow: bool,
    /// Run the point oracle on every entry (over the default primes unless
    /// the overrides name others).
    pub oracle: bool,
}

impl CorpusOptions {
    fn exact(&self) -> bool {
        let o = &self.overrides;
        o.strategy.is_none() && o.iteration.is_none() && o.seed.is_none() && o.hyperplane_budget.is_none() && !o.saturate_graph
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct CorpusRow {
    pub name: String,
    pub verdict: Verdict,
    pub text: String,
    pub wall_ms: f64,
    pub lca_calls: usize,
    pub report: Option<RunReport>,
}

/// Whether two results agree on sampled points over the given primes.
pub fn set_agreement(a: &ConstructibleSet, b: &ConstructibleSet, dim: usize, primes: &[u64], samples: usize, seed: u64) -> Result<Option<String>> {
    for &p in primes {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p ^ 0x5eed);
        let (pts, _) = sample_base_points(dim, p, samples, &mut rng);
        let bad = disagreements_mod(a, b, &pts, p)?;
        if let Some(pt) = bad.first() {
            return Ok(Some(format!("{} of {} points differ mod {p}, e.g. {pt:?}", bad.len(), pts.len())));
        }
    }
    Ok(None)
}

fn check_entry(entry: &CorpusEntry, opts: &CorpusOptions) -> Result<(Verdict, RunReport)> {
    let mut spec = entry.spec.clone();
    opts.overrides.apply(&mut spec);
    if opts.oracle && spec.options.oracle.is_empty() {
        spec.options.oracle = DEFAULT_PRIMES.to_vec();
    }
    let report = run(&spec)?;
    if let Err(e) = report.check_oracle() {
        return Ok((Verdict::Fail(e.to_string()), report));
    }
    let Some(golden) = &entry.golden else {
        return Ok((Verdict::Fail("no golden file".into()), report));
    };
    let verdict = if opts.exact() {
        let want = golden["text"].as_str().unwrap_or_default();
        if want == report.result_text() {
            Verdict::Pass
        } else {
            Verdict::Fail(format!("expected `{want}`, got `{}`", report.result_text()))
        }
    } else {
        let want = ConstructibleSet::from_json(&report.base, &golden["result"])?;
        let primes = if spec.options.oracle.is_empty() { DEFAULT_PRIMES.to_vec() } else { spec.options.oracle.clone() };
        let samples = spec.options.samples.unwrap_or(DEFAULT_SAMPLES);
        match set_agreement(&want, &report.result, report.base.nvars(), &primes, samples, 1)? {
            None => Verdict::Pass,
            Some(msg) => Verdict::Fail(msg),
        }
    };
    Ok((verdict, report))
}

/// Runs the selected entries in order.
pub fn run_corpus(entries: &[CorpusEntry], opts: &CorpusOptions) -> Vec<CorpusRow> {
    entries
        .iter()
        .filter(|e| opts.only.as_ref().is_none_or(|o| e.name.contains(o.as_str())))
        .map(|e| {
            if e.is_slow() && !opts.include_slow && opts.only.is_none() {
                return CorpusRow {
                    name: e.name.clone(),
                    verdict: Verdict::Skipped("slow".into()),
                    text: String::new(),
                    wall_ms: 0.0,
                    lca_calls: 0,
                    report: None,
                };
            }
            let start = Instant::now();
            let (verdict, report) = match check_entry(e, opts) {
                Ok((v, r)) => (v, Some(r)),
                Err(err) => (Verdict::Fail(format!("error [{}]: {err}", err.code())), None),
            };
            CorpusRow {
                name: e.name.clone(),
                verdict,
                text: report.as_ref().map(RunReport::result_text).unwrap_or_default(),
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
                lca_calls: report.as_ref().map_or(0, |r| r.stats.lca_calls),
                report,
            }
        })
        .collect()
}

/// A fixed-width table with one line per entry and a closing tally.
pub fn summary_table(rows: &[CorpusRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let mut out = format!("{:<width$}  {:<7}  {:>9}  {:>4}  result\n", "name", "verdict", "ms", "lca");
    let (mut pass, mut fail, mut skip) = (0, 0, 0);
    for r in rows {
        let (tag, detail) = match &r.verdict {
            Verdict::Pass => {
                pass += 1;
                ("ok", r.text.clone())
            }
            Verdict::Fail(m) => {
                fail += 1;
                ("FAIL", m.clone())
            }
            Verdict::Skipped(m) => {
                skip += 1;
                ("skipped", m.clone())
            }
        };
        out.push_str(&format!("{:<width$}  {:<7}  {:>9.1}  {:>4}  {}\n", r.name, tag, r.wall_ms, r.lca_calls, detail));
    }
    out.push_str(&format!("{pass} passed, {fail} failed, {skip} skipped\n"));
    out
}

pub fn all_passed(rows: &[CorpusRow]) -> bool {
    rows.iter().all(|r| !matches!(r.verdict, Verdict::Fail(_)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp_corpus(files: &[(&str, &str)]) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("corpus-test-{}-{}", std::process::id(), files[0].0));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        for (name, body) in files {
            fs::write(dir.join(format!("{name}.problem")), body).unwrap();
        }
        dir
    }

    #[test]
    fn golden_round_trip_and_mismatch() {
        let dir = tmp_corpus(&[
            ("hyp", "[problem]\nbase = b\nfiber = x\n[ideal]\nb*x - 1"),
            ("line", "[problem]\nbase = b\nfiber = x\ntags = slow\n[ideal]\nb - x"),
        ]);
        let entries = load_corpus(&dir).unwrap();
        assert_eq!(entries.len(), 2);
        assert!(entries[1].is_slow());
        let report = run(&entries[0].spec).unwrap();
        write_golden(&dir, "hyp", &report).unwrap();
        let entries = load_corpus(&dir).unwrap();
        let rows = run_corpus(&entries, &CorpusOptions { oracle: true, ..Default::default() });
        assert_eq!(rows[0].verdict, Verdict::Pass);
        assert_eq!(rows[1].verdict, Verdict::Skipped("slow".into()));
        assert!(all_passed(&rows));
        let kemper = CorpusOptions {
            overrides: Overrides { strategy: Some(crate::chevalley::Strategy::Kemper), ..Default::default() },
            only: Some("hyp".into()),
            ..Default::default()
        };
        assert_eq!(run_corpus(&entries, &kemper)[0].verdict, Verdict::Pass);

        fs::write(dir.join("golden/hyp.json"), r#"{"text": "Spec B", "result": {"components": [{"closure": [], "subtrahends": []}]}}"#).unwrap();
        let entries = load_corpus(&dir).unwrap();
        let rows = run_corpus(&entries[..1], &CorpusOptions::default());
        assert!(matches!(rows[0].verdict, Verdict::Fail(_)));
        assert!(summary_table(&rows).contains("0 passed, 1 failed"));
        let rows = run_corpus(&entries[..1], &kemper);
        assert!(matches!(&rows[0].verdict, Verdict::Fail(m) if m.contains("differ")));
        let _ = fs::remove_dir_all(&dir);
    }
}
