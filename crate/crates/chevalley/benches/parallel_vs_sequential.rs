//! Corpus problems solved with the data-parallel helpers switched off and on.
//!
//! On a single-core machine the parallel numbers only measure rayon overhead.

use std::fs;
use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use chevalley::cli::corpus::default_corpus_dir;
use chevalley::cli::{run, ProblemSpec};
use chevalley::par;

const ENTRIES: [&str; 5] = ["jordan_graph", "rabinowitsch_general", "rational_curve_6", "split_total", "torus_strata"];

fn load(name: &str) -> ProblemSpec {
    let src = fs::read_to_string(default_corpus_dir().join(format!("{name}.problem"))).unwrap();
    ProblemSpec::parse(&src).unwrap()
}

fn corpus(c: &mut Criterion) {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    par::configure_threads(threads);
    let mut group = c.benchmark_group("corpus");
    group.sample_size(10).measurement_time(Duration::from_secs(5));
    for name in ENTRIES {
        let spec = load(name);
        for (label, parallel) in [("sequential", false), ("parallel", true)] {
            group.bench_with_input(BenchmarkId::new(label, name), &spec, |b, spec| {
                par::set_parallel(parallel);
                b.iter(|| black_box(run(spec).unwrap()));
            });
        }
    }
    par::set_parallel(false);
    group.finish();
}

criterion_group!(benches, corpus);
criterion_main!(benches);
