//! Orbit stratifications from the corpus must partition the orbit closure:
//! every point of the closure lies in exactly one stratum, everything else
//! in none. Checked exhaustively over a small prime field.

use std::fs;

use chevalley::cli::corpus::default_corpus_dir;
use chevalley::cli::{run, ProblemSpec};

fn each_point(n: usize, p: u64, mut f: impl FnMut(&[u64])) {
    let mut pt = vec![0u64; n];
    loop {
        f(&pt);
        let Some(i) = (0..n).find(|&i| pt[i] + 1 < p) else { return };
        pt[i] += 1;
        pt[..i].iter_mut().for_each(|x| *x = 0);
    }
}

fn partitions(name: &str, p: u64, in_closure: impl Fn(&[u64]) -> bool) {
    let src = fs::read_to_string(default_corpus_dir().join(format!("{name}.problem"))).unwrap();
    let report = run(&ProblemSpec::parse(&src).unwrap()).unwrap();
    let n = report.base.nvars();
    let mut covered = 0;
    each_point(n, p, |b| {
        let k = report.result.multiplicity_mod(b, p).unwrap();
        let want = usize::from(in_closure(b));
        assert_eq!(k, want, "{name}: point {b:?} lies in {k} strata");
        covered += k;
    });
    assert!(covered > 1);
}

#[test]
fn torus_orbits_partition_the_toric_threefold() {
    let p = 5;
    partitions("torus_strata", p, |b| (b[0] * b[1] + p * p - b[2] * b[3]) % p == 0);
}

#[test]
fn nilpotent_cone_is_two_orbits() {
    let p = 7;
    // zero trace and zero determinant
    partitions("nilpotent_cone", p, |b| (b[0] + b[3]) % p == 0 && (b[0] * b[3] + p * p - b[1] * b[2]) % p == 0);
}
