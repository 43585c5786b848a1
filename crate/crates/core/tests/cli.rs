use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use noisy_combopt::harness::{read_results, RowStatus};
use noisy_combopt::problems::read_instance;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noisy-combopt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = cli(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_writes_a_readable_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.txt");
    ok(&[
        "generate",
        "--problem",
        "knapsack-v1",
        "--n",
        "30",
        "--seed",
        "5",
        "--out",
        path(&out),
    ]);
    let file = read_instance(&out).unwrap();
    assert_eq!(
        (file.instance.kind(), file.instance.n(), file.seed),
        ("knapsack", 30, 5)
    );
    let again = dir.path().join("k2.txt");
    ok(&[
        "generate",
        "--problem",
        "knapsack-v1",
        "--n",
        "30",
        "--seed",
        "5",
        "--out",
        path(&again),
    ]);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn run_stats_and_plot_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("exp.txt");
    fs::write(
        &spec,
        "name = tiny\nproblem = onemax\nsizes = 30\nsigmas = 0, 2\nalgorithms = umda, one-plus-one-ea\nreplications = 6\nbudget = fixed:3000\nseed = 3\n",
    )
    .unwrap();
    ok(&["run", "--spec", path(&spec)]);
    let results = dir.path().join("tiny.csv");
    let rows = read_results(&results).unwrap();
    assert_eq!(
        rows.iter().filter(|r| r.status == RowStatus::Final).count(),
        24
    );

    let stats = ok(&[
        "stats",
        "--results",
        path(&results),
        "--a",
        "umda",
        "--b",
        "one-plus-one-ea",
        "--metric",
        "best_true_fitness",
    ]);
    let lines: Vec<&str> = stats.lines().collect();
    assert!(lines[0].starts_with("problem,n,sigma_level"));
    assert_eq!(lines.len(), 3);

    let svg = dir.path().join("fig1.svg");
    ok(&[
        "plot",
        "--results",
        path(&results),
        "--figure",
        "fig1",
        "--out",
        path(&svg),
    ]);
    assert!(fs::read_to_string(&svg).unwrap().contains("<svg"));
    let csv = dir.path().join("fig1.csv");
    ok(&[
        "plot",
        "--results",
        path(&results),
        "--figure",
        "fig1",
        "--out",
        path(&csv),
    ]);
    assert!(fs::read_to_string(&csv)
        .unwrap()
        .starts_with("series,x,mean,stderr,count"));
}

#[test]
fn suite_writes_every_artifact_reproducibly() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        ok(&[
            "suite",
            "--name",
            "fig8mo",
            "--seed",
            "2",
            "--replications",
            "1",
            "--out-dir",
            path(out),
        ]);
    }
    for file in ["spec.txt", "results.csv", "fig8mo.csv", "fig8mo.svg"] {
        assert!(a.join(file).exists(), "{file} missing");
    }
    assert_eq!(
        fs::read(a.join("results.csv")).unwrap(),
        fs::read(b.join("results.csv")).unwrap()
    );
    let rows = read_results(&a.join("results.csv")).unwrap();
    assert_eq!(rows.iter().filter(|r| r.status.is_outcome()).count(), 8 * 9);
}

#[test]
fn calibrate_prints_a_budget() {
    let out = ok(&[
        "calibrate",
        "--problem",
        "onemax",
        "--n",
        "30",
        "--sigma",
        "1",
        "--reps",
        "30",
    ]);
    let budget: u64 = out.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(budget > 0);
}

#[test]
fn errors_exit_nonzero_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec![
            "suite".into(),
            "--name".into(),
            "fig99".into(),
            "--out-dir".into(),
            path(dir.path()).into(),
        ],
        vec![
            "calibrate".into(),
            "--problem".into(),
            "onemax".into(),
            "--sigma".into(),
            "1".into(),
            "--reps".into(),
            "5".into(),
        ],
        vec![
            "run".into(),
            "--spec".into(),
            path(&dir.path().join("missing.txt")).into(),
        ],
        vec![
            "generate".into(),
            "--problem".into(),
            "onemax".into(),
            "--n".into(),
            "5".into(),
            "--out".into(),
            path(&dir.path().join("x")).into(),
        ],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = cli(&args);
        assert!(!out.status.success(), "{args:?} succeeded");
        assert!(
            String::from_utf8_lossy(&out.stderr).contains("error"),
            "{args:?}"
        );
    }
    let spec = dir.path().join("bad.txt");
    fs::write(&spec, "name = bad\nproblem = onemax\nreplications = 0\n").unwrap();
    let out = cli(&["run", "--spec", path(&spec)]);
    assert!(!out.status.success());
}
