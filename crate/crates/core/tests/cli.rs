use std::path::Path;
use std::process::{Command, Output};

use restricted_percolation::harness::csv::HEADER;
use restricted_percolation::harness::read_csv;

fn percolate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_percolate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_a_readable_series() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hr.csv");
    let o = percolate(&[
        "run",
        "--process",
        "half-restricted",
        "--beta",
        "0.5",
        "--n",
        "2000",
        "--steps",
        "4000",
        "--seed",
        "3",
        "--record-every",
        "100",
        "--track-k",
        "2,3",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).contains("T_2 = "));

    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# n=2000\n# invocation: "));
    assert!(text.contains(HEADER));
    let series = read_csv(&out).unwrap();
    assert_eq!(series.n, 2000);
    assert_eq!(series.points.first().unwrap().step, 0);
    assert_eq!(series.points.last().unwrap().step, 4000);
    assert!(series
        .points
        .windows(2)
        .all(|w| w[0].step < w[1].step && w[0].alpha <= w[1].alpha));
}

#[test]
fn identical_invocations_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for p in &paths {
        let o = percolate(&[
            "run",
            "--process",
            "min-product",
            "--n",
            "5000",
            "--seed",
            "9",
            "--out",
            s(p),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let strip = |p: &Path| {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# invocation"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&paths[0]), strip(&paths[1]));
}

#[test]
fn validation_errors_exit_one_without_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let cases: [&[&str]; 6] = [
        &[
            "run",
            "--process",
            "half-restricted",
            "--n",
            "100",
            "--out",
            s(&out),
        ],
        &[
            "run",
            "--process",
            "half-restricted",
            "--beta",
            "1.5",
            "--n",
            "100",
            "--out",
            s(&out),
        ],
        &[
            "run",
            "--process",
            "er",
            "--beta",
            "0.5",
            "--n",
            "100",
            "--out",
            s(&out),
        ],
        &["run", "--process", "er", "--n", "0", "--out", s(&out)],
        &[
            "run",
            "--process",
            "er",
            "--n",
            "100",
            "--track-k",
            "1",
            "--out",
            s(&out),
        ],
        &["run", "--process", "bogus", "--n", "100", "--out", s(&out)],
    ];
    for args in cases {
        let o = percolate(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
        assert!(!out.exists(), "{args:?} created a file");
    }
    let o = percolate(&["window", "--beta", "0.5", "--n", "1000", "--C", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("C"), "{}", stderr(&o));
}

#[test]
fn help_exits_zero() {
    let o = percolate(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    for sub in [
        "run",
        "ensemble",
        "window",
        "verify-lemma1",
        "verify-eq1",
        "emit-figure-data",
    ] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
}

#[test]
fn ensemble_writes_per_seed_files_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ens");
    let o = percolate(&[
        "ensemble",
        "--process",
        "half-restricted",
        "--beta",
        "0.5",
        "--n",
        "3000",
        "--steps",
        "9000",
        "--seeds",
        "0..3",
        "--C",
        "2",
        "--out-dir",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for seed in 0..3 {
        assert!(out
            .join(format!("half-restricted-0.5_3000_{seed}.csv"))
            .exists());
    }
    let summary =
        std::fs::read_to_string(out.join("ensemble_half-restricted-0.5_3000.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(
        lines[0],
        "seed,T_C,L1_at_TC,L1_after_window,window_sqrt_half"
    );
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0,"));
}

#[test]
fn verify_commands_report_through_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("eq1.csv");
    let o = percolate(&[
        "verify-eq1",
        "--N",
        "50",
        "--a",
        "10",
        "--b",
        "40",
        "--trials",
        "20000",
        "--out",
        s(&report),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(std::fs::read_to_string(&report)
        .unwrap()
        .starts_with("N,a,b,trials,mean"));

    let o = percolate(&[
        "verify-lemma1",
        "--N",
        "2000",
        "--k",
        "200",
        "--trials",
        "500",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    // Far above the mean the event is almost certain, which the bound denies.
    let o = percolate(&[
        "verify-lemma1",
        "--N",
        "2000",
        "--k",
        "200",
        "--s",
        "200000",
        "--trials",
        "500",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));

    let o = percolate(&["verify-eq1", "--N", "10", "--a", "5", "--b", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn figure_data_covers_six_processes() {
    let dir = tempfile::tempdir().unwrap();
    let o = percolate(&[
        "emit-figure-data",
        "--n",
        "2000",
        "--seeds",
        "5",
        "--out-dir",
        s(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for label in [
        "er",
        "min-product",
        "min-sum",
        "half-restricted-0.25",
        "half-restricted-0.5",
        "half-restricted-0.9",
    ] {
        let path = dir.path().join(format!("{label}_2000_5.csv"));
        let series = read_csv(&path).unwrap_or_else(|e| panic!("{label}: {e}"));
        assert_eq!(series.points.last().unwrap().step, 2000);
    }
}
