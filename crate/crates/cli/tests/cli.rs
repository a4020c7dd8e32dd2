use std::path::Path;
use std::process::{Command, Output};

fn superschemes(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superschemes"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_prints_status_and_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = superschemes(
        &[
            "solve",
            "--problem",
            "ex1",
            "--n",
            "1000",
            "--method",
            "ss2",
            "--tol",
            "1e-6",
            "--max-iter",
            "2000",
            "--trace",
            "trace.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert_eq!(stdout(&out).lines().next(), Some("converged k=4"));
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("k,gnorm,alpha,t,beta,gamma,seconds"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn bench_writes_schema_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = superschemes(
        &[
            "bench", "--table", "t8", "--format", "csv", "--out", "t8.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let csv = std::fs::read_to_string(dir.path().join("t8.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "table,method,n,iterations,final_gnorm,cpu_seconds,status,seed"
    );
    assert_eq!(lines.len(), 5);
    for (line, method) in lines[1..].iter().zip(["ss1", "ss2", "ss3", "bb"]) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 8);
        assert_eq!((f[0], f[1], f[2], f[6]), ("t8", method, "100", "converged"));
    }
}

#[test]
fn bench_machine_output_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.json", "b.json"] {
        let out = superschemes(
            &[
                "bench", "--table", "t9", "--n", "40", "--seed", "5", "--format", "json", "--out",
                name,
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0), "{out:?}");
    }
    let strip = |name: &str| {
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join(name)).unwrap()).unwrap();
        for cell in v.as_array_mut().unwrap() {
            cell["cpu_seconds"] = 0.into();
        }
        v
    };
    assert_eq!(strip("a.json"), strip("b.json"));
}

#[test]
fn gradcheck_reports_small_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = superschemes(
        &["gradcheck", "--problem", "ex3", "--n", "50", "--h", "1e-6"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    let err: f64 = text
        .split("max relative error ")
        .nth(1)
        .and_then(|s| s.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(err <= 1e-5);
}

#[test]
fn gradcheck_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = superschemes(
        &["gradcheck", "--problem", "ex6", "--n", "10", "--h", "0.5"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn acoc_subcommand_prints_final_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = superschemes(
        &[
            "acoc",
            "--problem",
            "ex1",
            "--n",
            "15",
            "--method",
            "ss1",
            "--out",
            "r.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(stdout(&out).contains("ρ_final = 2.00"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["status"], "ok");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "# diagonal quadratic\nproblem = ex8\nmethod = ss1\nmax-iter = 5\nout = summary.json\n",
    )
    .unwrap();
    let out = superschemes(&["solve", "--config", "run.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert_eq!(stdout(&out).lines().next(), Some("max_iter_reached k=5"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(v["status"], "max_iter_reached");

    let out = superschemes(
        &[
            "solve",
            "--config",
            "run.cfg",
            "--method",
            "ss3",
            "--max-iter",
            "2000",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("converged k="));
}

#[test]
fn failed_runs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("ex8", "100", "breakdown_denominator"),
        ("ex4", "100", "diverged_nonfinite"),
    ];
    for (problem, n, status) in cases {
        let out = superschemes(
            &["solve", "--problem", problem, "--n", n, "--method", "ss3s"],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(2), "{out:?}");
        assert!(stdout(&out).starts_with(status), "{}", stdout(&out));
    }
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["solve", "--problem", "ex7", "--method", "ss1"],
        &["solve", "--problem", "ex1", "--method", "abbmin1"],
        &["solve", "--problem", "ex1"],
        &["solve", "--problem", "ex9", "--n", "20", "--method", "ss1"],
        &[
            "solve",
            "--problem",
            "ex1",
            "--method",
            "ss1",
            "--unknown-flag",
        ],
        &["bench", "--table", "t7"],
        &["bench", "--table", "t9", "--method", "odh1"],
        &[
            "solve",
            "--config",
            "missing.cfg",
            "--problem",
            "ex1",
            "--method",
            "ss1",
        ],
        &[
            "solve",
            "--problem",
            "ex1",
            "--method",
            "ss1",
            "--trace",
            "no/such/dir/t.csv",
        ],
    ];
    for args in cases {
        let out = superschemes(args, dir.path());
        assert_eq!(out.status.code(), Some(1), "{args:?}: {out:?}");
        assert!(!out.stderr.is_empty());
    }
    let help = superschemes(&["bench", "--help"], dir.path());
    assert_eq!(help.status.code(), Some(0));
    for flag in [
        "--table",
        "--method",
        "--n",
        "--seed",
        "--max-iter",
        "--format",
        "--out",
        "--config",
    ] {
        assert!(stdout(&help).contains(flag), "{flag}");
    }
}
