use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn netstruct(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netstruct"))
        .args(args)
        .current_dir(cwd)
        .env_remove("NETSTRUCT_OUTPUT_DIR")
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let out = netstruct(args, cwd);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str], cwd: &Path) -> Value {
    serde_json::from_str(&ok(args, cwd)).unwrap()
}

fn close(v: &Value, x: f64) -> bool {
    (v.as_f64().unwrap() - x).abs() < 1e-12
}

// "name\tauc=value" lines printed by `roc`.
fn aucs(stdout: &str) -> Vec<(String, f64)> {
    stdout
        .lines()
        .map(|l| {
            let (name, auc) = l.split_once("\tauc=").unwrap();
            (name.to_string(), auc.parse().unwrap())
        })
        .collect()
}

fn auc_trailer(path: &Path) -> f64 {
    let text = fs::read_to_string(path).unwrap();
    let last = text.lines().last().unwrap();
    last.strip_prefix("# auc=").unwrap().parse().unwrap()
}

#[test]
fn fit_builtins() {
    let dir = TempDir::new().unwrap();
    let z = json(&["fit", "--dataset", "zachary"], dir.path());
    assert!(close(&z["er"]["p"], 78.0 / 561.0));
    assert!(close(&z["given"]["p00"], 33.0 / 120.0));
    assert!(close(&z["given"]["p01"], 10.0 / 288.0));
    assert!(close(&z["given"]["p11"], 35.0 / 153.0));
    assert!(z["exact"].is_null());
    assert_eq!(z["nodes"], 34);
    assert_eq!(z["edges"], 78);

    let e = json(&["fit", "--dataset", "example1"], dir.path());
    assert!(close(&e["er"]["p"], 14.0 / 45.0));
    assert!(close(&e["given"]["p00"], 5.0 / 10.0));
    assert!(close(&e["given"]["p01"], 7.0 / 25.0));
    assert!(close(&e["given"]["p11"], 2.0 / 10.0));
    let exact = e["exact"]["loglik"].as_f64().unwrap();
    assert!(e["spectral"]["loglik"].as_f64().unwrap() <= exact + 1e-9);
}

#[test]
fn fit_edgeless_file() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("pair.edges"), "n 2\n").unwrap();
    let r = json(&["fit", "--edges", "pair.edges"], dir.path());
    assert_eq!(r["dataset"], "pair");
    assert!(close(&r["er"]["p"], 0.0));
    assert!(close(&r["er"]["loglik"], 0.0));
}

#[test]
fn fit_csv_rows() {
    let dir = TempDir::new().unwrap();
    let csv = ok(
        &["fit", "--dataset", "example1", "--format", "csv"],
        dir.path(),
    );
    let rows: Vec<&str> = csv.lines().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(rows, ["fit", "er", "given", "exact", "spectral"]);
}

#[test]
fn chi2_test_on_zachary() {
    let dir = TempDir::new().unwrap();
    let r = json(
        &["test", "--dataset", "zachary", "--statistic", "chi2"],
        dir.path(),
    );
    assert!(r["observed"].as_f64().unwrap() > 47.0);
    assert!(r["p_value"].as_f64().unwrap() < 1e-3);
}

#[test]
fn chi2_needs_covariates() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("g.edges"), "1 2\n2 3\n").unwrap();
    let out = netstruct(
        &["test", "--edges", "g.edges", "--statistic", "chi2"],
        dir.path(),
    );
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("requires covariates"));
}

#[test]
fn monte_carlo_tests_on_zachary() {
    let dir = TempDir::new().unwrap();
    let degvar = json(
        &[
            "test",
            "--dataset",
            "zachary",
            "--statistic",
            "degvar",
            "--replicates",
            "9999",
            "--seed",
            "7",
        ],
        dir.path(),
    );
    assert!(degvar["p_value"].as_f64().unwrap() < 1e-3);
    assert_eq!(degvar["seed"], 7);
    let fd = json(
        &[
            "test",
            "--dataset",
            "zachary",
            "--statistic",
            "lr-fd-spectral",
            "--replicates",
            "9999",
            "--seed",
            "8",
        ],
        dir.path(),
    );
    assert!(fd["p_value"].as_f64().unwrap() < 1e-3);
    assert_eq!(fd["method"], "importance-sampling");
}

#[test]
fn invalid_test_configurations_fail() {
    let dir = TempDir::new().unwrap();
    let out = netstruct(
        &[
            "test",
            "--dataset",
            "zachary",
            "--statistic",
            "lr-fd-spectral",
            "--null",
            "er",
        ],
        dir.path(),
    );
    assert!(!out.status.success());
    let out = netstruct(
        &[
            "test",
            "--dataset",
            "zachary",
            "--statistic",
            "degvar",
            "--replicates",
            "0",
        ],
        dir.path(),
    );
    assert!(!out.status.success());
}

#[test]
fn unseeded_runs_report_their_seed() {
    let dir = TempDir::new().unwrap();
    let out = netstruct(
        &[
            "test",
            "--dataset",
            "example1",
            "--statistic",
            "degvar",
            "-r",
            "19",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    let seed: u64 = stderr
        .lines()
        .find_map(|l| l.strip_prefix("seed: "))
        .unwrap()
        .parse()
        .unwrap();
    let first: Value = serde_json::from_slice(&out.stdout).unwrap();
    let again = json(
        &[
            "test",
            "--dataset",
            "example1",
            "--statistic",
            "degvar",
            "-r",
            "19",
            "--seed",
            &seed.to_string(),
        ],
        dir.path(),
    );
    assert_eq!(first, again);
}

#[test]
fn roc_power_ordering() {
    let dir = TempDir::new().unwrap();
    let stdout = ok(
        &[
            "roc",
            "--dataset",
            "zachary",
            "--statistics",
            "lr-spectral,degvar",
            "--seed",
            "11",
            "-o",
            "out",
        ],
        dir.path(),
    );
    let a = aucs(&stdout);
    let names: Vec<&str> = a.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["lr-spectral", "degvar", "bound"]);
    assert!(a[0].1 > a[1].1);
    assert!(a[2].1 >= a[0].1 - 0.02);
    for (name, auc) in &a {
        let path = dir.path().join("out").join(format!("roc-{name}.csv"));
        assert_eq!(auc_trailer(&path), *auc);
    }
}

#[test]
fn fixed_degree_roc_is_seed_stable() {
    let dir = TempDir::new().unwrap();
    let run = |seed: &str| {
        let args = [
            "roc",
            "--dataset",
            "zachary",
            "--statistics",
            "lr-fd-spectral",
            "--null",
            "fixed-degree",
            "--seed",
            seed,
            "-o",
            seed,
        ];
        aucs(&ok(&args, dir.path()))
    };
    let (a, b) = (run("1"), run("2"));
    assert_eq!(a[0].0, "lr-fd-spectral");
    assert!((a[0].1 - b[0].1).abs() <= 0.02, "{a:?} vs {b:?}");
    // Importance weights make the curve stepped: fewer points than draws.
    let text = fs::read_to_string(dir.path().join("1/roc-lr-fd-spectral.csv")).unwrap();
    assert!(text.lines().count() < 2000);
}

#[test]
fn roc_without_signal() {
    let dir = TempDir::new().unwrap();
    let stdout = ok(
        &[
            "roc",
            "--dataset",
            "zachary",
            "--alt",
            "er",
            "--replicates",
            "2000",
            "--seed",
            "4",
            "-o",
            "out",
        ],
        dir.path(),
    );
    for (name, auc) in aucs(&stdout) {
        assert!((auc - 0.5).abs() <= 0.03, "{name}: {auc}");
    }
}

#[test]
fn simulate_models() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    ok(
        &[
            "simulate", "--model", "sbm", "--n", "100", "--groups", "50,50", "--p00", "0.5",
            "--p11", "0.5", "--p01", "0", "--seed", "1", "-o", "sim",
        ],
        p,
    );
    let fit = json(
        &[
            "fit",
            "--edges",
            "sim/sbm.edges",
            "--covariates",
            "sim/sbm.labels",
        ],
        p,
    );
    assert!(close(&fit["given"]["p01"], 0.0));
    assert_eq!(fit["nodes"], 100);

    ok(
        &[
            "simulate", "--model", "er", "--n", "10", "--p", "1", "-o", "sim",
        ],
        p,
    );
    let edges = fs::read_to_string(p.join("sim/er.edges")).unwrap();
    assert_eq!(edges.lines().count(), 1 + 45);

    ok(
        &[
            "simulate",
            "--model",
            "fixed-degree",
            "--degrees-from",
            "zachary",
            "--seed",
            "2",
            "-o",
            "sim",
        ],
        p,
    );
    let drawn = json(&["fit", "--edges", "sim/fixed-degree.edges"], p);
    assert_eq!(drawn["edges"], 78);
    let weight: f64 = fs::read_to_string(p.join("sim/fixed-degree.weight"))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(weight.is_finite());
    assert_eq!(degrees(&p.join("sim/fixed-degree.edges")), ZACHARY_DEGREES);
}

fn degrees(path: &Path) -> Vec<usize> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let n: usize = lines
        .next()
        .unwrap()
        .strip_prefix("n ")
        .unwrap()
        .parse()
        .unwrap();
    let mut d = vec![0; n];
    for l in lines {
        let mut it = l.split(' ').map(|x| x.parse::<usize>().unwrap());
        let (i, j) = (it.next().unwrap(), it.next().unwrap());
        d[i - 1] += 1;
        d[j - 1] += 1;
    }
    d
}

const ZACHARY_DEGREES: [usize; 34] = [
    16, 9, 10, 6, 3, 4, 4, 4, 5, 2, 3, 1, 2, 5, 2, 2, 2, 2, 2, 3, 2, 2, 2, 5, 3, 3, 2, 4, 3, 4, 3,
    6, 13, 17,
];

#[test]
fn identical_seeds_give_identical_files() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    for out in ["a", "b"] {
        ok(
            &[
                "roc",
                "--dataset",
                "example1",
                "--replicates",
                "200",
                "--seed",
                "9",
                "-o",
                out,
            ],
            p,
        );
        ok(
            &[
                "simulate",
                "--model",
                "fixed-degree",
                "--degrees",
                "3,2,2,2,1",
                "--seed",
                "9",
                "-o",
                out,
            ],
            p,
        );
        ok(
            &[
                "test",
                "--dataset",
                "example1",
                "-s",
                "lr",
                "-r",
                "99",
                "--seed",
                "9",
                "-o",
                &format!("{out}/t.json"),
            ],
            p,
        );
    }
    for f in [
        "roc-lr-spectral.csv",
        "roc-degvar.csv",
        "roc-bound.csv",
        "fixed-degree.edges",
        "fixed-degree.weight",
        "t.json",
    ] {
        assert_eq!(
            fs::read(p.join("a").join(f)).unwrap(),
            fs::read(p.join("b").join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    fs::write(
        p.join("run.toml"),
        "dataset = \"example1\"\nstatistic = \"degvar\"\nreplicates = 49\nseed = 5\nformat = \"json\"\n",
    )
    .unwrap();
    let from_file = json(&["--config", "run.toml", "test"], p);
    assert_eq!(from_file["replicates"], 49);
    assert_eq!(from_file["seed"], 5);
    let flagged = json(&["--config", "run.toml", "test", "--replicates", "29"], p);
    assert_eq!(flagged["replicates"], 29);
    assert_eq!(flagged["seed"], 5);

    fs::write(p.join("bad.toml"), "replicate = 3\n").unwrap();
    let out = netstruct(&["--config", "bad.toml", "test"], p);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));
}

#[test]
fn output_directory_from_environment() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_netstruct"))
        .args(["fit", "--dataset", "example1", "--format", "csv"])
        .current_dir(dir.path())
        .env("NETSTRUCT_OUTPUT_DIR", "results")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(dir.path().join("results/example1-fit.csv")).unwrap();
    assert!(text.starts_with("fit,"));
}

#[test]
fn failures_leave_no_files() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let out = netstruct(
        &[
            "simulate",
            "--model",
            "fixed-degree",
            "--degrees",
            "3,3,1,1",
            "-o",
            "sim",
        ],
        p,
    );
    assert!(!out.status.success());
    assert!(!p.join("sim").exists() || fs::read_dir(p.join("sim")).unwrap().next().is_none());
    let out = netstruct(&["fit", "--dataset", "nope"], p);
    assert!(!out.status.success());
}
