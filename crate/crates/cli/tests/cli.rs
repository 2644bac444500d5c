use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_monoapprox"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn det_approximation_respects_grid_bound() {
    let o = run(&["approximate", "--algo", "det", "--d", "2", "--m", "8", "--family", "boxbslash"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let err: f64 = column(&out, "error").last().unwrap().parse().unwrap();
    let bound: f64 = column(&out, "bound").last().unwrap().parse().unwrap();
    assert_eq!(bound, 0.25);
    assert!(err <= bound);
}

#[test]
fn missing_family_is_a_usage_error() {
    let o = run(&["approximate", "--algo", "det", "--d", "2", "--m", "8"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["approximate", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_violation_exits_nonzero() {
    let o = run(&[
        "approximate", "--algo", "det", "--d", "8", "--m", "64", "--family", "linear", "--budget-cells", "1000",
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn mc_approximation_below_chosen_bound() {
    let o = run(&[
        "approximate", "--algo", "mc", "--d", "2", "--eps", "0.5", "--family", "levelset:t=1,b=2,p=0.5",
        "--seed", "7", "--replications", "3", "--max-samples", "16384",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(column(&out, "replication"), vec!["0", "1", "2", "mean"]);
    let mean: f64 = column(&out, "error").last().unwrap().parse().unwrap();
    let bound: f64 = column(&out, "bound").last().unwrap().parse().unwrap();
    assert!(mean <= bound);
    assert_eq!(column(&out, "n").last().unwrap(), "16384");
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "approximate", "--algo", "mc", "--d", "3", "--k", "2", "--r", "2", "--n", "500", "--family", "boxbslash",
        "--seed", "11", "--replications", "4", "--format", "json", "--probes", "2000",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["meta"]["config"]["seed"], 11);
    assert!(v["meta"]["seed_scheme"].as_str().unwrap().contains("ChaCha8"));
    let reps = v["replications"].as_array().unwrap();
    assert_eq!(reps.len(), 4);
    for (i, r) in reps.iter().enumerate() {
        assert_eq!(r["replication"], i);
    }
    assert!(v["params"]["used_bound"]["truncation_term"].is_number());
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bounds.csv");
    let args = ["bounds", "--eps", "1/15", "--d", "100"];
    let direct = run(&args);
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    assert!(run(&with_out).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn bounds_rows() {
    let o = run(&["bounds", "--eps-list", "1/15,0.5,0.9", "--d-list", "10,100"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 7);
    let eps = column(&out, "eps");
    let d = column(&out, "d");
    let lower = column(&out, "n_lower");
    let curse = column(&out, "n_det_curse");
    for i in 0..6 {
        let e: f64 = eps[i].parse().unwrap();
        if (e - 1.0 / 15.0).abs() < 1e-15 && d[i] == "100" {
            assert_eq!(lower[i].parse::<f64>().unwrap(), 108.0);
        }
        if e == 0.5 && d[i] == "10" {
            assert_eq!(curse[i].parse::<f64>().unwrap(), 512.0);
        }
        if e > 0.5 {
            assert_eq!(curse[i], "");
        }
    }
}

#[test]
fn bounds_json_has_components() {
    let o = run(&["bounds", "--eps", "1/15", "--d", "400", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = &v["certificate"];
    assert!((c["eps_hat"].as_f64().unwrap() - 0.0666667).abs() < 1e-3);
    let row = &v["rows"][0];
    let want = 108.0 * 10f64.exp();
    assert!((row["lower"]["n_lower"].as_f64().unwrap() - want).abs() < 1e-6 * want);
    assert!(row["upper"]["log_randomized"].is_number());
}

#[test]
fn det_convergence_slopes() {
    for (d, lo, hi) in [("1", -1.1, -0.9), ("2", -0.65, -0.35)] {
        let o = run(&["convergence", "--algo", "det", "--d", d, "--family", "linear"]);
        assert!(o.status.success());
        let out = stdout(&o);
        let last = out.lines().last().unwrap();
        assert!(last.starts_with("slope,"));
        let slope: f64 = last.split(',').nth(3).unwrap().parse().unwrap();
        assert!((lo..=hi).contains(&slope), "d={d} slope={slope}");
    }
}

#[test]
fn mc_convergence_reports_rows() {
    let o = run(&[
        "convergence", "--algo", "mc", "--d", "2", "--k", "2", "--r", "3", "--ns", "64,256,1024",
        "--family", "boxbslash", "--replications", "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(column(&out, "kind"), vec!["point", "point", "point", "slope"]);
}

#[test]
fn config_file_mirrors_flags_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# det run\nalgo = det\nd = 2\nm = 4\nfamily = boxbslash\n").unwrap();
    let p = path.to_str().unwrap();
    let o = run(&["approximate", "--config", p]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(column(&stdout(&o), "m")[0], "4");
    let o = run(&["approximate", "--config", p, "--m", "8"]);
    assert_eq!(column(&stdout(&o), "m")[0], "8");
}

#[test]
fn verify_only_selected_properties() {
    let o = run(&["verify", "--only", "certificate"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("PASS certificate"));
    assert!(out.contains("0.0666667"));
    assert!(out.contains("1/1 properties passed"));
    let o = run(&["verify", "--only", "tail_bound"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS tail_bound"));
    let o = run(&["verify", "--only", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_lists_properties() {
    let o = run(&["verify", "--list"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().count() >= 12);
}
