use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetazero")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn eval_values() {
    let v = json(&["eval", "ezd(2)", "--at", "2"]);
    assert!((v["points"][0]["re"].as_f64().unwrap() - PI.powi(4) / 120.0).abs() < 1e-12);
    let v = json(&["eval", "zeta(s)", "--at", "2", "--at", "0.5+14.134725141734693i"]);
    assert!((v["points"][0]["re"].as_f64().unwrap() - PI * PI / 6.0).abs() < 1e-12);
    assert!(v["points"][1]["re"].as_f64().unwrap().abs() < 1e-10);
    assert_eq!(v["manifest"]["hash"].as_str().unwrap().len(), 64);
}

#[test]
fn eval_errors() {
    let o = run(&["eval", "zeta(s)", "--at", "1"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("PoleProximity"));
    assert_eq!(code(&run(&["eval", "zeta(s", "--at", "2"])), 2);
    assert_eq!(code(&run(&["eval", "gamma(s)", "--at", "2"])), 2);
    assert_eq!(code(&run(&["eval", "zeta(s)", "--at", "two"])), 2);
}

#[test]
fn eval_linear_form_config() {
    let dir = std::env::temp_dir().join(format!("zetazero-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tornheim.cfg");
    std::fs::write(&path, "r = 2\nm = 3\nlambda = 1 0, 0 1, 1 1\nshifts = 0 0\noffset = from_one\n").unwrap();
    let v = json(&["--tol", "1e-6", "eval", "--config", path.to_str().unwrap(), "--at", "2"]);
    assert!((v["points"][0]["re"].as_f64().unwrap() - PI.powi(6) / 2835.0).abs() < 2e-6);
    assert_eq!(v["points"][0]["s"].as_array().unwrap().len(), 3);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn zeros_examples() {
    let v = json(&["zeros", "zeta(s)+zeta(2*s)", "--rect", "0.5,1,0,120"]);
    let zs = v["zeros"].as_array().unwrap();
    assert!(!zs.is_empty());
    for z in zs {
        assert!(z["residual"].as_f64().unwrap() < 1e-8);
        assert_eq!(z["mult"], 1);
    }
    assert_eq!(v["rect"], serde_json::json!([0.5, 1.0, 0.0, 120.0]));

    let v = json(&["zeros", "zeta(s)", "--rect", "2,3,0,50"]);
    assert!(v["zeros"].as_array().unwrap().is_empty());

    let v = json(&["zeros", "xi(s+1/2)-xi(s-1/2)", "--rect", "0.1,0.9,0,50"]);
    let zs = v["zeros"].as_array().unwrap();
    assert!(!zs.is_empty());
    assert!(zs.iter().all(|z| (z["re"].as_f64().unwrap() - 0.5).abs() < 1e-6));
    assert!(v["unresolved"].as_array().unwrap().is_empty());
}

#[test]
fn zeros_report_pole_cells() {
    let v = json(&["zeros", "zeta(s)", "--rect", "0.8,1.2,-0.2,0.2"]);
    assert!(v["zeros"].as_array().unwrap().is_empty());
    assert_eq!(v["pole_cells"][0]["winding"], -1);
}

#[test]
fn density_examples() {
    let o = run(&["density", "zeta(s)+zeta(2*s)", "--sigma0", "0.55", "--T", "100,200,400"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().starts_with("# zetazero/"));
    assert!(text.lines().any(|l| l == "T,count,slope"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 3);
    let counts: Vec<u64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]));

    let o = run(&["density", "zeta(s)", "--sigma0", "0.55", "--T", "100"]);
    assert_eq!(csv_rows(&stdout(&o))[0][1], "0");

    assert_eq!(code(&run(&["density", "zeta(s)", "--sigma0", "0.55", "--T", ""])), 2);
    assert_eq!(code(&run(&["density", "zeta(s)", "--sigma0", "0.55", "--T", "200,100"])), 2);
    assert_eq!(code(&run(&["density", "zeta(s)", "--sigma0", "0.3", "--T", "100"])), 2);
}

#[test]
fn density_sigma_cap() {
    let v = json(&["density", "zeta(s)^2-zeta(2*s)", "--sigma0", "0.55", "--T", "30,60", "--sigma-cap", "3.5"]);
    assert_eq!(v["sigma_cap"], 3.5);
    assert_eq!(v["complete"], true);
    assert!(v["rows"][1]["count"].as_u64().unwrap() >= v["rows"][0]["count"].as_u64().unwrap());
}

#[test]
fn verify_suites() {
    for suite in ["identities", "symmetry", "oracles"] {
        let o = run(&["verify", suite]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert!(stdout(&o).contains(", 0 failed"));
    }
    assert_eq!(code(&run(&["verify", "nonsense"])), 2);
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("zetazero-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d.csv");
    let args = ["density", "zeta(s)", "--sigma0", "0.6", "--T", "20,40"];
    let mut with_out = args.to_vec();
    with_out.extend_from_slice(&["--out", path.to_str().unwrap()]);
    assert_eq!(code(&run(&with_out)), 0);
    let file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv_rows(&file), csv_rows(&stdout(&run(&args))));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn byte_identical_across_thread_counts() {
    let cases: [&[&str]; 2] = [
        &["--json", "zeros", "zeta(s)+zeta(2*s)", "--rect", "0.55,1,0,100"],
        &["density", "zeta(s)+zeta(2*s)", "--sigma0", "0.55", "--T", "100,200,400"],
    ];
    for args in cases {
        let one = run(&[&["--threads", "1"], args].concat());
        let eight = run(&[&["--threads", "8"], args].concat());
        assert_eq!(code(&one), 0);
        assert_eq!(one.stdout, eight.stdout);
    }
    let args = ["--json", "zeros", "zeta(s)^2-zeta(2*s)", "--rect", "0.55,3.5,0,60"];
    let one = run(&[&["--threads", "1"], &args[..]].concat());
    let eight = run(&[&["--threads", "8"], &args[..]].concat());
    assert_eq!(one.stdout, eight.stdout);
    let v: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert!(!v["zeros"].as_array().unwrap().is_empty());
}
