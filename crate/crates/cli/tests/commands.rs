use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_giambelli")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const HALF: [&str; 6] = ["--z", "1/2", "--zp", "1/2", "--xi", "1/4"];

fn with<'a>(base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    base.iter().chain(extra).copied().collect()
}

#[test]
fn weight_example() {
    let out = run(&with(&["zmeasure", "weight", "--lambda", "[2]"], &HALF));
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"]["weight_n"], "9/10");
    assert_eq!(v["result"]["weight_mixed_ratio"], "9/1024");
    assert_eq!(v["manifest"]["parameters"]["z"], "1/2");
    assert_eq!(v["manifest"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn inadmissible_parameters_exit_two() {
    let out = run(&["zmeasure", "weight", "--z", "1", "--zp", "1", "--lambda", "[2]"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "inadmissible");
    let out = run(&with(&["zmeasure", "weight", "--lambda", "[1,2]"], &HALF));
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["zmeasure", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn giambelli_check_is_exact() {
    let out = run(&with(&["zmeasure", "giambelli-check", "--max-size", "8"], &HALF));
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"]["max_residual"], "0");
    assert_eq!(v["result"]["checked"], 67);
}

#[test]
fn expect_fs_is_exact() {
    let v = json(&run(&with(&["zmeasure", "expect-fs", "--mu", "[1]"], &HALF)));
    // (ξ/(1−ξ)) zz′ = 1/3 · 1/4
    assert_eq!(v["result"]["expect_fs"], "1/12");
}

#[test]
fn kernel_commands() {
    let v = json(&run(&with(&["kernel", "rho", "--points", "[-1/2,1/2]", "--oracle"], &HALF)));
    let r = &v["result"];
    let rho = r["rho"].as_f64().unwrap();
    assert!((rho - r["oracle"]["value"]["re"].as_f64().unwrap()).abs() < 1e-8);
    assert!((rho - r["rho_residue_form"].as_f64().unwrap()).abs() < 1e-10);
    assert!(r["oracle"]["tail_bound"].as_f64().unwrap() < 1e-10);

    let v = json(&run(&with(&["kernel", "jump-check", "--x", "1/2"], &HALF)));
    assert!(v["result"]["residual"].as_f64().unwrap() < 1e-10);

    let out = run(&with(&["kernel", "grid", "--range", "-7/2,7/2", "--format", "csv"], &HALF));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("x,y,kernel,error"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r.ends_with(',')));

    let v = json(&run(&["kernel", "whittaker-eval", "--x", "3/2", "--y", "3/2", "--z", "1/2", "--zp", "1/2"]));
    assert!(v["result"]["kernel"].as_f64().unwrap() > 0.0);
    let out = run(&["kernel", "eval", "--x", "1", "--y", "1/2", "--z", "1/2", "--zp", "1/2", "--xi", "1/4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn samples_reproduce_across_thread_counts() {
    let a = json(&run(&with(&["zmeasure", "sample", "--count", "200", "--seed", "11", "--threads", "1"], &HALF)));
    let b = json(&run(&with(&["zmeasure", "sample", "--count", "200", "--seed", "11", "--threads", "3"], &HALF)));
    assert_eq!(a["result"], b["result"]);
    let c = json(&run(&with(&["zmeasure", "sample", "--count", "200", "--seed", "12"], &HALF)));
    assert_ne!(a["result"]["samples"], c["result"]["samples"]);
}

#[test]
fn ope_commands() {
    let m = r#"{"atoms":["-1","0","1"],"weights":["1","1","1"]}"#;
    let v = json(&run(&["ope", "--measure", m, "--n", "2", "prob", "--config", "[-1,1]"]));
    assert_eq!(v["result"]["prob"], "2/3");
    let v = json(&run(&["ope", "--measure", m, "--n", "2", "rho", "--points", "[0]"]));
    assert_eq!(v["result"]["brute"], "1/3");
    assert_eq!(v["result"]["cd_kernel"], "1/3");
    assert_eq!(v["result"]["residue_kernel"], "1/3");

    let dir = std::env::temp_dir().join(format!("giambelli-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("measure.csv");
    std::fs::write(&csv, "atom,weight\n0,1\n1,1\n2,1\n3,1\n").unwrap();
    let path = csv.to_str().unwrap();
    let v = json(&run(&["ope", "--measure", path, "--n", "3", "giambelli-check", "--max-size", "6"]));
    assert_eq!(v["result"]["max_residual"], "0");
    let v = json(&run(&["ope", "--measure", path, "--n", "3", "avg-schur", "--lambda", "[2,2]"]));
    assert_eq!(v["result"]["moment_determinant"], v["result"]["enumeration"]);
    let out = run(&["ope", "--measure", path, "--n", "5", "prob", "--config", "[0]"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_reports_and_exit_codes() {
    let out = run(&["verify", "ope", "--max-size", "4"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["result"]["passed"], true);
    let out = run(&["verify", "giambelli", "--max-size", "5"]);
    assert!(out.status.success());
    let out = run(&["verify", "giambelli", "--max-size", "8", "--tol", "1e-30", "--z", "1/2+i", "--zp", "1/2-i", "--xi", "1/4"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["result"]["passed"], false);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("giambelli-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = run(&with(&["zmeasure", "weight", "--lambda", "[1]", "--out", p], &HALF));
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["weight_n"], "1");
    std::fs::remove_file(&path).ok();
}
