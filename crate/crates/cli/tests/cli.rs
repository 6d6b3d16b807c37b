use std::process::{Command, Output};

use serde_json::Value;

fn nongauss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nongauss"))
        .args(args)
        .env_remove("NONGAUSS_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn measure_fock_family() {
    let o = nongauss(&["measure", "--family", "fock", "--n", "1..6", "--alpha", "2", "--cutoff", "60"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r[0], ["family", "param", "mean_photon", "alpha", "value"]);
    assert_eq!(r.len(), 7);
    assert_eq!(r[1][1], "1");
    assert!((r[1][4].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    // values grow with n
    let v: Vec<f64> = r[1..].iter().map(|row| row[4].parse().unwrap()).collect();
    assert!(v.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn measure_other_families() {
    let o = nongauss(&["measure", "--family", "zero-n", "--param", "1,2", "--alpha", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rows(&stdout(&o)).len(), 5);
    let o = nongauss(&["measure", "--family", "cat", "--param", "0.5:1.5:3", "--cutoff", "40"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 4);
    assert!(r[1..].iter().all(|row| row[0] == "cat" && row[4].parse::<f64>().unwrap() > 0.0));
    let o = nongauss(&["measure", "--family", "cubic", "--param", "0.05", "--cutoff", "120"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&stdout(&o));
    assert!(r[1][4].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn negativity_near_zero() {
    let o = nongauss(&["negativity", "--x", "1e-3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r[0], ["x", "W", "err"]);
    assert!((r[1][1].parse::<f64>().unwrap() - 1.0).abs() < 1e-3);
    let o = nongauss(&["negativity", "--x", "1:10:4:log"]);
    let w: Vec<f64> = rows(&stdout(&o))[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(w.len(), 4);
    assert!(w.windows(2).all(|p| p[1] > p[0]));
}

#[test]
fn bound_curve() {
    let o = nongauss(&["bound", "--x", "2,8", "--epsilon", "0.1", "--delta", "0.05"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r[0], ["x", "r_opt", "mean_photon", "dr", "N"]);
    let dr: Vec<f64> = r[1..].iter().map(|row| row[3].parse().unwrap()).collect();
    assert!(dr[1] < dr[0]);
    assert_eq!(nongauss(&["bound", "--x", "2", "--delta", "0.7"]).status.code(), Some(2));
}

#[test]
fn swap_sim_single_photon() {
    let o = nongauss(&["swap-sim", "--state", "fock:1", "--M", "10", "--shots", "100000", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let p = v["purity"].as_f64().unwrap();
    let se = v["statistical_stderr"].as_f64().unwrap();
    assert!((p - 0.5).abs() <= 3.0 * se, "{p} ± {se}");
    assert_eq!(v["seed"], 7);

    let o = nongauss(&["swap-sim", "--state", "coherent:1", "--with", "thermal:0.5", "--M", "6", "--shots", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["systematic_bound_joint"].as_f64().unwrap() <= v["systematic_bound"].as_f64().unwrap());
    assert_eq!(nongauss(&["swap-sim", "--state", "thermal:0.5"]).status.code(), Some(2));
}

#[test]
fn shadow_json() {
    let o = nongauss(&["shadow", "--state", "vacuum", "--N", "20000", "--M", "4", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys, ["M", "N", "purity", "seed", "stderr_bootstrap"]);
    assert!((v["purity"].as_f64().unwrap() - 1.0).abs() < 0.1);
    assert_eq!(nongauss(&["shadow", "--state", "vacuum", "--M", "21"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["shadow", "--state", "fock:1", "--N", "5000", "--M", "4", "--seed", "9"][..],
        &["swap-sim", "--state", "cat:1.2", "--shots", "5000", "--seed", "9"][..],
        &["measure", "--family", "fock", "--n", "0..3", "--alpha", "0.5,3"][..],
    ] {
        let a = nongauss(args);
        let b = nongauss(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn twelve_significant_digits() {
    let o = nongauss(&["negativity", "--x", "0.7"]);
    for field in rows(&stdout(&o))[1].iter() {
        let digits = field.split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).count();
        assert!(digits <= 13, "{field}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(nongauss(&["measure", "--family", "fock", "--n", "6..1"]).status.code(), Some(2));
    assert_eq!(nongauss(&["measure", "--family", "fock", "--n", "0.5"]).status.code(), Some(2));
    assert_eq!(nongauss(&["measure", "--family", "fock"]).status.code(), Some(2));
    assert_eq!(nongauss(&["swap-sim", "--state", "laser:1"]).status.code(), Some(2));
    assert_eq!(nongauss(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(nongauss(&["--help"]).status.code(), Some(0));
    let o = nongauss(&["measure", "--family", "cubic", "--param", "0.5", "--cutoff", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cutoff"));
}

#[test]
fn config_precedence_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"measure": {"family": "fock", "n": "1..2", "alpha": 1, "cutoff": 20}}"#).unwrap();
    let out = dir.path().join("out.csv");
    let c = cfg.to_str().unwrap();
    let o = nongauss(&["measure", "--config", c, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r = rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(r.len(), 3);
    assert_eq!(r[1][3], "1");

    // flags override the file
    let o = nongauss(&["measure", "--config", c, "--alpha", "2", "--n", "3"]);
    let r = rows(&stdout(&o));
    assert_eq!((r.len(), r[1][1].as_str(), r[1][3].as_str()), (2, "3", "2"));

    std::fs::write(&cfg, r#"{"measure": {"famly": "fock"}}"#).unwrap();
    assert_eq!(nongauss(&["measure", "--config", c]).status.code(), Some(2));
    assert_eq!(nongauss(&["measure", "--config", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn thread_count_from_environment() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_nongauss"))
            .args(["negativity", "--x", "0.5,1,2"])
            .env("NONGAUSS_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let auto = run("0");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, auto.stdout);
    assert_eq!(run("many").status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let o = nongauss(&["selftest"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    assert!(!text.contains("FAIL"));
}
