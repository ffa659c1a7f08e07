use std::process::{Command, Output};

use serde_json::Value;

fn ldirc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ldirc"))
        .args(args)
        .output()
        .expect("run ldirc")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

#[test]
fn capacity_reports_binding_bound() {
    let o = ldirc(&["capacity", "--nd", "4", "--nc", "2", "--nr", "3", "--ns", "5"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["capacity"], 7);
    assert_eq!(v["bounds"]["binding"], "source-excess");
}

#[test]
fn capacity_equal_gain_and_relay_off() {
    let v = json(&ldirc(&["capacity", "--nd", "3", "--nc", "3", "--nr", "5", "--ns", "4"]));
    assert_eq!(v["capacity"], 4);
    let v = json(&ldirc(&["capacity", "--nd", "2", "--nc", "1", "--nr", "0", "--ns", "3"]));
    assert_eq!(v["capacity"], 2);
}

#[test]
fn simulate_is_deterministic() {
    let args = [
        "simulate", "--scheme", "II", "--nd", "3", "--nc", "3", "--nr", "5", "--ns", "4", "-n", "4", "--seed", "7",
    ];
    let (a, b) = (ldirc(&args), ldirc(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    let v = json(&a);
    assert_eq!(v["success"], true);
    assert_eq!(v["asymptotic_rate"], "4");
}

#[test]
fn simulate_wi1_example() {
    let o = ldirc(&[
        "simulate", "--scheme", "WI1", "--nd", "3", "--nc", "1", "--nr", "2", "--ns", "5", "-n", "10",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["success"], true);
    assert_eq!(v["asymptotic_rate"], "6");
}

#[test]
fn simulate_rejects_wrong_scheme() {
    let o = ldirc(&[
        "simulate", "--scheme", "SI", "--nd", "3", "--nc", "1", "--nr", "2", "--ns", "5",
    ]);
    assert!(!o.status.success());
}

#[test]
fn verify_empty_range_exits_zero() {
    let o = ldirc(&["verify", "--nd", "3-2"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["grid_size"], 0);
}

#[test]
fn verify_small_grid() {
    let o = ldirc(&[
        "verify", "--max", "3", "--filter", "nc<ns", "--check", "sandwich", "--check", "simulate",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["failures"].as_array().unwrap().is_empty()));
}

#[test]
fn curve_writes_file() {
    let dir = std::env::temp_dir().join(format!("ldirc-curve-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.csv");
    let o = ldirc(&[
        "curve",
        "--beta",
        "2",
        "--gamma",
        "3",
        "--alpha-from",
        "1",
        "--step",
        "1/2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "alpha,d_irc,d_ic,binding");
    assert!(rows.iter().any(|r| r.starts_with("1.5,3.5,")));
    assert!(rows.iter().any(|r| r.starts_with("2,3,")));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn curve_to_missing_directory_fails() {
    let o = ldirc(&["curve", "--beta", "2", "--gamma", "3", "--out", "/nonexistent/dir/c.csv"]);
    assert!(!o.status.success());
}

#[test]
fn gdof_and_subchannels() {
    let v = json(&ldirc(&["gdof", "--alpha", "3/2", "--beta", "2", "--gamma", "3"]));
    assert_eq!(v["d_irc"], "7/2");
    assert_eq!(v["d_ic"], "3/2");
    let o = ldirc(&[
        "subchannels",
        "--power",
        "1048576",
        "--hd2",
        "1",
        "--hc2",
        "1",
        "--hr2",
        "1",
        "--hs2",
        "0.0625",
        "-N",
        "5",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["n_s"], 4);
    assert_eq!(v["r_s"], 1.0);
}
