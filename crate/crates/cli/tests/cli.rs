use std::process::{Command, Output};

fn glab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glab")).args(args).output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn span_theta_plus_g3() {
    let o = glab(&["--json", "span", "--g", "3", "--eps", "+"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["expected"], 21);
    assert_eq!(v[0]["got"], 21);
}

#[test]
fn unknown_flag_is_usage_error() {
    let o = glab(&["span", "--g", "2", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(glab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn bad_values_fail_without_panicking() {
    let o = glab(&["honda", "--lambda", "2", "--s", "0,0,0,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert_eq!(glab(&["curve", "--coeffs", "1,2", "--what", "params"]).status.code(), Some(1));
}

#[test]
fn honda_reports() {
    let o = glab(&["honda", "--lambda", "-1", "--s", "1,0,1,1", "--what", "self-dual"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("honda.self_dual PASS"));
    let o = glab(&["honda", "--lambda", "3", "--s", "1,1,0,1", "--what", "dual"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn points_p2() {
    let o = glab(&["points", "--what", "conductor"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("got 6"));
    assert!(stdout(&glab(&["points", "--what", "sqrt2"])).contains("got 11"));
}

#[test]
fn curve_x5() {
    for what in ["params", "kummer"] {
        let o = glab(&["curve", "--coeffs", "0,0,0,0,0,1", "--what", what]);
        assert!(o.status.success(), "{}", stdout(&o));
    }
}

#[test]
fn table1_rows() {
    let o = glab(&["global", "--what", "table1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.contains(" PASS ")).count(), 9);
}

#[test]
fn output_is_deterministic() {
    let a = glab(&["--json", "global", "--what", "table1"]);
    let b = glab(&["--json", "global", "--what", "table1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fixtures() {
    let v: serde_json::Value = serde_json::from_slice(&glab(&["emit-fixture", "table1"]).stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 9);
    let v: serde_json::Value = serde_json::from_slice(&glab(&["emit-fixture", "params32"]).stdout).unwrap();
    assert_eq!(v["params"].as_array().unwrap().len(), 32);
    let v: serde_json::Value = serde_json::from_slice(&glab(&["emit-fixture", "curves32"]).stdout).unwrap();
    assert_eq!(v["curves"].as_array().unwrap().len(), 32);
    assert_eq!(glab(&["emit-fixture", "nope"]).status.code(), Some(2));
}
