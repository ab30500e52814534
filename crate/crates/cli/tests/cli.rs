use std::process::Command;

fn modecert(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_modecert")).args(args).output().expect("binary runs")
}

#[test]
fn convergence_run_reports_json() {
    let out = modecert(&["convergence", "1", "1", "0", "2", "--n-tail", "600"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["final_distance"].as_f64().unwrap() < 0.01);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(modecert(&["convergence", "1", "1", "-1", "0"]).status.code(), Some(2));
    assert_eq!(modecert(&["verify", "--lambda-grid", "x"]).status.code(), Some(2));
    assert_eq!(modecert(&["case", "0", "7"]).status.code(), Some(2));
}

#[test]
fn case_0_1_is_certified() {
    let out = modecert(&["case", "0", "1", "--lambda-grid", "0,2i"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
