use std::process::{Command, Output};

use serde_json::Value;

fn degdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degdual")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn without_timing(out: &Output) -> Value {
    let mut v = report(out);
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn exit_codes_follow_verdicts() {
    assert_eq!(degdual(&["dual-dim", "--poly", "det:3"]).status.code(), Some(0));
    assert_eq!(degdual(&["check-eqn", "--poly", "det:4", "--k", "5", "--trials", "2"]).status.code(), Some(1));
    assert_eq!(degdual(&["dual-dim", "--poly", "x0^2 +"]).status.code(), Some(2));
    assert_eq!(degdual(&["dual-dim", "--poly", "det:zz"]).status.code(), Some(2));
    assert_eq!(degdual(&["dual-dim"]).status.code(), Some(2));
    assert_eq!(degdual(&["dual-dim", "--expect", "5", "--poly", "det:3"]).status.code(), Some(1));
}

#[test]
fn sampling_exhaustion_exits_with_three() {
    // 10007 is 3 mod 4, so x0^2 + x1^2 has no nonzero points there
    let out = degdual(&["dual-dim", "--poly", "x0^2 + x1^2", "--prime", "10007"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("10007"));
}

#[test]
fn reports_are_byte_stable_apart_from_timing() {
    for args in [
        &["--json", "dual-dim", "--poly", "perm:3", "--seed", "9"][..],
        &["--json", "check-eqn", "--poly", "perm:3", "--k", "6", "--trials", "3"][..],
        &["--json", "gct", "--check", "tangent", "--poly", "perm:3"][..],
        &["--json", "characters", "--cdim", "--n", "4"][..],
    ] {
        let a = without_timing(&degdual(args));
        let b = without_timing(&degdual(args));
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

#[test]
fn config_is_echoed() {
    let r = report(&degdual(&["--json", "dual-dim", "--poly", "det:3"]));
    assert_eq!(r["config"]["seed"], 0);
    assert_eq!(r["config"]["trials"], 8);
    assert_eq!(r["config"]["primes"], serde_json::json!([10007, 32003]));
    assert_eq!(r["verdict"], "PASS");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert!(r["polynomial"].as_str().unwrap().starts_with("x0*x4*x8"));
    let r = report(&degdual(&["--json", "dual-dim", "--poly", "det:3", "--seed", "4", "--prime", "101", "--prime", "103"]));
    assert_eq!(r["config"]["seed"], 4);
    assert_eq!(r["config"]["primes"], serde_json::json!([101, 103]));
}

#[test]
fn documented_examples() {
    let r = report(&degdual(&["--json", "dual-dim", "--poly", "perm:3"]));
    assert_eq!(r["values"]["dual_dim"], 7);
    let r = report(&degdual(&["--json", "dual-dim", "--poly", "x0^2+x1^2+x2^2"]));
    assert_eq!(r["values"]["dual_dim"], 1);
    let out = degdual(&["--json", "check-eqn", "--poly", "padded:perm:2:3", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&degdual(&["--json", "characters", "--lambda", "2,1", "--class", "3"]));
    assert_eq!(r["values"]["character"], -1);
    let r = report(&degdual(&["--json", "characters", "--cdim", "--n", "4"]));
    assert_eq!(r["values"]["class_function_dim"], 2);
    let r = report(&degdual(&["--json", "gct", "--check", "curve", "--n", "3"]));
    assert_eq!((r["verdict"].as_str(), r["values"]["scalar"].as_str()), (Some("PASS"), Some("1")));
}

#[test]
fn file_input_and_output() {
    let dir = std::env::temp_dir().join(format!("degdual-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("quadric.txt");
    std::fs::write(&input, "x0*x1 - x2*x3\n").unwrap();
    let output = dir.join("report.json");
    let out = degdual(&["dual-dim", "--poly", input.to_str().unwrap(), "--output", output.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("dual_dim") && text.contains("PASS"));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(saved["values"]["dual_dim"], 2);
    assert_eq!(saved["config"]["output"], output.to_str().unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn repeated_factor_is_flagged() {
    let r = report(&degdual(&["--json", "check-eqn", "--poly", "x0^2*x1^2 - 2*x0*x1*x2*x3 + x2^2*x3^2", "--k", "1"]));
    assert!(r["warnings"].as_array().unwrap().iter().any(|w| w.as_str().unwrap().contains("repeated factor")));
}
