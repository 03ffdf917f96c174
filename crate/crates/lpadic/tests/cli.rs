use std::process::{Command, Output};

use serde_json::Value;

fn lpadic(args: &[&str], config: Option<&std::path::Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lpadic"));
    cmd.args(args).env_remove("LPADIC_CONFIG");
    if let Some(c) = config {
        cmd.env("LPADIC_CONFIG", c);
    }
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn kl_reports_exact_value_and_meta() {
    let out = lpadic(&["kl", "--p", "5", "--chi", "omega^2", "--s", "-1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], "1/3");
    assert_eq!(v["padic"]["valuation"], 0);
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["meta"]["seed"], 0);
}

#[test]
fn output_is_byte_identical() {
    let args = ["stickelberger", "--p", "5", "--chi", "omega^2", "-N", "4", "-M", "8", "--seed", "11"];
    let a = lpadic(&args, None);
    let b = lpadic(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["meta"]["calibration"]["convention"], "T -> (1+T)^-1 - 1");
    assert_eq!(v["meta"]["seed"], 11);
}

#[test]
fn exit_codes() {
    let usage = lpadic(&["kl", "--chi", "omega^2"], None);
    assert_eq!(usage.status.code(), Some(2));
    let math = lpadic(&["kl", "--p", "5", "--chi", "omega", "--s", "-1"], None);
    assert_eq!(math.status.code(), Some(1));
    assert!(json(&math)["error"].as_str().unwrap().contains("odd"));
    let split = lpadic(&["gross-rhs", "--p", "7", "--chi", "omega^2", "--disc", "-4", "-N", "3", "-M", "8"], None);
    assert_eq!(split.status.code(), Some(1));
    let law = lpadic(&["gross-rhs", "--p", "5", "--chi", "omega^2", "--disc", "-4", "-N", "6", "-M", "4"], None);
    assert_eq!(law.status.code(), Some(2));
}

#[test]
fn config_file_sets_defaults_and_flags_override() {
    let dir = std::env::temp_dir().join(format!("lpadic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.toml");
    std::fs::write(&path, "p = 7\nprecision = 4\nseed = 3\n").unwrap();
    let v = json(&lpadic(&["coleman", "--c", "2", "--k", "3"], Some(&path)));
    assert_eq!(v["meta"]["config"]["p"], 7);
    assert_eq!(v["meta"]["config"]["precision"], 4);
    assert_eq!(v["padic"]["absolute_precision"], 4);
    let v = json(&lpadic(&["coleman", "--c", "2", "--k", "3", "--p", "11"], Some(&path)));
    assert_eq!(v["meta"]["config"]["p"], 11);
    std::fs::write(&path, "prime = 7\n").unwrap();
    assert_eq!(lpadic(&["coleman", "--c", "2", "--k", "3"], Some(&path)).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn signs_and_quadfield() {
    let v = json(&lpadic(&["signs", "--region", "bal", "--finite-prod", "+1"], None));
    assert_eq!(v["epsilon"], -1);
    assert_eq!(v["vanishing"], serde_json::json!(["bal"]));
    let v = json(&lpadic(&["signs", "--k", "2", "--l", "2", "--eps-f", "1"], None));
    assert_eq!((v["triple"].as_i64(), v["adjoint"].as_i64()), (Some(-1), Some(-1)));
    let v = json(&lpadic(&["quadfield", "--disc", "-4", "--p", "5", "-N", "3"], None));
    assert_eq!(v["h"], 1);
    assert_eq!(v["omega"], 4);
    assert_eq!(v["B1"], "-1/2");
    assert_eq!(v["u"], serde_json::json!([4, 1]));
}

#[test]
fn leading_term_and_euler() {
    let input = r#"{"ring":{"p":2,"a":2,"b":1},"matrix":[[2]]}"#;
    let v = json(&lpadic(&["leading-term", "--input", input], None));
    assert_eq!(v["fitt_stark"], "equal");
    assert_eq!(v["fitt0"], serde_json::json!(["2"]));
    let input = r#"{"kind":"adjoint","f":{"p":5,"k":2,"alpha":"2","beta":"5/2"}}"#;
    let v = json(&lpadic(&["euler", "--input", input], None));
    assert_eq!(v["value"], "-3/16");
    let bad = lpadic(&["euler", "--input", r#"{"kind":"nonsense"}"#], None);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_single_suite() {
    let out = lpadic(&["verify", "--suite", "signs"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
    assert_eq!(lpadic(&["verify", "--suite", "nope"], None).status.code(), Some(2));
}
