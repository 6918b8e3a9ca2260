use std::path::PathBuf;
use std::process::Command;

use ffframes_core::cli::run_cli_with;
use serde_json::{json, Value};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str], stdin: &str) -> (i32, Value, String) {
    let mut argv = vec!["ffframes"];
    argv.extend_from_slice(args);
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli_with(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    let report = serde_json::from_slice(&out).unwrap_or(Value::Null);
    (code, report, String::from_utf8(err).unwrap())
}

fn run_file(cmd: &str, file: &str, extra: &[&str]) -> (i32, Value) {
    let path = data(file);
    let mut args = vec![cmd, "--input", path.as_str()];
    args.extend_from_slice(extra);
    let (code, report, _) = run(&args, "");
    (code, report)
}

#[test]
fn etf_hesse_holds() {
    let (code, r) = run_file("etf", "hesse.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], json!(true));
    assert_eq!((&r["a"], &r["b"], &r["c"]), (&json!([2, 0]), &json!([1, 0]), &json!([1, 0])));
    assert_eq!(r["gerzon"]["saturated"], json!(true));
}

#[test]
fn etf_welchweird_fails() {
    let (code, r) = run_file("etf", "welchweird.json", &[]);
    assert_eq!(code, 1);
    assert_eq!(r["welch_holds"], json!(true));
    let reasons: Vec<&str> = r["failure_reasons"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(reasons.contains(&"not tight"));
    let skew = r#"{"field": {"p": 7}, "vectors": [[1, 0, 1], [0, 1, 1]]}"#;
    let (code, r, _) = run(&["etf", "--input", "-"], skew);
    assert_eq!(code, 1);
    assert_eq!(r["failure_reasons"], json!(["not equiangular"]));
}

#[test]
fn design_from_block_file() {
    let path = data("realsimps.json");
    let (code, r, _) = run(&["design", "--blocks", &path, "--t", "2"], "");
    assert_eq!(code, 0);
    assert_eq!((&r["points"], &r["k"], &r["lambda"], &r["t"]), (&json!(10), &json!(4), &json!(2), &json!(2)));
    let bare = r["blocks"].to_string();
    let (code, again, _) = run(&["design", "--input", "-"], &bare);
    assert_eq!(code, 0);
    assert_eq!(again["lambda"], json!(2));
}

#[test]
fn reports_round_trip() {
    for file in ["hesse.json", "welchweird.json", "f11etf.json"] {
        let (code, r) = run_file("etf", file, &[]);
        let (code2, r2, _) = run(&["etf", "--input", "-"], &r.to_string());
        assert_eq!(code, code2);
        assert_eq!(r["verdict"], r2["verdict"]);
        assert_eq!(r["failure_reasons"], r2["failure_reasons"]);
    }
    let (_, d) = run_file("design", "nonsquaresimps.json", &[]);
    let (_, d2, _) = run(&["design", "--input", "-"], &d.to_string());
    assert_eq!(d, d2);

    let (code, tg) = run_file("twograph", "petersen_f13.json", &["--beta", "1"]);
    assert_eq!(code, 0);
    assert_eq!(tg["params"]["regular"], json!(true));
    let bare = json!({ "n": tg["n"], "coherent": tg["coherent"] });
    let (code2, tg2, _) = run(&["twograph", "--input", "-"], &bare.to_string());
    assert_eq!(code2, 0);
    assert_eq!(tg["params"], tg2["params"]);
}

#[test]
fn equiv_reports_obstruction() {
    let (code, r) = run_file("equiv", "cycle_pair_f5.json", &["--strategy", "general"]);
    assert_eq!(code, 1);
    assert_eq!(r["obstruction"]["kind"], json!("m_product"));
    assert_eq!(r["obstruction"]["indices"].as_array().unwrap().len(), 4);
    let (code, _, err) = run(&["equiv", "--input", &data("cycle_pair_f5.json"), "--strategy", "triples"], "");
    assert_eq!(code, 2);
    assert!(err.contains("strategy precondition"));
}

#[test]
fn incoherence_and_gamma() {
    let (code, r) = run_file("incoherence", "f11etf.json", &["--beta", "5"]);
    assert_eq!(code, 0);
    assert_eq!((&r["inc"], &r["inc_neg"]), (&json!(3), &json!(2)));
    let (code, g) = run_file("gamma", "petersen_f13.json", &["--beta", "1"]);
    assert_eq!(code, 0);
    assert_eq!(g["designs"]["sum_identity_holds"], json!(true));
    let (code, _, err) = run(&["incoherence", "--input", &data("f11etf.json")], "");
    assert_eq!(code, 2);
    assert!(err.contains("beta"));
}

#[test]
fn realize_naimark_simplex_field() {
    let (code, r) = run_file("realize", "f11gram.json", &[]);
    assert_eq!((code, &r["gram_matches"]), (0, &json!(true)));
    let (code, r) = run_file("naimark", "f11etf.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(r["complement_dim"], json!(1));
    assert_eq!(r["discriminant_law"], json!(true));
    let (code, r) = run_file("simplex", "weridsimplices.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(r["by_size"], json!({ "3": 30 }));
    let (code, r) = run_file("field", "f25.json", &[]);
    assert_eq!(code, 0);
    assert_eq!((&r["order"], &r["case"]), (&json!(25), &json!("U")));
}

#[test]
fn verify_and_tight() {
    let (code, r) = run_file("verify", "weridsimplices.json", &[]);
    assert_eq!(code, 0);
    assert_eq!(r["status"]["tight"], json!(true));
    assert_eq!(r["equiangular"], json!({ "a": 0, "b": 1 }));
    let (code, _) = run_file("tight", "welchweird.json", &[]);
    assert_eq!(code, 1);
}

#[test]
fn search_and_budget() {
    let (code, r) = run_file("search", "search_f11.json", &["--workers", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["n"], json!(3));
    let frame = &r["systems"][0];
    let (code, etf, _) = run(&["etf", "--input", "-"], &frame.to_string());
    assert_eq!(code, 0);
    assert_eq!(etf["c"], json!(7));

    let mut spec: Value = serde_json::from_str(&std::fs::read_to_string(data("search_f11.json")).unwrap()).unwrap();
    spec["budget"] = json!(10);
    let (code, _, err) = run(&["search", "--input", "-"], &spec.to_string());
    assert_eq!(code, 3);
    assert!(err.contains("budget"));
}

#[test]
fn budget_env_overrides() {
    let out = Command::new(env!("CARGO_BIN_EXE_ffframes"))
        .args(["search", "--input", &data("search_f3_gerzon.json")])
        .env("FFF_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_file_and_bad_input() {
    let dir = std::env::temp_dir().join(format!("ffframes-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let (code, stdout, _) = run(&["etf", "--input", &data("f11etf.json"), "--output", out.to_str().unwrap()], "");
    assert_eq!(code, 0);
    assert_eq!(stdout, Value::Null);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written["verdict"], json!(true));
    std::fs::remove_dir_all(&dir).unwrap();

    assert_eq!(run(&["etf", "--input", "-"], "{not json").0, 2);
    assert_eq!(run(&["etf", "--input", "-"], r#"{"field": {"p": 4}, "vectors": [[1]]}"#).0, 2);
    assert_eq!(run(&["etf", "--input", "/nonexistent/file.json"], "").0, 2);
    assert_eq!(run(&["bogus"], "").0, 2);
    assert_eq!(run(&["--help"], "").0, 0);
}
