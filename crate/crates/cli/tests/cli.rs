use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kirbykit"))
        .args(args)
        .env("KIRBYKIT_CORPUS", corpus())
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{:?}: {}\n{}", args, e, String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn file(name: &str) -> String {
    corpus().join(name).to_str().unwrap().to_string()
}

#[test]
fn invariants_of_corpus_files() {
    let (code, v) = json(&["invariants", &file("cusp.kby")]);
    assert_eq!(code, 0);
    let inv = &v["invariants"];
    assert_eq!((inv["chi"].as_i64(), inv["sigma"].as_i64()), (Some(2), Some(0)));
    assert_eq!(inv["boundary_h1"]["free_rank"], 1);
    let (_, v) = json(&["invariants", &file("fishtail.kby")]);
    assert_eq!(v["invariants"]["h1"]["free_rank"], 1);
    assert_eq!(v["invariants"]["boundary_h1"]["free_rank"], 2);
    let (_, v) = json(&["invariants", &file("s4_two_fishtails.kby")]);
    assert_eq!(v["invariants"]["chi"], 2);
    assert!(v["invariants"]["boundary_h1"].is_null());
}

#[test]
fn text_output() {
    let out = run(&["--format", "text", "invariants", &file("torus.kby")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("chi          = 0"), "{}", text);
    assert!(text.contains("H1(boundary) = Z^3"), "{}", text);
}

#[test]
fn checking_corpus_scripts() {
    for name in ["figure7_to_T3.script", "fig12_to_fig11.script", "cusp_to_fishtail.script"] {
        let (code, v) = json(&["check", &file(name)]);
        assert_eq!(code, 0, "{}", name);
        assert_eq!(v["verdict"], "pass", "{}", name);
    }
    let (code, v) = json(&["check", "--strict", &file("figure7_to_T3.script")]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("pass-with-assertions")));
    assert!(!v["asserted"].as_array().unwrap().is_empty());
    let (code, v) = json(&["--allow-assertions", "false", "check", &file("figure7_to_T3.script")]);
    assert_eq!((code, v["verdict"].as_str()), (1, Some("fail")));
}

#[test]
fn illegal_and_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(corpus().join("fishtail.kby"), dir.path().join("fishtail.kby")).unwrap();
    let script = dir.path().join("bad.script");
    std::fs::write(
        &script,
        r#"{"start":"fishtail.kby","moves":[{"op":"slide","handle":"d1","over":"h1","sign":1}]}"#,
    )
    .unwrap();
    let (code, v) = json(&["check", script.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(v["error"].as_str().unwrap().contains("step 1"), "{}", v);

    let broken = dir.path().join("broken.kby");
    std::fs::write(&broken, r#"{"handles":[{"id":"h","kind":"framed","framing":"x"}]}"#).unwrap();
    let (code, v) = json(&["invariants", broken.to_str().unwrap()]);
    assert_eq!((code, v["exit_code"].as_i64()), (2, Some(2)));
    let (code, _) = json(&["invariants", dir.path().join("missing.kby").to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn surgery_writes_a_structure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cusp_K.kby");
    let (code, v) = json(&["surgery", &file("cusp_nbhd.kby"), "--knot", "trefoil", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{}", v);
    assert_eq!(v["invariants_equal"], true);
    assert_eq!(v["before"], v["after"]);
    let (code, w) = json(&["invariants", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(w["invariants"], v["after"]);

    let out2 = dir.path().join("t.kby");
    let args = ["surgery", &file("torus.kby"), "--knot", "trefoil", "--a", "a", "--b", "b", "--t", "t", "--out"];
    let (code, _) = json(&[&args[..], &[out2.to_str().unwrap()]].concat());
    assert_eq!(code, 0);

    let (code, v) = json(&["surgery", &file("cusp_nbhd.kby"), "--knot", "figure-eight", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(v["error"].as_str().unwrap().contains("figure-eight"));
}

#[test]
fn alexander_command() {
    for (k, expected) in [("trefoil", "t - 1 + t^-1"), ("unknot", "1"), ("granny", "t^2 - 2*t + 3 - 2*t^-1 + t^-2")] {
        let (code, v) = json(&["alexander", k]);
        assert_eq!(code, 0);
        assert_eq!(v["alexander"], expected, "{}", k);
        assert_eq!(v["agreement"], true);
    }
    let (code, v) = json(&["alexander", &file("figure-eight.knot")]);
    assert_eq!((code, v["alexander"].as_str()), (0, Some("-t + 3 - t^-1")));
    let (code, _) = json(&["alexander", "stevedore"]);
    assert_eq!(code, 1);
}

#[test]
fn sw_command() {
    let (code, v) = json(&["sw", "K3", "--knot", "trefoil"]);
    assert_eq!(code, 0);
    assert_eq!(v["sw"], "exp(2T) - 1 + exp(-2T)");
    assert_eq!(v["fake_pair"], true);
    let (_, v) = json(&["sw", "K3", "--knot", "unknot"]);
    assert_eq!((v["sw"].as_str(), v["fake_pair"].as_bool()), (Some("1"), Some(false)));
    let (_, v) = json(&["sw", &file("k3.sw"), "--knot", "figure-eight"]);
    assert_eq!(v["sw"], "-exp(2T) + 3 - exp(-2T)");
    let (_, v) = json(&["sw", "K3", "--knot", "trefoil", "--class", "-1"]);
    assert_eq!(v["sw"], "exp(2T) - 1 + exp(-2T)");
    let (code, _) = json(&["sw", "K3", "--knot", "trefoil", "--class", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn corpus_test_command() {
    let (code, v) = json(&["corpus-test", "--dir", corpus().to_str().unwrap()]);
    assert_eq!(code, 0, "{}", v);
    let criteria = v["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 7);
    assert!(criteria.iter().all(|c| c["passed"] == true));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["check", &file("figure9_to_figure7.script")];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["sw", "K3", "--knot", "granny"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
