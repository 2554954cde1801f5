use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn wittkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittkit")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({}): {}", e, String::from_utf8_lossy(&out.stdout))
    })
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wittkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn witt_polys_p2() {
    let out = wittkit(&["witt", "polys", "--p", "2", "--n", "2"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["sum"][1], "X2 + Y2 - X1*Y1");
    assert_eq!(v["ghost_compatible"], true);
}

#[test]
fn witt_add_from_file() {
    let path = scratch("add.json");
    let z = |c: i64| format!(r#"{{"p":2,"n":1,"vars":1,"terms":[{{"e":[1],"c":{}}}]}}"#, c);
    let zero = r#"{"p":2,"n":1,"vars":1,"terms":[]}"#;
    let x = format!(r#"{{"p":2,"coords":[{},{}]}}"#, z(1), zero);
    std::fs::write(&path, format!(r#"{{"x":{},"y":{}}}"#, x, x)).unwrap();
    let out = wittkit(&["witt", "op", "--op", "add", "--in", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    // [z] + [z] = (0, z^2) in W_2(F_2[z])
    assert_eq!(v["coords"][0]["terms"].as_array().unwrap().len(), 0);
    assert_eq!(v["coords"][1]["terms"][0]["e"][0], 2);
}

#[test]
fn weyl_normal_form() {
    let out = wittkit(&["weyl", "nf", "--p", "3", "--word", "d0^[2] z0^3"]);
    assert!(out.status.success());
    let v = json_of(&out);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["e"][0], 3);
    assert_eq!(terms[0]["order"][0], 2);
}

#[test]
fn wdiff_verify_passes() {
    let out = wittkit(&["wdiff", "verify", "--relation", "frob", "--p", "2", "--n", "1", "--r", "2", "--samples", "10"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json_of(&out);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert!(v["cases"].as_u64().unwrap() > 0);
}

#[test]
fn cohomology_line_bundle() {
    let out = wittkit(&["cohomology", "line-bundle", "--p", "2", "--n", "2", "--d", "1", "--a", "-2"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["degrees"][1]["length"], 4);
    assert_eq!(v["degrees"][0]["length"], 0);
}

#[test]
fn sweep_defaults_to_table() {
    let out = wittkit(&["cohomology", "sweep", "--p", "3", "--n", "1", "--d", "2", "--a-min", "-4", "--a-max", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("agrees") && !text.contains("DIFFERS"));
}

#[test]
fn steinberg_rank_gl3() {
    let out = wittkit(&["steinberg", "--q", "2", "--dim", "3", "--I", ""]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["free"], true);
    // the Steinberg module of GL_3(F_2) has rank q^3 = 8
    assert_eq!(v["steinberg_rank"], 8);
    // maximal parabolic: the 7 planes of F_2^3 minus the trivial summand
    let out = wittkit(&["steinberg", "--q", "2", "--dim", "3", "--I", "0", "--ring", "Zpn", "--p", "2", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(json_of(&out)["steinberg_rank"], 6);
}

#[test]
fn localcoh_generate() {
    let out = wittkit(&["localcoh", "generate", "--p", "2", "--d", "2", "--j", "1", "--bound", "4"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["missing"].as_array().unwrap().len(), 0);
    assert_eq!(v["reached"], v["total"]);
}

#[test]
fn verify_is_reproducible_and_writes_out() {
    let strip = |mut v: Value| {
        for c in v["cases"].as_array_mut().unwrap() {
            c["millis"] = Value::Null;
        }
        v
    };
    let args = ["verify", "weyl", "--p", "2", "--seed", "7", "--samples", "30"];
    let a = wittkit(&args);
    let b = wittkit(&args);
    assert!(a.status.success());
    assert_eq!(strip(json_of(&a)), strip(json_of(&b)));
    assert_eq!(json_of(&a)["config"]["seed"], 7);

    let dir = scratch("outdir");
    std::fs::create_dir_all(&dir).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_wittkit"))
        .args(["verify", "globality", "--p", "2", "--out", "report.json"])
        .env("WITTKIT_OUT_DIR", &dir)
        .output()
        .unwrap();
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["suite"], "globality");
    // exit status mirrors the report
    assert_eq!(out.status.success(), report["passed"] == true);
}

#[test]
fn errors_exit_2() {
    assert_eq!(wittkit(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(wittkit(&["witt", "polys", "--p", "4", "--n", "2"]).status.code(), Some(2));
    assert_eq!(wittkit(&["steinberg", "--q", "2", "--dim", "3", "--I", "0,1"]).status.code(), Some(2));
}
