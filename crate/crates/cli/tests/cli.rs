use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn subriem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subriem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json_of(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--json", "-"]);
    let o = subriem(&a);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}{}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    });
    (code(&o), v)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn flat_heisenberg_invariants() {
    let (c, v) = json_of(&["invariants", "--builtin", "heisenberg3-riem"]);
    assert_eq!(c, 0);
    let r = &v["results"];
    assert_eq!(r["kappa_dim3"], "0");
    assert!(r["h"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|row| row.as_array().unwrap())
        .all(|e| e == "0"));
    assert_eq!(r["symmetric_case"]["flat"], true);
    assert_eq!(r["reeb"], serde_json::json!(["0", "0", "1"]));
    assert_eq!(v["plan"]["samples"], 20);
    assert_eq!(v["plan"]["tolerance"], 1e-9);
}

#[test]
fn hyperbolic_lift_kappa() {
    let (c, v) = json_of(&["invariants", "--builtin", "hyperbolic-lift"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["kappa_dim3"], "-1");
}

#[test]
fn flat_curvature_decomposition() {
    let (c, v) = json_of(&["curvature", "--builtin", "heisenberg3-riem", "--c", "1"]);
    assert_eq!(c, 0);
    let d = &v["results"]["decomposition"][0];
    assert_eq!(d["kappa_c"], "-3/4");
    assert_eq!(d["residual"]["kind"], "symbolic_zero");
    assert_eq!(
        v["results"]["connection"]["agreement"]["failing"],
        serde_json::json!([])
    );
    let (c, _) = json_of(&[
        "curvature",
        "--builtin",
        "twisted-heisenberg",
        "--c",
        "exp(z)",
    ]);
    assert_eq!(c, 0);
}

#[test]
fn einstein_weyl_examples() {
    let (c, v) = json_of(&[
        "ew",
        "--builtin",
        "heisenberg3-lor",
        "--epsilon",
        "1",
        "--c",
        "2",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["residual"]["einstein_weyl"], true);
    let (c, v) = json_of(&["ew", "--builtin", "hyperbolic-lift", "--epsilon", "1"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["predicted_c"]["value"], "-1/2");
    let (c, v) = json_of(&["ew", "--builtin", "heisenberg3-riem", "--epsilon", "1"]);
    assert_eq!(c, 1);
    assert_eq!(v["results"]["predicted_c"]["status"], "no_solution");
    // 1/10 away from the predicted value
    let (c, v) = json_of(&[
        "ew",
        "--builtin",
        "hyperbolic-lift",
        "--epsilon",
        "1",
        "--c",
        "-2/5",
    ]);
    assert_eq!(c, 1);
    let worst = &v["results"]["residual"]["entries"]["worst"];
    assert_eq!(worst["kind"], "nonzero");
    assert!(worst["witness"]["point"].is_array());
}

#[test]
fn isometry_suite_case2() {
    let (c, v) = json_of(&["isometry", "--builtin", "heisenberg5-case2"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["algebra"]["rank"], 7);
    assert_eq!(v["results"]["left_translation"]["verdict"]["passed"], true);
}

#[test]
fn shear_fails_with_witness() {
    let args = [
        "isometry",
        "--builtin",
        "heisenberg3-riem",
        "--map",
        "x; y + x; z",
        "--inverse",
        "x; y - x; z",
    ];
    let (c, v) = json_of(&args);
    assert_eq!(c, 1);
    let m = &v["results"]["verdict"]["metric_preserved"];
    assert_eq!(m["worst"]["kind"], "nonzero");
    let w = &m["worst"]["witness"];
    assert_eq!(w["point"].as_array().unwrap().len(), 3);
    assert_eq!(m["worst"]["samples_used"], 20);
    // a different seed moves the witness but not the verdict
    let mut other = args.to_vec();
    other.extend(["--seed", "77"]);
    let (c2, v2) = json_of(&other);
    assert_eq!(c2, 1);
    assert_ne!(
        v2["results"]["verdict"]["metric_preserved"]["worst"]["witness"],
        *w
    );
}

#[test]
fn ambiguous_family_line_reports_both_readings() {
    let (c, v) = json_of(&[
        "isometry",
        "--builtin",
        "heisenberg5-case1",
        "--family",
        "1:4",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["literal"]["passed"], false);
    assert_eq!(v["results"]["corrected"]["passed"], true);
    let (c, _) = json_of(&[
        "isometry",
        "--builtin",
        "heisenberg5-case1",
        "--family",
        "1:4",
        "--reading",
        "literal",
    ]);
    assert_eq!(c, 1);
}

#[test]
fn lift_bases() {
    for base in ["euclidean", "hyperbolic", "spherical"] {
        let (c, v) = json_of(&["lift", "--base", base]);
        assert_eq!(c, 0, "{base}");
        assert_eq!(
            v["results"]["kappa_of_lift"],
            v["results"]["expected_curvature"]
        );
    }
}

#[test]
fn schema_and_usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let short = write(
        dir.path(),
        "short.json",
        r#"{"chart": {"coords": ["x","y","z"], "domain": {"x":[-1,1],"y":[-1,1],"z":[-1,1]}},
            "frame": [["1","0"],["0","1","x/2"]], "signature": [1,1]}"#,
    );
    let o = subriem(&["invariants", "--structure", &short]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema error"));

    let flat = write(
        dir.path(),
        "flat.json",
        r#"{"chart": {"coords": ["x","y","z"], "domain": {"x":[-1,1],"y":[-1,1],"z":[-1,1]}},
            "frame": [["1","0","0"],["0","1","0"]], "signature": [1,1]}"#,
    );
    let (c, v) = json_of(&["invariants", "--structure", &flat]);
    assert_eq!(c, 2);
    assert_eq!(v["error"]["kind"], "not_contact");

    assert_eq!(code(&subriem(&["invariants"])), 2);
    assert_eq!(code(&subriem(&["invariants", "--builtin", "nope"])), 2);
    assert_eq!(code(&subriem(&["frobnicate"])), 2);
    let unknown = write(
        dir.path(),
        "unknown.json",
        r#"{"chart": {"coords": ["x"], "domain": {"x":[-1,1]}}, "frame": [], "signature": [],
            "tasks": [{"command": "ew", "eps": "1"}]}"#,
    );
    assert_eq!(code(&subriem(&["run", "--structure", &unknown])), 2);
}

#[test]
fn document_tasks_and_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(
        dir.path(),
        "hyp.json",
        r#"{"chart": {"coords": ["x","y","z"], "domain": {"x":[-1,1],"y":[0.5,2],"z":[-1,1]}, "excluded": ["y"]},
            "frame": [["y","0","1"],["0","y","0"]], "signature": [1,1],
            "tasks": [{"command": "invariants"}, {"command": "ew", "epsilon": "1/2"},
                      {"command": "curvature", "c": "2"}]}"#,
    );
    let out = dir.path().join("report.json");
    let out_s = out.to_string_lossy().into_owned();
    let o = subriem(&["run", "--structure", &doc, "--json", &out_s]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let tasks = v["tasks"].as_array().unwrap();
    assert_eq!(tasks.len(), 3);
    assert_eq!(tasks[1]["results"]["predicted_c"]["value"], "-4/5");
    assert!(!text.contains("elapsed") && !text.contains("timing"));
    // keys are sorted at every level
    fn sorted(v: &Value) -> bool {
        match v {
            Value::Object(m) => {
                let keys: Vec<&String> = m.keys().collect();
                keys.windows(2).all(|w| w[0] < w[1]) && m.values().all(sorted)
            }
            Value::Array(a) => a.iter().all(sorted),
            _ => true,
        }
    }
    assert!(sorted(&v));
    let pos = |k: &str| text.find(&format!("\n  \"{k}\"")).unwrap();
    assert!(pos("command") < pos("engine") && pos("engine") < pos("plan"));
}

#[test]
fn reports_are_byte_identical() {
    let args = ["isometry", "--builtin", "heisenberg5-case1", "--json", "-"];
    let a = subriem(&args);
    let b = subriem(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = ["curvature", "--builtin", "sphere-lift", "--c", "2"];
    assert_eq!(subriem(&text).stdout, subriem(&text).stdout);
}

#[test]
fn selftest_passes() {
    let o = subriem(&["selftest"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(code(&o), 0, "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 10);
}
