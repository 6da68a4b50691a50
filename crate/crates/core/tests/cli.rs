use std::process::{Command, Output};

use serde_json::Value;

const L: &str = "h=(1 2)(3); v=(1 3)(2)";
const Q8: &str = "h=(1 2 4 7)(3 6 8 5); v=(1 3 4 8)(2 5 7 6)";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_origami-kz")).args(args).env("RUST_LOG", "warn").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "origami-kz/v1");
    v
}

#[test]
fn fmt_relabels_canonically() {
    let out = run(&["fmt", "-o", "h=(2 1)(3); v=(1 3)(2)"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "h=(1)(2 3); v=(1 2)(3)");
}

#[test]
fn stratum_of_l_shape() {
    let v = json(&["stratum", "-o", L]);
    assert_eq!(v["kappa"], serde_json::json!([2]));
    assert_eq!(v["genus"], 2);
}

#[test]
fn sum_of_l_shape_and_quaternion() {
    let v = json(&["sum", "-o", L]);
    assert_eq!(v["sum"], "4/3");
    assert_eq!(v["orbit_size"], 3);
    assert_eq!(v["degenerate"], false);
    let v = json(&["sum", "-o", Q8]);
    assert_eq!(v["sum"], "1");
    assert_eq!(v["degenerate"], true);
}

#[test]
fn orbit_members_and_cap() {
    let v = json(&["orbit", "-o", L, "--members"]);
    assert_eq!(v["size"], 3);
    let out = Command::new(env!("CARGO_BIN_EXE_origami-kz"))
        .args(["--json", "orbit", "-o", L])
        .env("ORIGAMI_ORBIT_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["code"], "OrbitTooLarge");
}

#[test]
fn cover_of_quaternion() {
    let v = json(&["cover", "-o", Q8]);
    assert_eq!(v["d_opt"], 2);
    assert_eq!(v["covolume"], "4/1");
}

#[test]
fn horocycle_monodromy_has_block_form() {
    let v = json(&["monodromy", "-o", Q8, "--horocycle"]);
    assert_eq!(v["block_form"], true);
    assert_eq!(v["unipotent"], true);
}

#[test]
fn lyapunov_on_l_shape() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let v = json(&["lyapunov", "-o", L, "--steps", "20000", "--trials", "2", "--trace", trace.to_str().unwrap()]);
    let l = v["lambdas"].as_array().unwrap();
    assert_eq!(l.len(), 2);
    assert!((l[1].as_f64().unwrap() - 1.0 / 3.0).abs() < 0.03);
    let csv = std::fs::read_to_string(trace).unwrap();
    assert!(csv.lines().count() > 1);
}

#[test]
fn search_writes_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("h2.jsonl");
    let args = ["search", "--stratum", "2", "--degrees", "3..4", "--db", db.to_str().unwrap()];
    let first = run(&args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let lines = std::fs::read_to_string(&db).unwrap();
    assert!(lines
        .lines()
        .all(|l| serde_json::from_str::<Value>(l).unwrap()["schema"] == "origami-kz/search-record/v1"));
    let second = run(&args);
    assert!(second.status.success());
    assert_eq!(std::fs::read_to_string(&db).unwrap(), lines);
}

#[test]
fn exit_codes() {
    let out = run(&["sum", "-o", "h=(1)(2); v=(1)(2)"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["--json", "stratum", "-o", "h=(1 2"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["code"], "ParseError");
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["sum"]).status.code(), Some(1));
}

#[test]
fn reads_json_input_from_stdin() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_origami-kz"))
        .args(["--json", "stratum", "-i", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"n":3,"h":[2,1,3],"v":[3,2,1]}"#).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["genus"], 2);
}

/// Subcommand outputs compared byte for byte against `tests/golden`.
/// Set `UPDATE_GOLDEN=1` to rewrite them.
const GOLDEN: &[(&str, &[&str])] = &[
    ("fmt_l3.txt", &["fmt", "-i", "l3.json"]),
    ("fmt_l3_keep.txt", &["fmt", "-i", "l3.json", "--keep-labels"]),
    ("stratum_q8.json", &["--json", "stratum", "-i", "q8.txt"]),
    ("orbit_l3.json", &["--json", "orbit", "-i", "l3.json", "--members"]),
    ("orbit_l3.txt", &["orbit", "-i", "l3.json"]),
    ("cyl_l3.json", &["--json", "cyl", "-i", "l3.json"]),
    ("cyl_q8.json", &["--json", "cyl", "-i", "q8.txt"]),
    ("monodromy_l3_s.json", &["--json", "monodromy", "-i", "l3.json", "--gen", "S"]),
    ("monodromy_q8_horocycle.json", &["--json", "monodromy", "-i", "q8.txt", "--horocycle"]),
    ("sum_l3.json", &["--json", "sum", "-i", "l3.json"]),
    ("sum_q8.txt", &["sum", "-i", "q8.txt"]),
    ("cover_l3.json", &["--json", "cover", "-i", "l3.json"]),
    ("cover_q8.json", &["--json", "cover", "-i", "q8.txt"]),
    ("lyapunov_l3.json", &["--json", "lyapunov", "-i", "l3.json", "--steps", "5000", "--trials", "2", "--seed", "1"]),
    ("search_h1111.jsonl", &["--json", "search", "--stratum", "1,1,1,1", "--degrees", "8"]),
    ("search_h2.jsonl", &["--json", "search", "--stratum", "2", "--degrees", "3..5"]),
];

#[test]
fn golden_outputs() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (file, args) in GOLDEN {
        let out = Command::new(env!("CARGO_BIN_EXE_origami-kz")).args(*args).current_dir(&dir).output().unwrap();
        assert!(out.status.success(), "{file}: {}", String::from_utf8_lossy(&out.stderr));
        let path = dir.join(file);
        if update {
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let want = std::fs::read(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert_eq!(String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&want), "{file}");
    }
}

#[test]
fn seeded_lyapunov_is_byte_reproducible() {
    let args = ["--json", "lyapunov", "-o", L, "--steps", "3000", "--trials", "3", "--seed", "9"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
