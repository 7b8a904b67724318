//! End-to-end checks of the command line surface: exit codes, report
//! stability and the fixture catalog.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eckardt"))
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eckardt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn fixture_field(name: &str, field: &str) -> serde_json::Value {
    let out = bin().args(["fixture", name]).output().unwrap();
    assert!(out.status.success(), "fixture {name} failed");
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    doc["results"]["fixture"][field].clone()
}

fn write_json(dir: &PathBuf, name: &str, value: &serde_json::Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

#[test]
fn build_fix1_succeeds() {
    let dir = tempdir();
    let f = write_json(&dir, "f1.poly", &fixture_field("FIX1", "f"));
    let l = write_json(&dir, "l1.poly", &fixture_field("FIX1", "l"));
    let out = bin()
        .args(["build", "--f"])
        .arg(&f)
        .arg("--l")
        .arg(&l)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["ok"], serde_json::Value::Bool(true));
    assert_eq!(doc["command"], "build");
    // digests are echoed for both inputs
    assert_eq!(doc["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn build_fix2_fails_with_exit_one() {
    let dir = tempdir();
    let f = write_json(&dir, "f2.poly", &fixture_field("FIX2", "f"));
    let l = write_json(&dir, "l2.poly", &fixture_field("FIX2", "l"));
    let out = bin()
        .args(["build", "--f"])
        .arg(&f)
        .arg("--l")
        .arg(&l)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["ok"], serde_json::Value::Bool(false));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempdir();
    let bad = dir.join("bad.poly");
    std::fs::write(&bad, b"{ not json").unwrap();
    let out = bin()
        .args(["jacobian", "--degree", "9", "--f"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_fixture_exits_two() {
    let out = bin().args(["fixture", "FIX9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn jacobian_dims_of_fix1() {
    let dir = tempdir();
    // build the threefold polynomial through build, then query dimensions
    let fp = write_json(&dir, "bf.poly", &fixture_field("FIX1", "f"));
    let lp = write_json(&dir, "bl.poly", &fixture_field("FIX1", "l"));
    let x = dir.join("x1.json");
    let out = bin()
        .args(["build", "--f"])
        .arg(&fp)
        .arg("--l")
        .arg(&lp)
        .arg("--output")
        .arg(&x)
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .args([
            "jacobian",
            "--degree",
            "4",
            "--involution",
            "diag:+,+,+,+,-",
            "--twist",
            "1",
            "--f",
        ])
        .arg(&x)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["results"]["dim"], 5);
    let split = &doc["results"]["eigen_split"];
    let mut pair = [
        split["plus"].as_u64().unwrap(),
        split["minus"].as_u64().unwrap(),
    ];
    pair.sort();
    assert_eq!(pair, [1, 4]);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempdir();
    let f = write_json(&dir, "det-f.poly", &fixture_field("FIX3", "f"));
    let l = write_json(&dir, "det-l.poly", &fixture_field("FIX3", "l"));
    let x = dir.join("det-x.json");
    bin()
        .args(["build", "--f"])
        .arg(&f)
        .arg("--l")
        .arg(&l)
        .arg("--output")
        .arg(&x)
        .output()
        .unwrap();
    let run = || {
        bin()
            .args(["project", "--line", "through-p:[0,1,1,1]", "--x"])
            .arg(&x)
            .output()
            .unwrap()
    };
    let o1 = run();
    let o2 = run();
    assert!(o1.status.success());
    assert_eq!(o1.stdout, o2.stdout);
}

#[test]
fn lines_deterministic_given_seed() {
    let dir = tempdir();
    let out = bin().args(["fixture", "fermat-surface"]).output().unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let surf = write_json(&dir, "surf.poly", &doc["results"]["fixture"]);
    let run = || {
        bin()
            .args(["lines", "--seed", "5", "--surface"])
            .arg(&surf)
            .output()
            .unwrap()
    };
    let o1 = run();
    assert!(o1.status.success());
    let d1 = stdout_json(&o1);
    assert_eq!(d1["results"]["lines"].as_array().unwrap().len(), 27);
    assert_eq!(d1["results"]["tol"], 1e-10);
    let o2 = run();
    assert_eq!(o1.stdout, o2.stdout);
}

#[test]
fn tolerance_env_override() {
    let dir = tempdir();
    let out = bin().args(["fixture", "fermat-surface"]).output().unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let surf = write_json(&dir, "surf-tol.poly", &doc["results"]["fixture"]);
    let out = bin()
        .env("ECKARDT_TOL", "1e-8")
        .args(["lines", "--seed", "0", "--surface"])
        .arg(&surf)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["results"]["tol"], 1e-8);
}

#[test]
fn roundtrip_fix3_passes() {
    let dir = tempdir();
    let f = write_json(&dir, "rt-f.poly", &fixture_field("FIX3", "f"));
    let l = write_json(&dir, "rt-l.poly", &fixture_field("FIX3", "l"));
    let x = dir.join("rt-x.json");
    bin()
        .args(["build", "--f"])
        .arg(&f)
        .arg("--l")
        .arg(&l)
        .arg("--output")
        .arg(&x)
        .output()
        .unwrap();
    let out = bin()
        .args(["roundtrip", "--line", "through-p:[0,1,1,1]", "--x"])
        .arg(&x)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["results"]["scalars"]["g"], "1/1");
}

#[test]
fn check_generic_and_tower_on_fix4() {
    let dir = tempdir();
    let f = write_json(&dir, "g4-f.poly", &fixture_field("FIX4", "f"));
    let l = write_json(&dir, "g4-l.poly", &fixture_field("FIX4", "l"));
    let line = write_json(&dir, "g4-line.json", &fixture_field("FIX4", "line"));
    let x = dir.join("g4-x.json");
    bin()
        .args(["build", "--f"])
        .arg(&f)
        .arg("--l")
        .arg(&l)
        .arg("--output")
        .arg(&x)
        .output()
        .unwrap();
    let out = bin()
        .args(["check-generic", "--x"])
        .arg(&x)
        .arg("--line")
        .arg(&line)
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .args(["tower", "--e-point", "0,0,1,0", "--x"])
        .arg(&x)
        .arg("--line")
        .arg(&line)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["results"]["genera"]["dbar"], 2);
    assert_eq!(doc["results"]["fixed_points"], 6);
}

#[test]
fn pointwise_projection_report() {
    let dir = tempdir();
    let f = write_json(&dir, "pw-f.poly", &fixture_field("FIX1", "f"));
    let l = write_json(&dir, "pw-l.poly", &fixture_field("FIX1", "l"));
    let out = bin().args(["fixture", "fix1-line"]).output().unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let line = write_json(&dir, "pw-line.json", &doc["results"]["fixture"]);
    let x = dir.join("pw-x.json");
    bin()
        .args(["build", "--f"])
        .arg(&f)
        .arg("--l")
        .arg(&l)
        .arg("--output")
        .arg(&x)
        .output()
        .unwrap();
    let spec = format!("pointwise:{}", line.display());
    let out = bin()
        .args(["project", "--line", &spec, "--x"])
        .arg(&x)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["results"]["slice"]["degree"], 5);
    assert_eq!(doc["results"]["l3"]["degree"], 1);
}

#[test]
fn reconstruct_from_fix3_quartic() {
    let dir = tempdir();
    let out = bin().args(["fixture", "fix3-quartic"]).output().unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let g = write_json(&dir, "rq-g.poly", &doc["results"]["fixture"]["g"]);
    let k = write_json(&dir, "rq-k.poly", &doc["results"]["fixture"]["k"]);
    let l = write_json(&dir, "rq-l.poly", &doc["results"]["fixture"]["l"]);
    let x = dir.join("rq-x.json");
    let out = bin()
        .args(["reconstruct", "--allow-rescale", "--quartic"])
        .arg(&g)
        .arg("--bitangent")
        .arg(&k)
        .arg("--line")
        .arg(&l)
        .arg("--output")
        .arg(&x)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // the written threefold round-trips through the standard line
    let out = bin()
        .args(["roundtrip", "--line", "through-p:[0,0,0,1]", "--x"])
        .arg(&x)
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn tower_on_degenerate_fixture_reports_failure() {
    // the Fermat pair fails the disjoint-support condition; the tower
    // report carries the verdict and exits nonzero
    let dir = tempdir();
    let f = write_json(&dir, "dg-f.poly", &fixture_field("FIX1", "f"));
    let l = write_json(&dir, "dg-l.poly", &fixture_field("FIX1", "l"));
    let out = bin().args(["fixture", "fix1-line"]).output().unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let line = write_json(&dir, "dg-line.json", &doc["results"]["fixture"]);
    let x = dir.join("dg-x.json");
    bin()
        .args(["build", "--f"])
        .arg(&f)
        .arg("--l")
        .arg(&l)
        .arg("--output")
        .arg(&x)
        .output()
        .unwrap();
    let out = bin()
        .args(["tower", "--x"])
        .arg(&x)
        .arg("--line")
        .arg(&line)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["ok"], serde_json::Value::Bool(false));
    // the genus table itself is still reported
    assert_eq!(doc["results"]["genera"]["dtilde"], 11);
    assert_eq!(doc["results"]["fixed_points"], 6);
    let checks = doc["checks"].as_array().unwrap();
    let generic = checks.iter().find(|c| c["name"] == "generic").unwrap();
    assert_eq!(generic["pass"], serde_json::Value::Bool(false));
}

#[test]
fn fixture_catalog_is_stable() {
    let names = [
        "FIX1",
        "FIX2",
        "FIX3",
        "FIX4",
        "fermat-surface",
        "fix1-line",
        "fix3-line",
        "fix3-quartic",
        "fix4-line",
    ];
    for name in names {
        let o1 = bin().args(["fixture", name]).output().unwrap();
        let o2 = bin().args(["fixture", name]).output().unwrap();
        assert!(o1.status.success(), "{name}");
        assert_eq!(o1.stdout, o2.stdout, "{name} not byte stable");
    }
}
