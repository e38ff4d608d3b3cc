use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sepineq(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepineq")).args(args).current_dir(dir).env_remove("SEPINEQ_SEED").output().unwrap()
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = sepineq(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn state(dir: &Path, name: &str, args: &[&str]) {
    let mut full = vec!["state"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", name]);
    ok(&full, dir);
}

fn criterion<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["criteria"].as_array().unwrap().iter().find(|c| c["criterion"] == name).unwrap()
}

#[test]
fn detect_isotropic() {
    let dir = tempfile::tempdir().unwrap();
    state(dir.path(), "half.json", &["--family", "isotropic23", "--param", "p=0.5"]);
    state(dir.path(), "tenth.json", &["--family", "isotropic23", "--param", "p=0.1"]);

    let r: Value = serde_json::from_str(&ok(&["detect", "half.json", "--method", "all"], dir.path())).unwrap();
    assert_eq!(r["inequality"]["verdict"], "violated");
    assert_eq!(criterion(&r, "ppt")["detected"], true);
    assert_eq!(r["tool"], "sepineq");

    let r: Value = serde_json::from_str(&ok(&["detect", "tenth.json"], dir.path())).unwrap();
    assert_eq!(r["inequality"]["verdict"], "satisfied");
    for c in r["criteria"].as_array().unwrap() {
        assert_eq!(c["detected"], false, "{c}");
    }

    let r: Value = serde_json::from_str(&ok(&["detect", "half.json", "--method", "ppt"], dir.path())).unwrap();
    assert!(r.get("inequality").is_none());
    assert_eq!(r["criteria"].as_array().unwrap().len(), 1);
}

#[test]
fn detect_sigma_b() {
    let dir = tempfile::tempdir().unwrap();
    state(dir.path(), "sb.json", &["--family", "sigma-b", "--param", "b=0.5"]);
    let r: Value = serde_json::from_str(&ok(&["detect", "sb.json", "--pair", "sigma-b"], dir.path())).unwrap();
    for c in r["criteria"].as_array().unwrap() {
        assert_eq!(c["detected"], false, "{c}");
    }
    // the stated pair does not produce a violation on this state
    assert_eq!(r["inequality"]["verdict"], "satisfied");
    assert!((r["inequality"]["f"].as_f64().unwrap() + 0.3897308330588174).abs() < 1e-9);
}

#[test]
fn malformed_inputs_fail_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"dims\": [2, 2], \"matrix\": [[[1,0],[0,0]],[[0,0],[1,0]]]}").unwrap();
    let out = sepineq(&["detect", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("need 4x4"), "{err}");

    let mut rows = vec![vec![[0.0, 0.0]; 4]; 4];
    rows[0][0] = [0.7, 0.0];
    rows[1][1] = [0.7, 0.0];
    let text = serde_json::json!({"dims": [2, 2], "matrix": rows}).to_string();
    std::fs::write(dir.path().join("trace.json"), text).unwrap();
    let out = sepineq(&["detect", "trace.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace"));

    let out = sepineq(&["detect", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_isotropic_line() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["scan", "--family", "isotropic23", "--range", "0:1:0.05", "--out", "iso.csv"], dir.path());
    let mut rdr = csv::Reader::from_path(dir.path().join("iso.csv")).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, sepineq::io::SCAN_HEADER);
    let mut n = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let p: f64 = rec[0].parse().unwrap();
        let f: f64 = rec[2].parse().unwrap();
        assert!((f - (8.0 * p - 2.0)).abs() < 1e-9);
        assert_eq!(&rec[3], "");
        n += 1;
    }
    assert_eq!(n, 21);
}

#[test]
fn scan_errors_and_sigma_b_sign() {
    let dir = tempfile::tempdir().unwrap();
    for range in ["1:0:0.1", "0:1:0", "junk"] {
        let out = sepineq(&["scan", "--family", "isotropic23", "--range", range], dir.path());
        assert_eq!(out.status.code(), Some(2), "{range}");
    }
    let text = ok(&["scan", "--family", "sigma-b", "--range", "0:1:0.01"], dir.path());
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let fs: Vec<f64> = rdr.records().map(|r| r.unwrap()[2].parse().unwrap()).collect();
    assert_eq!(fs.len(), 101);
    // F under the stated pair never turns positive on this grid
    assert!(fs.iter().all(|&f| f <= 1e-9));
}

#[test]
fn scan_rotation_grid_and_optimize() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(&["scan", "--family", "sigma-b", "--range", "0:1:0.5", "--rotation", "0:1.5:0.75"], dir.path());
    assert_eq!(text.lines().count(), 1 + 3 * 3);
    let text = ok(
        &["scan", "--family", "isotropic23", "--range", "0.5:0.5:0.1", "--optimize", "--restarts", "3", "--seed", "1"],
        dir.path(),
    );
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rec = rdr.records().next().unwrap().unwrap();
    let f_opt: f64 = rec[3].parse().unwrap();
    assert!((f_opt - 2.0).abs() < 1e-3);
}

#[test]
fn measure_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    state(dir.path(), "iso.json", &["--family", "isotropic23", "--param", "p=0.75"]);
    let args = ["measure", "iso.json", "--pair", "isotropic", "--shots", "20000", "--seed", "4"];
    let a = ok(&args, dir.path());
    assert_eq!(a, ok(&args, dir.path()));
    let r: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(r["seed"], 4);
    assert_eq!(r["shots_per_setting"], 20000);
    let f = r["f"]["value"].as_f64().unwrap();
    let se = r["f"]["stderr"].as_f64().unwrap();
    assert!((f - 4.0).abs() < 5.0 * se);

    let out = sepineq(&["measure", "iso.json", "--shots", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn optimize_reports() {
    let dir = tempfile::tempdir().unwrap();
    state(dir.path(), "max.json", &["--family", "isotropic23", "--param", "p=1"]);
    state(dir.path(), "sep.json", &["--family", "random-separable", "--param", "d=3", "--param", "terms=6", "--seed", "2"]);

    let r: Value = serde_json::from_str(&ok(&["optimize", "max.json", "--restarts", "4", "--seed", "1"], dir.path())).unwrap();
    assert!((r["report"]["f"].as_f64().unwrap() - 6.0).abs() < 1e-3);
    assert_eq!(r["report"]["method"], "optimized");
    assert!(r["report"]["restart"].is_u64());
    assert_eq!(r["report"]["pair"]["v"].as_array().unwrap().len(), 3);

    let r: Value = serde_json::from_str(&ok(&["optimize", "sep.json", "--restarts", "4"], dir.path())).unwrap();
    assert_eq!(r["report"]["f"].as_f64().unwrap(), 0.0);
    assert_eq!(r["seed"], 0);
}

#[test]
fn optimize_two_qubit_bell_state() {
    let dir = tempfile::tempdir().unwrap();
    state(dir.path(), "bell.json", &["--family", "schmidt-pure", "--param", "alpha=0.7071067811865476", "--param", "d=2"]);
    let r: Value = serde_json::from_str(&ok(&["optimize", "bell.json", "--restarts", "4"], dir.path())).unwrap();
    // every qubit-pair normalization in use gives 4 here, not 3
    assert!((r["report"]["f"].as_f64().unwrap() - 4.0).abs() < 1e-3);
}

#[test]
fn pair_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    state(dir.path(), "iso.json", &["--family", "isotropic23", "--param", "p=1"]);
    let pair = serde_json::json!({
        "u": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
        "v": [[[0, 0], [1, 0], [0, 0]], [[1, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [1, 0]]]
    });
    std::fs::write(dir.path().join("pair.json"), pair.to_string()).unwrap();
    let r: Value = serde_json::from_str(&ok(&["detect", "iso.json", "--method", "inequality", "--pair", "pair.json"], dir.path())).unwrap();
    assert!((r["inequality"]["f"].as_f64().unwrap() - 6.0).abs() < 1e-9);

    std::fs::write(dir.path().join("bad.json"), "{\"u\": []}").unwrap();
    let out = sepineq(&["detect", "iso.json", "--pair", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn state_files_round_trip_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    state(dir.path(), "r.json", &["--family", "random-density", "--param", "d=4", "--param", "rank=3", "--seed", "9"]);
    let text = std::fs::read_to_string(dir.path().join("r.json")).unwrap();
    let file = sepineq::io::StateFile::from_json(&text).unwrap();
    assert_eq!(file.to_density().unwrap(), sepineq::catalog::random_density(4, 3, 9).unwrap());
    assert_eq!(file.seed, Some(9));
    let out = sepineq(&["state", "--family", "sigma-b"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
