use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn lcplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcplab"))
        .args(args)
        .env_remove("LCPLAB_TOL")
        .output()
        .expect("binary runs")
}

fn exported() -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let out = lcplab(&["examples", "--export", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let path = dir.path().to_path_buf();
    (dir, path)
}

fn file(dir: &Path, name: &str) -> String {
    dir.join(format!("{name}.json")).to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn list_shows_every_example() {
    let out = lcplab(&["examples", "--list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["fundamental", "product", "strongly-irreducible", "sl2"] {
        assert!(text.contains(name), "{name} missing from:\n{text}");
    }
}

#[test]
fn validate_accepts_exported_fundamental() {
    let (_d, dir) = exported();
    let out = lcplab(&["validate", &file(&dir, "fundamental")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("algebra: ok") && text.contains("lcp: ok"), "{text}");
}

#[test]
fn validate_lists_jacobi_violations() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "broken.json",
        r#"{"mode":"exact","dim":3,"basis":["a","b","c"],
            "brackets":[{"i":0,"j":1,"coeffs":{"2":"1"}},{"i":0,"j":2,"coeffs":{"0":"1"}}],
            "metric":[["1","0","0"],["0","1","0"],["0","0","1"]]}"#,
    );
    let out = lcplab(&["validate", &path]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Jacobi identity fails on (a, b, c)"), "{text}");

    let report = json(&lcplab(&["validate", &path, "--json"]));
    assert_eq!(report["passed"], false);
    assert!(!report["validation"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.json", "{\"mode\": \"exact\", \"dim\": 3,,}");
    let out = lcplab(&["validate", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    let path = write(dir.path(), "decimal.json", r#"{"mode":"exact","dim":1,"basis":["x"],"brackets":[],"metric":[[0.5]]}"#);
    assert_eq!(lcplab(&["analyze", &path]).status.code(), Some(2));
    assert_eq!(lcplab(&["analyze", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn analyze_fundamental() {
    let (_d, dir) = exported();
    let out = lcplab(&["analyze", &file(&dir, "fundamental"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["holonomy_dim"], 3);
    assert_eq!(r["decomposability"]["decomposable"], false);
    assert_eq!(r["mode"], "exact");
    assert_eq!(r["expected"]["matches"], true);
}

#[test]
fn analyze_strongly_irreducible() {
    let (_d, dir) = exported();
    let out = lcplab(&["analyze", &file(&dir, "strongly-irreducible"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let mut dims: Vec<u64> = r["de_rham"]["factor_dims"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    dims.sort_unstable();
    assert_eq!(dims, vec![2, 3]);
    assert_eq!(r["de_rham"]["flat_dim"], 2);
    assert_eq!(r["decomposability"]["decomposable"], true);
    assert_eq!(r["lattice"]["irreducible"], true);
}

#[test]
fn analyze_sl2_is_indecomposable() {
    let (_d, dir) = exported();
    let out = lcplab(&["analyze", &file(&dir, "sl2")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("decomposable: no"), "{text}");
    assert!(text.contains("holonomy dim: 91"), "{text}");
}

#[test]
fn export_keeps_exact_fractions() {
    let (_d, dir) = exported();
    let v: Value = serde_json::from_str(&std::fs::read_to_string(file(&dir, "product")).unwrap()).unwrap();
    assert_eq!(v["mode"], "exact");
    assert!(v["metric"][0][0].is_string());
    assert!(v["metric"].as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap()).all(|x| x.as_str().unwrap().contains('/')));
}

#[test]
fn export_parse_export_is_idempotent() {
    use lcplab_core::format::parse_document;
    let (_d, dir) = exported();
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let again = serde_json::to_string_pretty(&parse_document(&text).unwrap().to_file()).unwrap() + "\n";
        assert_eq!(text, again, "{}", path.display());
    }
}

#[test]
fn tolerance_comes_from_the_environment() {
    let (_d, dir) = exported();
    let path = file(&dir, "strongly-irreducible");
    let out = Command::new(env!("CARGO_BIN_EXE_lcplab"))
        .args(["analyze", &path, "--json"])
        .env("LCPLAB_TOL", "1e-7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["tolerance_policy"]["rank_tol"], 1e-7);

    // the flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_lcplab"))
        .args(["analyze", &path, "--json", "--tol", "1e-8"])
        .env("LCPLAB_TOL", "1e-7")
        .output()
        .unwrap();
    assert_eq!(json(&out)["tolerance_policy"]["rank_tol"], 1e-8);

    for bad in ["0", "abc", "2"] {
        assert_eq!(lcplab(&["analyze", &path, "--tol", bad]).status.code(), Some(2), "tol {bad}");
    }
}

#[test]
fn loose_tolerance_is_reported_as_ambiguous() {
    let (_d, dir) = exported();
    let out = lcplab(&["analyze", &file(&dir, "strongly-irreducible"), "--tol", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hint:"));
}

#[test]
fn lattice_commands() {
    let out = lcplab(&["lattice", "charpoly", "[[1,1],[1,2]]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1 -3 1");

    let out = lcplab(&["lattice", "roots", "1", "-3", "1", "-3", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["on_circle"], 2);
    assert_eq!(r["real_off_circle"], 2);

    assert_eq!(lcplab(&["lattice", "irreducible", "1", "-3", "1", "-3", "1"]).status.code(), Some(0));
    assert_eq!(lcplab(&["lattice", "irreducible", "-1", "0", "1"]).status.code(), Some(1));
    assert_eq!(lcplab(&["lattice", "conjugacy", "[[1,1],[1,2]]"]).status.code(), Some(0));

    let out = lcplab(&["lattice", "probe", "1", "1.4142135623"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("accumulation_detected"));
    assert_eq!(lcplab(&["lattice", "probe", "1,0", "0,1"]).status.code(), Some(0));

    assert_eq!(lcplab(&["lattice", "charpoly", "[[1,1]"]).status.code(), Some(2));
}
