use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wnk(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wnk"))
        .current_dir(dir)
        .env_remove("WNK_OUT_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_writes_graph_files() {
    let tmp = tempfile::tempdir().unwrap();
    let o = wnk(
        tmp.path(),
        &[
            "generate", "--family", "wnk", "--n", "4", "--k", "2", "--out", "g.json",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("order: 16"));
    assert!(stdout(&o).contains("classes 8 + 8"));
    assert_eq!(read_json(&tmp.path().join("g.json"))["order"], 16);

    let o = wnk(
        tmp.path(),
        &["generate", "--family", "heawood", "--out", "h.json"],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(read_json(&tmp.path().join("h.json"))["order"], 14);

    let o = wnk(
        tmp.path(),
        &["generate", "--family", "pnk", "--n", "3", "--k", "3"],
    );
    assert_eq!(code(&o), 0);
    assert!(tmp.path().join("wnk-out/pnk-n3-k3.json").exists());
}

#[test]
fn parameter_errors_exit_2_and_name_the_constraint() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 7] = [
        &["generate", "--family", "wnk", "--n", "1", "--k", "2"],
        &["verify", "--n", "4", "--k", "1"],
        &["esd", "--k", "1", "--n", "10"],
        &["scan", "--orders", "16:4"],
        &["verify", "--n", "4", "--k", "2", "--tol", "0"],
        &["generate", "--family", "wnk", "--n", "100", "--k", "100"],
        &["generate", "--family", "wnk", "--k", "2"],
    ];
    let expected = [
        "n >= 2",
        "k >= 2",
        "k >= 2",
        "16:4",
        "tol > 0",
        "size cap",
        "--n is required",
    ];
    for (args, want) in cases.iter().zip(expected) {
        let o = wnk(tmp.path(), args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains(want), "{args:?}: {}", stderr(&o));
    }
    // clap's own usage errors share the code
    assert_eq!(code(&wnk(tmp.path(), &["verify", "--bogus"])), 2);
}

#[test]
fn spectrum_methods_and_formats() {
    let tmp = tempfile::tempdir().unwrap();
    let o = wnk(
        tmp.path(),
        &[
            "spectrum", "--family", "wnk", "--n", "4", "--k", "2", "--method", "both",
        ],
    );
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["multiset_distance"].as_f64().unwrap() <= 1e-8);
    assert_eq!(v["numeric"]["values"].as_array().unwrap().len(), 16);
    assert!(stderr(&o).contains("multiset distance"));

    wnk(
        tmp.path(),
        &["generate", "--family", "heawood", "--out", "h.json"],
    );
    let o = wnk(tmp.path(), &["spectrum", "--in", "h.json"]);
    assert_eq!(code(&o), 0);
    assert!(
        stderr(&o).contains("lambda_7 = 1.414213562373"),
        "{}",
        stderr(&o)
    );
    assert!(stderr(&o).contains("lambda_8 = -1.414213562373"));

    wnk(
        tmp.path(),
        &[
            "generate", "--family", "wnk", "--n", "4", "--k", "2", "--out", "g.json",
        ],
    );
    let o = wnk(
        tmp.path(),
        &["spectrum", "--in", "g.json", "--format", "csv"],
    );
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("index,value,cluster_id"));
    assert_eq!(text.lines().count(), 17);

    let o = wnk(
        tmp.path(),
        &[
            "spectrum",
            "--in",
            "g.json",
            "--method",
            "closed-form",
            "--out",
            "cf.json",
        ],
    );
    assert_eq!(code(&o), 0);
    assert!(read_json(&tmp.path().join("cf.json"))["entries"].is_array());

    let o = wnk(
        tmp.path(),
        &["spectrum", "--in", "h.json", "--method", "closed-form"],
    );
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("only to W(n,k)"));

    let o = wnk(tmp.path(), &["spectrum", "--in", "missing.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_writes_one_report_per_point() {
    let tmp = tempfile::tempdir().unwrap();
    let o = wnk(tmp.path(), &["verify", "--n", "4", "--k", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(
        read_json(&tmp.path().join("wnk-out/verify/verify-n4-k2.json"))["pass"],
        true
    );

    let o = wnk(
        tmp.path(),
        &[
            "verify", "--grid-n", "2:12", "--grid-k", "2:6", "--out", "grid",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("55 point(s) checked, 0 failed"));
    let count = std::fs::read_dir(tmp.path().join("grid/verify"))
        .unwrap()
        .count();
    assert_eq!(count, 55);
}

#[test]
fn verify_failure_exits_1_with_table() {
    // A tolerance below the solver's precision cannot pass.
    let tmp = tempfile::tempdir().unwrap();
    let o = wnk(
        tmp.path(),
        &[
            "verify",
            "--grid-n",
            "9:10",
            "--grid-k",
            "5:6",
            "--check-tol",
            "1e-30",
        ],
    );
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).contains("failed"));
    assert!(stdout(&o).contains("distance"));
}

#[test]
fn out_dir_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_wnk"))
        .current_dir(tmp.path())
        .env("WNK_OUT_DIR", "from-env")
        .args(["verify", "--n", "3", "--k", "3"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(tmp
        .path()
        .join("from-env/verify/verify-n3-k3.json")
        .exists());
}

#[test]
fn esd_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let o = wnk(
        tmp.path(),
        &["esd", "--k", "3", "--n", "60", "--bins", "60"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = read_json(&tmp.path().join("wnk-out/esd/esd-n60-k3.json"));
    assert!((r["atom_mass_plus1"].as_f64().unwrap() - 1.0 / 3.0).abs() <= 0.02);
    let csv = std::fs::read_to_string(tmp.path().join("wnk-out/esd/esd-n60-k3.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("bin_lo,bin_hi,count,mass"));
    assert_eq!(csv.lines().count(), 121);

    let o = wnk(
        tmp.path(),
        &["esd", "--k", "2", "--n-list", "10,100", "--bins", "40"],
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("deviations decrease"));
    let t = read_json(
        &tmp.path()
            .join("wnk-out/esd/esd-convergence-k2-n10_100.json"),
    );
    assert_eq!(t["monotone"], true);

    let o = wnk(tmp.path(), &["esd", "--k", "2", "--n-list", "100,10"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn scan_runs_and_saves_exceptions() {
    let tmp = tempfile::tempdir().unwrap();
    let o = wnk(tmp.path(), &["scan", "--catalog-only"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("1 Heawood, 0 other"));
    let saved = tmp
        .path()
        .join("wnk-out/scan-seed42-catalog/exceptions/catalog-heawood.json");
    let g = read_json(&saved);
    assert_eq!(g["family"], "heawood");

    let o = wnk(
        tmp.path(),
        &["scan", "--orders", "4:10", "--samples", "20", "--seed", "3"],
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("delta_min"));
    let report = read_json(&tmp.path().join("wnk-out/scan-seed3-o4-10-s20/report.json"));
    assert_eq!(report["params"]["seed"], 3);
    assert!(report["delta_min"].as_f64().unwrap() > 0.0);

    // replay the saved graph
    let o = wnk(tmp.path(), &["spectrum", "--in", saved.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
}

#[test]
fn scan_with_enumeration() {
    let tmp = tempfile::tempdir().unwrap();
    let o = wnk(
        tmp.path(),
        &["scan", "--catalog-only", "--enumerate-cubic14"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("cubic 14-vertex enumeration"));
    let r = read_json(&tmp.path().join("wnk-out/scan-seed42-catalog/report.json"));
    assert_eq!(r["enumeration"]["non_heawood"].as_array().unwrap().len(), 0);
}
