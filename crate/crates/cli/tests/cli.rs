use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ibqrm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ibqrm")).args(args).output().expect("binary runs")
}

fn ibqrm_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ibqrm"))
        .env("IBQRM_THREADS", threads)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn schema(name: &str) -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn assert_valid(schema_name: &str, v: &Value) {
    let s = schema(schema_name);
    let compiled = jsonschema::JSONSchema::compile(&s).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(v) {
        Ok(()) => return,
        Err(errs) => errs.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{schema_name}: {msgs:?}");
}

fn assert_csv_header(dir: &Path, file: &str) {
    let cols = schema("csv_columns.json");
    let want: Vec<&str> = cols[file].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    let mut r = csv::Reader::from_path(dir.join(file)).unwrap();
    let got: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(got, want, "{file} header");
    for rec in r.records() {
        assert_eq!(rec.unwrap().len(), want.len(), "{file} row width");
    }
}

fn p_table_entry(ell: usize) -> &'static str {
    ibqrm_core::tables::P_TABLE[ell]
}

#[test]
fn verify_all_default_passes() {
    let o = ibqrm(&["verify-all"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_valid("verify_report.schema.json", &v);
    assert_eq!(v["passed"], true);
    assert!(v["first_failure"].is_null());
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    // 12 × 9 divisibility checks + 4 exact checks for each ℓ ≤ 6
    assert_eq!(names.len(), 12 * 9 + 4 * 7);
    assert!(names.contains(&"divisibility N=12 ℓ=8"));
    assert!(names.contains(&"square ℓ=6"));
}

#[test]
fn verify_all_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested/report.json");
    let o = ibqrm(&["verify-all", "--ell-max", "1", "--n-max", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read(&out).unwrap(), o.stdout);
}

#[test]
fn corrupted_table_fails_with_exit_one() {
    let expr = format!("3={} + 1", p_table_entry(3));
    let o = ibqrm(&["verify-all", "--ell-max", "4", "--n-max", "3", "--p-override", &expr]);
    assert_eq!(o.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("table_vs_determinant ℓ=3"), "{stderr}");
    let v = stdout_json(&o);
    assert_eq!(v["passed"], false);
    assert_eq!(v["first_failure"], "table_vs_determinant ℓ=3");
    // the other ℓ are untouched
    let checks = v["checks"].as_array().unwrap();
    let failed: Vec<&str> = checks.iter().filter(|c| c["passed"] == false).map(|c| c["name"].as_str().unwrap()).collect();
    assert!(failed.iter().all(|n| n.ends_with("ℓ=3")), "{failed:?}");
    assert!(failed.contains(&"square ℓ=3"));
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(ibqrm(&[]).status.code(), Some(2));
    assert_eq!(ibqrm(&["sweep", "--ell", "1"]).status.code(), Some(2));
    assert_eq!(ibqrm(&["verify-all", "--n-max", "x"]).status.code(), Some(2));
    assert_eq!(ibqrm(&["sweep", "--ell", "1", "--delta", "-1"]).status.code(), Some(2));
    let o = ibqrm(&["verify-all", "--p-override", "9=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ℓ = 9"));
    let o = ibqrm(&["verify-all", "--p-override", "2=g^"]);
    assert_eq!(o.status.code(), Some(1), "unparsable table entry is a failed check");
    let o = ibqrm(&["juddian", "--n", "1", "--ell", "1", "--delta", "1/0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ibqrm_threads("zero", &["verify-all", "--ell-max", "0", "--n-max", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_finds_juddian_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = ibqrm(&[
        "sweep", "--ell", "1", "--delta", "1", "--g-max", "1", "--g-step", "0.05", "--n-levels", "10",
        "--dim-fock", "80", "--gaa-n-max", "2", "--out-dir", d,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_valid("summary.schema.json", &stdout_json(&o));
    let c = read_json(&dir.path().join("crossings.json"));
    assert_valid("crossings.schema.json", &c);
    let hit = c["crossings"].as_array().unwrap().iter().any(|x| {
        (x["g"].as_f64().unwrap() - 0.5).abs() < 1e-6
            && (x["lambda"].as_f64().unwrap() - 1.25).abs() < 1e-6
            && x["baseline_n"] == 1
    });
    assert!(hit, "{c}");
    assert_csv_header(dir.path(), "sweep.csv");
    assert_csv_header(dir.path(), "gaa.csv");
}

#[test]
fn sweep_rejects_grid_not_starting_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = ibqrm(&["sweep", "--ell", "1", "--delta", "1", "--g-min", "0.5", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn surface_ell0_is_two_planes() {
    let dir = tempfile::tempdir().unwrap();
    let o = ibqrm(&[
        "surface", "--ell", "0", "--delta", "1", "--g-max", "1", "--x-steps", "20", "--overlay", "--n-levels", "4",
        "--dim-fock", "40", "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_csv_header(dir.path(), "surface.csv");
    let mut r = csv::Reader::from_path(dir.path().join("surface.csv")).unwrap();
    let mut kinds = std::collections::BTreeSet::new();
    for rec in r.records() {
        let rec = rec.unwrap();
        let y: f64 = rec[1].parse().unwrap();
        assert!((y.abs() - 1.0).abs() < 1e-9, "y = {y}");
        kinds.insert(rec[3].to_string());
    }
    assert_eq!(kinds.into_iter().collect::<Vec<_>>(), ["spectrum", "surface"]);
}

#[test]
fn elliptic_report_passes_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let o = ibqrm(&["elliptic", "--t-min", "-30", "--t-max", "30", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let e = read_json(&dir.path().join("elliptic.json"));
    assert_valid("elliptic.schema.json", &e);
    let f = &e["fibers"][0];
    assert_eq!(f["delta"], "1/4");
    assert_eq!(f["roots"].as_array().unwrap().len(), 12);
    assert_eq!(f["distinct_g"], 12);
    assert!(e["reductions"].as_array().unwrap().iter().all(|r| r["points"] == 4));
    assert_eq!(e["random_t_samples"], 50);
    assert_eq!(e["random_t_disc_matches"], 50);
    assert_csv_header(dir.path(), "et_scan.csv");
    // T = 12, −6, −24 are singular and skipped
    let mut r = csv::Reader::from_path(dir.path().join("et_scan.csv")).unwrap();
    let ts: Vec<i64> = r.records().map(|x| x.unwrap()[0].parse().unwrap()).collect();
    assert_eq!(ts.len(), 61 - 3);
    assert!(!ts.contains(&12) && !ts.contains(&-6) && !ts.contains(&-24));
}

#[test]
fn omega_ell1_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = ibqrm(&["omega", "--ell", "1", "--g-step", "0.5", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_csv_header(dir.path(), "omega.csv");
    let c = read_json(&dir.path().join("omega_counts.json"));
    assert_valid("omega_counts.schema.json", &c);
    let c = c.as_array().unwrap();
    assert_eq!(c.len(), 12);
    for (k, row) in c.iter().enumerate() {
        assert_eq!(row["n"], k as u64 + 1);
        let counts: Vec<u64> = row["counts"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        // at g = 0 every one of the N roots in Δ² is positive
        assert_eq!(counts[0], k as u64 + 1);
        assert!(counts[0] >= counts[1] && counts[1] >= counts[2], "{counts:?}");
    }
}

#[test]
fn derive_j_and_juddian_reports() {
    let o = ibqrm(&["derive-j", "--ell", "2"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_valid("derive_j.schema.json", &v);
    assert_eq!(v["commutation"]["holds"], true);
    assert_eq!(v["square"]["holds"], true);
    assert_eq!(v["table_ratio"], "1");

    let o = ibqrm(&["juddian", "--n", "1", "--ell", "1", "--delta", "1", "--g", "1/2"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_valid("juddian.schema.json", &v);
    let p = &v["points"][0];
    assert_eq!((p["lambda"].as_str(), p["alpha"].as_str(), p["beta"].as_str()), (Some("5/4"), Some("3"), Some("1")));

    let o = ibqrm(&["juddian", "--n", "1", "--ell", "1", "--delta", "1"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_valid("juddian.schema.json", &v);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 1);
    let mu = pts[0]["parity"]["mu"].as_f64().unwrap();
    assert!((mu - 3f64.sqrt()).abs() < 1e-10);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let runs: Vec<_> = ["1", "3"]
        .iter()
        .map(|t| {
            let dir = tempfile::tempdir().unwrap();
            let d = dir.path().to_str().unwrap();
            let v = ibqrm_threads(t, &["verify-all", "--ell-max", "3", "--n-max", "4"]);
            assert!(v.status.success());
            let s = ibqrm_threads(t, &[
                "sweep", "--ell", "2", "--delta", "0.5", "--g-max", "0.6", "--g-step", "0.1", "--n-levels", "8",
                "--dim-fock", "60", "--out-dir", d,
            ]);
            assert!(s.status.success());
            let e = ibqrm_threads(t, &["elliptic", "--t-min", "-5", "--t-max", "5", "--seed", "7", "--out-dir", d]);
            assert!(e.status.success());
            let files: Vec<Vec<u8>> = ["sweep.csv", "crossings.json", "elliptic.json", "et_scan.csv"]
                .iter()
                .map(|f| fs::read(dir.path().join(f)).unwrap())
                .collect();
            (v.stdout, s.stdout, e.stdout, files)
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn verify_all_ell0_is_fast() {
    let t = std::time::Instant::now();
    let o = ibqrm(&["verify-all", "--ell-max", "0"]);
    let el = t.elapsed();
    assert!(o.status.success());
    assert!(el < std::time::Duration::from_secs(1), "{el:?}");
}

#[test]
fn io_errors_name_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("not-a-dir");
    fs::write(&blocker, "x").unwrap();
    let o = ibqrm(&["elliptic", "--t-min", "0", "--t-max", "1", "--out-dir", blocker.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("not-a-dir"), "{stderr}");
}
