use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tiletransport"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_writes_json_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let (json, svg) = (dir.path().join("p.json"), dir.path().join("p.svg"));
    let o = run(&["gen", "--system", "chair", "--level", "2", "--json", path(&json), "--svg", path(&svg)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["system"], "chair");
    assert_eq!(v["tiles"].as_array().unwrap().len(), 16);
    let svg = fs::read_to_string(&svg).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));

    // the JSON feeds back into other verbs
    let o = run(&["integrate", "--patch", path(&json), "--alpha", "NE:1,SW:-1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["integral"], "4/1+0/1φ");
}

#[test]
fn discrepancy_csv_follows_the_region_formula() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let args = ["discrepancy", "--system", "chair", "--alpha", "NE:1,SW:-1", "--family", "Rn", "--max", "6", "--out", path(&out)];
    assert!(run(&args).status.success());
    let first = fs::read_to_string(&out).unwrap();
    let mut rdr = csv::Reader::from_reader(first.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    for (i, row) in rows.iter().enumerate() {
        let n = i as i64 + 1;
        assert_eq!(&row[0], format!("R{n}"));
        assert_eq!(&row[1], format!("{}/1+0/1φ", (n - 1) * (1 << n) + 1));
        assert_eq!(&row[2], format!("{}/1+0/1φ", 4 << n));
    }
    assert!(run(&args).status.success());
    assert_eq!(fs::read_to_string(&out).unwrap(), first, "output is deterministic");
}

#[test]
fn transport_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let ok = run(&[
        "transport", "--system", "fibonacci", "--level", "7", "--source", "a:1", "--target", "b:phi",
        "--report", path(&report),
    ]);
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(fs::metadata(&report).unwrap().len() > 0);

    let cut = run(&[
        "transport", "--system", "chair", "--level", "3", "--source", "NE:2", "--target", "NE:1,SW:1",
        "--radius-step", "1",
    ]);
    assert_eq!(cut.status.code(), Some(3));
}

#[test]
fn stepwise_verifies_chair_exchange() {
    let o = run(&[
        "stepwise", "--system", "chair", "--level", "4", "--source", "NE:1,SW:1", "--target", "NW:1,SE:1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn casebook_chair_matches_expectations() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("c.json");
    let o = run(&["casebook", "--case", "chair", "--json", path(&json)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdicts match: yes"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v[0]["case"], "chair");
    assert_eq!(v[0]["pairs"].as_array().unwrap().len(), 3);
    assert_eq!(v[0]["matches"], true);
}

#[test]
fn bad_input_fails() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["integrate", "--system", "chair", "--level", "1", "--alpha", "XX:1"]).status.code(), Some(1));
}
