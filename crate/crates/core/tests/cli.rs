use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use picss::report::RunResult;
use picss::specseq::PageRecord;

fn picss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_picss"))
        .args(args)
        .env_remove("PICSS_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn picard_prints_invariant_factors() {
    let o = picss(&["picard", "--group", "Q8", "--field", "GF(4)"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "C4 x C2");
    let o = picss(&["picard", "--group", "C4", "--field", "GF(2)"]);
    assert_eq!(stdout(&o).trim(), "C2");
    let o = picss(&["picard", "--group", "C9"]);
    assert_eq!(stdout(&o).trim(), "C2");
}

#[test]
fn picard_rejects_c2() {
    let o = picss(&["picard", "--group", "C2", "--field", "GF(2)"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("error: n ≥ 2 required"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&picss(&["picard", "--group", "C6"])), 1);
    assert_eq!(code(&picss(&["picard", "--group", "Q8", "--field", "GF(3)"])), 1);
    assert_eq!(code(&picss(&["picard", "--group", "Q8", "--window", "1:2"])), 1);
    assert_eq!(code(&picss(&["frobnicate"])), 1);
    assert_eq!(code(&picss(&["chart", "--group", "C4", "--page", "9"])), 1);
}

#[test]
fn picard_json_result() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = picss(&["picard", "--group", "Q16", "--emit", "json", "--out", out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let printed: RunResult = serde_json::from_str(&stdout(&o)).unwrap();
    let written: RunResult = serde_json::from_str(&fs::read_to_string(dir.path().join("Q16_GF2.json")).unwrap()).unwrap();
    assert_eq!(printed, written);
    assert_eq!(printed.picard.invariant_factors, vec![2, 4]);
    assert_eq!(printed.picard.free_rank, 0);
    assert!(printed.certificates.faithfulness);
    assert_eq!(printed.certificates.pages_cached, vec![2, 3, 4, 5]);
    let s: Vec<i32> = printed.zero_line.iter().map(|z| z.s).collect();
    assert_eq!(s, vec![2, 3]);
}

#[test]
fn faithful_certificates() {
    let o = picss(&["faithful", "--group", "Q16"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cert["contractible"], true);
    assert_eq!(cert["last_differential"], 4);
    assert_eq!(cert["pages"], serde_json::json!([2, 3, 4, 5]));
    let o = picss(&["faithful", "--group", "C9", "--field", "GF(3)"]);
    let cert: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cert["last_differential"], 2);
}

#[test]
fn faithful_without_datum() {
    let o = picss(&["faithful", "--group", "C_3^2"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("no extension datum"));
}

#[test]
fn svg_matches_golden_file() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/c4_hfpss_e2.svg");
    let args = ["chart", "--group", "C4", "--field", "GF(2)", "--variant", "hfpss", "--page", "2", "--window=-4:4,-4:4"];
    let first = picss(&args);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    assert_eq!(stdout(&first), fs::read_to_string(golden).unwrap());
    assert_eq!(first.stdout, picss(&args).stdout);
}

#[test]
fn contractible_page_draws_grid_only() {
    let o = picss(&["chart", "--group", "C4", "--variant", "tate", "--page", "3", "--window=-4:4,-4:4"]);
    let svg = stdout(&o);
    assert!(svg.contains(r#"<g id="grid""#));
    assert!(!svg.contains("<g><title>"));
    assert!(!svg.contains("marker-end"));
}

#[test]
fn q8_tate_e4_arrows_are_d4() {
    let o = picss(&["chart", "--group", "Q8", "--variant", "tate", "--page", "4", "--emit", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rec = PageRecord::from_json(&stdout(&o)).unwrap();
    assert!(!rec.differentials.is_empty());
    for d in &rec.differentials {
        assert_eq!([d.target[0] - d.source[0], d.target[1] - d.source[1]], [4, 3]);
        assert!((-4..0).contains(&d.source[0]), "{:?}", d.source);
        assert_eq!(d.matrix.len(), d.matrix[0].len());
    }
    let svg = stdout(&picss(&["chart", "--group", "Q8", "--variant", "tate", "--page", "4"]));
    assert_eq!(svg.matches("marker-end").count(), rec.differentials.len());
}

#[test]
fn cyclic_pic_e3_keeps_one_zero_line_class() {
    let o = picss(&["chart", "--group", "C8", "--variant", "pic", "--page", "3", "--emit", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let page: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let zero_line: Vec<&serde_json::Value> = page["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["s"] == e["t"] && e["s"].as_i64().unwrap() > 0)
        .filter(|e| e["group"]["invariant_factors"].as_array().is_some_and(|f| !f.is_empty()))
        .collect();
    assert_eq!(zero_line.len(), 1);
    assert_eq!(zero_line[0]["s"], 2);
    let svg = stdout(&picss(&["chart", "--group", "C8", "--variant", "pic", "--page", "3"]));
    assert!(svg.contains("<polygon"));
    assert!(svg.contains("<title>C2</title>"));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["chart", "--group", "C4", "--variant", "hfpss", "--page", "3", "--emit", "json", "--cache", cache];
    let fresh = picss(&args);
    assert_eq!(code(&fresh), 0, "{}", stderr(&fresh));
    let keys: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(keys.len(), 1);
    for r in 2..=3 {
        let text = fs::read_to_string(keys[0].join(format!("E{r}.json"))).unwrap();
        let rec = PageRecord::from_json(&text).unwrap();
        assert_eq!(rec.to_json().unwrap(), text);
    }
    assert_eq!(picss(&args).stdout, fresh.stdout);

    let env_dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_picss"))
        .args(["faithful", "--group", "C4", "--cache", cache])
        .env("PICSS_CACHE", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_dir(env_dir.path()).unwrap().count(), 1);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn batch_runs_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("jobs.txt");
    fs::write(&file, "# jobs\nQ8 GF(4)\nC9\n\nQ8 GF(2)\nC4 GF(4)\n").unwrap();
    let out = dir.path().join("out");
    let o = picss(&["batch", file.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines, ["Q8 GF(4): C4 x C2", "C9 GF(3): C2", "Q8 GF(2): C4", "C4 GF(4): C2"]);
    assert_eq!(fs::read_dir(&out).unwrap().count(), 4);

    fs::write(&file, "C4\nC2 GF(2)\n").unwrap();
    let o = picss(&["batch", file.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("C2 GF(2): error: n ≥ 2 required"));
}

#[test]
fn reproduce_filters_and_detects_corruption() {
    let o = picss(&["reproduce", "--only", "cech"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 2);
    let o = picss(&["reproduce", "--only", "differentials", "--corrupt-seed"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("d∘d ≠ 0"), "{}", stderr(&o));
}
