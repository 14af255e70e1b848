use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn sdcodes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdcodes")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

const Q12: &str = "family=qt n=12 rA=001001 label=q12";
const F12: &str = "family=4nc n=12 rA=001 rB=001 label=f12";

const H4: &str = "1 1 1 1\n1 -1 1 -1\n1 1 -1 -1\n1 -1 -1 1\n";
const H4_PERMUTED: &str = "1 -1 -1 1\n-1 -1 1 1\n1 1 1 1\n-1 1 -1 1\n";

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&sdcodes(&[])), 2);
    assert_eq!(code(&sdcodes(&["frobnicate"])), 2);
    assert_eq!(code(&sdcodes(&["tuple", "F999"])), 2);
    assert_eq!(code(&sdcodes(&["analyze", "family=qt n=12 rA=01 label=x"])), 2);
    assert_eq!(code(&sdcodes(&["reproduce-table", "T9"])), 2);
    assert_eq!(code(&sdcodes(&["analyze", Q12, "--budget", "lots"])), 2);
}

#[test]
fn budget_exhaustion_exits_with_three() {
    let o = sdcodes(&["analyze", "P36", "--budget", "3^10"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn construct_and_analyze_formats() {
    let o = sdcodes(&["construct", F12, "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["k"], 6);
    assert_eq!(v["self_dual"], true);
    assert_eq!(v["generator"].as_array().unwrap().len(), 6);

    let v = json(&sdcodes(&["analyze", F12, "--format", "json"]));
    assert_eq!(v["min_weight"], 3);
    assert_eq!(v["extremality"], "near-extremal");
    let counts: Vec<u64> = v["enumerator"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(counts.iter().sum::<u64>(), 729);

    let o = sdcodes(&["analyze", F12, "--format", "csv", "--threads", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().count() > 1);
    let text = stdout(&sdcodes(&["analyze", F12]));
    assert!(text.contains("minimum weight: 3") && text.contains("extremality: near-extremal"));
}

#[test]
fn code_equivalence_sets_the_exit_code() {
    let o = sdcodes(&["equiv", Q12, F12]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o).trim(), "equivalent");
    let o = sdcodes(&["equiv", Q12, "family=qt n=12 rA=000000 label=z"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).trim(), "not equivalent");
}

#[test]
fn matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.txt");
    fs::write(&path, format!("{H4}\n{H4_PERMUTED}")).unwrap();
    let p = path.display().to_string();
    let o = sdcodes(&["equiv", "--matrices", &format!("{p}#1"), &format!("{p}#2")]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let aut = stdout(&sdcodes(&["aut", &p]));
    let lines: Vec<&str> = aut.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0].split(": ").nth(1), lines[1].split(": ").nth(1));

    let v = json(&sdcodes(&["canon", "--matrices", &p, "--format", "json"]));
    assert_eq!(v[0]["cert"], v[1]["cert"]);
    assert_eq!(code(&sdcodes(&["equiv", "--matrices", &format!("{p}#3"), &p])), 2);
}

#[test]
fn classify_suspends_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("qt.ck");
    let ck = ck.to_str().unwrap();
    let args = ["classify", "--family", "qt", "--length", "12", "--shard", "100"];
    let mut first = args.to_vec();
    first.extend(["--checkpoint", ck, "--budget", "200"]);
    let o = sdcodes(&first);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains(ck));

    let mut resume = args.to_vec();
    resume.extend(["--resume", ck, "--format", "json"]);
    let o = sdcodes(&resume);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["classes"].as_array().unwrap().len(), 1);
    assert_eq!(v["survivors"], 12);
}

#[test]
fn reproduce_table_reports() {
    let o = sdcodes(&["reproduce-table", "T1", "--sample", "1-3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches("skipped").count(), 3 + 1);
    let o = sdcodes(&["reproduce-table", "AUT", "--sample", "", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn fetch_from_a_file_url() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("list.txt");
    fs::write(&path, format!("{H4}\n{H4_PERMUTED}")).unwrap();
    let url = format!("file://{}", path.display());
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let v = json(&sdcodes(&["fetch", "--url", &url, "--cache-dir", cache, "--format", "json"]));
    assert_eq!(v["matrices"], 2);
    assert_eq!(v["from_cache"], false);
    // two equivalent matrices, not the published list
    let o = sdcodes(&["fetch", "--url", &url, "--cache-dir", cache, "--check"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("cache"));
    let o = Command::new(env!("CARGO_BIN_EXE_sdcodes"))
        .args(["fetch", "--format", "json"])
        .env("SDCODES_HMAT_URL", &url)
        .output()
        .unwrap();
    assert_eq!(json(&o)["url"], url.as_str());
}

#[test]
fn search_writes_representatives() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reps.txt");
    let o = sdcodes(&["search", "F260", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("(36, 36, 1, 1, 1)"));
    assert!(stdout(&o).contains("|Aut| = 72"));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 36);
    let aut = stdout(&sdcodes(&["aut", out.to_str().unwrap()]));
    assert_eq!(aut.trim(), "1: 72");
}
