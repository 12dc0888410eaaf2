use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn textchi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_textchi"))
        .args(args)
        .output()
        .expect("run textchi")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn book(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/books")
        .join(name)
}

#[test]
fn analyze_prints_report_and_curve() {
    let text = stdout(&textchi(&["analyze", s(&book("genesis_kjv.txt"))]));
    let (json, csv) = text.split_once("\n\n").unwrap();
    let v: Value = serde_json::from_str(json).unwrap();
    assert_eq!(v["source_id"], "genesis_kjv.txt");
    assert_eq!(v["verdict"], "coherent_text");
    assert_eq!(v["seed"], 42);
    assert_eq!(v["words"], 38_369);
    assert!(v["chi"].as_f64().unwrap() > 1.02);
    assert!(v["conventions"]["tokenization"].is_string());
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "k,swaps,bytes");
    assert_eq!(rows.len(), 22);
    assert!(rows[1].starts_with("0,0,"));
}

#[test]
fn analyze_writes_curve_file_and_honours_options() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.csv");
    let text = stdout(&textchi(&[
        "analyze",
        s(&book("roosevelt_1907_annual_message.txt")),
        "--max-k",
        "8",
        "--plateau-start",
        "4",
        "--backend",
        "gzip",
        "--curve-out",
        s(&curve),
    ]));
    let v: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(v["plateau_k_start"], 4);
    assert!(v["backend"].as_str().unwrap().contains("gzip"));
    assert_eq!(fs::read_to_string(curve).unwrap().lines().count(), 10);
}

#[test]
fn curve_by_length_lists_requested_prefixes() {
    let text = stdout(&textchi(&[
        "curve-by-length",
        s(&book("moby_dick.txt")),
        "--lengths",
        "5000,20000",
    ]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "length,symbols,chi");
    assert!(rows[1].starts_with("5000,"));
    assert!(rows[2].starts_with("20000,"));
}

#[test]
fn generate_batch_compare_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let zipf = dir.path().join("zipf");
    let real = dir.path().join("real");
    fs::create_dir(&real).unwrap();
    stdout(&textchi(&[
        "generate",
        "--count",
        "3",
        "--seed",
        "5",
        "--out-dir",
        s(&zipf),
    ]));

    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(zipf.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["first_seed"], 5);
    let files = manifest["files"].as_array().unwrap();
    assert_eq!(files.len(), 3);
    assert_eq!(files[2]["file"], "zipf_000007.txt");
    assert_eq!(files[2]["seed"], 7);
    let n = fs::read_to_string(zipf.join("zipf_000007.txt"))
        .unwrap()
        .chars()
        .count();
    assert_eq!(files[2]["symbols"], n);

    let genesis = fs::read_to_string(book("genesis_kjv.txt")).unwrap();
    let words: Vec<&str> = genesis.split_whitespace().collect();
    for (i, chunk) in words.chunks(2000).take(2).enumerate() {
        fs::write(real.join(format!("g{i}.txt")), chunk.join(" ")).unwrap();
    }
    fs::write(real.join("notes.md"), "ignored").unwrap();

    let real_json = dir.path().join("real.json");
    let art_json = dir.path().join("art.json");
    let csv = dir.path().join("real.csv");
    stdout(&textchi(&[
        "batch",
        s(&real),
        "--out",
        s(&real_json),
        "--csv",
        s(&csv),
    ]));
    stdout(&textchi(&["batch", s(&zipf), "--out", s(&art_json)]));

    let r: Value = serde_json::from_str(&fs::read_to_string(&real_json).unwrap()).unwrap();
    assert_eq!(r["entries"].as_array().unwrap().len(), 2);
    assert_eq!(r["run_config"]["base_seed"], 42);
    let table = fs::read_to_string(csv).unwrap();
    assert!(table.starts_with("rank,source_id,chi,symbols,verdict"));
    assert_eq!(table.lines().count(), 3);

    let cmp: Value = serde_json::from_str(&stdout(&textchi(&[
        "compare",
        "--real",
        s(&real_json),
        "--artificial",
        s(&art_json),
    ])))
    .unwrap();
    assert_eq!(cmp["overlap"], 0);
    assert_eq!(cmp["artificial"]["count"], 3);
    assert!(cmp["real"]["min"].as_f64().unwrap() > cmp["artificial"]["max"].as_f64().unwrap());
}

#[test]
fn rank_frequency_table() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.txt");
    fs::write(&f, "b \"q\" a b").unwrap();
    let text = stdout(&textchi(&["rank-frequency", s(&f)]));
    assert_eq!(
        text,
        "rank,word,frequency\n1,\"b\",2\n2,\"\"\"q\"\"\",1\n3,\"a\",1\n"
    );
}

#[test]
fn latin1_needs_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("l.txt");
    fs::write(&f, b"caf\xe9 au lait caf\xe9").unwrap();
    assert!(!textchi(&["rank-frequency", s(&f)]).status.success());
    let text = stdout(&textchi(&["rank-frequency", "--latin1", s(&f)]));
    assert!(text.contains("1,\"caf\u{e9}\",2"));
}

#[test]
fn errors_exit_non_zero() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.txt");
    fs::write(&one, "solitary").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["analyze", s(&one)],
        vec!["analyze", "/no/such/file.txt"],
        vec!["analyze", s(&one), "--gzip-level", "12"],
        vec!["analyze", s(&one), "--swap-divisor", "0"],
        vec!["curve-by-length", s(&one), "--lengths", "10,5"],
        vec!["generate", "--count", "0", "--out-dir", s(dir.path())],
        vec!["generate", "--exponent", "-1", "--out-dir", s(dir.path())],
    ];
    for args in cases {
        let out = textchi(&args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty());
    }
}
