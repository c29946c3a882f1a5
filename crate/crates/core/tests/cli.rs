//! End-to-end checks of the command-line interface: exit codes, format
//! handling, worked-example payloads, and byte-level determinism.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eisgauss"))
        .args(args)
        .env_remove("EISGAUSS_PREC")
        .output()
        .expect("binary runs")
}

fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eisgauss"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf8")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn parse(out: &Output) -> Value {
    serde_json::from_str(&stdout_of(out)).expect("stdout is json")
}

#[test]
fn tables_json_is_exact_and_deterministic() {
    let first = run(&["tables"]);
    assert_eq!(exit_code(&first), 0, "stderr: {}", stderr_of(&first));
    let second = run(&["tables", "--format", "json"]);
    assert_eq!(first.stdout, second.stdout);

    let v = parse(&first);
    assert_eq!(v["c_1"], "1");
    assert_eq!(v["c_7"], "160");
    assert_eq!(
        v["c_67"],
        "1710106255619904534930025572360427397429088633914126219002154844160000000000000"
    );
    assert_eq!(v["d_2"], "1/3");
    assert_eq!(v["d_5"], "-10/21");
    assert_eq!(v["G_6"], "27/140");
    assert_eq!(v["BH_6"], "972/7");
    assert_eq!(v["G_42"], "13525236691479/54100243159375892111360");
    assert_eq!(
        v["BH_42"],
        "105728085401024732275591284817369497600000000/301"
    );
}

#[test]
fn tables_csv_and_markdown_carry_the_same_rows() {
    let csv = run(&["tables", "--format", "csv"]);
    assert_eq!(exit_code(&csv), 0);
    let text = stdout_of(&csv);
    assert!(text.contains("# c\nn,value\n1,1\n"));
    assert!(text.contains("\n5,-10/21\n"));
    assert!(text.contains("# BH\n"));

    let md = run(&["tables", "--format", "markdown"]);
    assert_eq!(exit_code(&md), 0);
    let text = stdout_of(&md);
    assert!(text.contains("| 7 | 160 |"));
    assert!(text.contains("| 6 | 972/7 |"));
}

#[test]
fn json_payloads_round_trip_byte_identically() {
    for args in [
        vec!["tables"],
        vec!["gauss", "--ell", "7"],
        vec!["curve", "--ell", "13", "--prime", "5"],
        vec!["sha", "--ell", "7"],
    ] {
        let out = run(&args);
        assert_eq!(exit_code(&out), 0, "args: {args:?}");
        let text = stdout_of(&out);
        let v: Value = serde_json::from_str(&text).expect("parses");
        let rendered = serde_json::to_string_pretty(&v).expect("serializes") + "\n";
        assert_eq!(rendered, text, "args: {args:?}");
    }
}

#[test]
fn gauss_reports_the_worked_coefficients() {
    let out = run(&["gauss", "--ell", "7"]);
    assert_eq!(exit_code(&out), 0);
    let v = parse(&out);
    assert_eq!(v["alpha"]["a"], "0");
    assert_eq!(v["alpha"]["b"], "1");
    assert_eq!(v["precision_bits"], 128);
    assert!(v["gauss_sum"]["re"].as_str().unwrap().ends_with("p-128"));

    let out = run(&["gauss", "--ell", "13", "--prec", "192"]);
    assert_eq!(exit_code(&out), 0);
    let v = parse(&out);
    assert_eq!(v["alpha"]["a"], "1");
    assert_eq!(v["alpha"]["b"], "1");
    assert_eq!(v["precision_bits"], 192);
}

#[test]
fn verify_emits_one_line_per_prime() {
    let out = run(&["verify", "--lmax", "50"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    let lines: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).expect("line is json"))
        .collect();
    let ells: Vec<u64> = lines.iter().map(|l| l["ell"].as_u64().unwrap()).collect();
    assert_eq!(ells, [7, 13, 19, 31, 37, 43]);
    for line in &lines {
        match line["ell"].as_u64().unwrap() {
            19 | 37 => assert_eq!(line["skipped"], "excluded residue class"),
            _ => assert_eq!(line["passes"], true),
        }
    }
    assert!(stderr_of(&out).contains("verify: 4 passed, 2 skipped, 0 failed"));

    let again = run(&["verify", "--lmax", "50"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn curve_and_sha_match_the_worked_examples() {
    let out = run(&["curve", "--ell", "13", "--prime", "5"]);
    assert_eq!(exit_code(&out), 0);
    let v = parse(&out);
    assert_eq!(v["all_match"], true);
    assert_eq!(v["counts"][0]["norm"], 25);
    assert_eq!(v["counts"][0]["brute"], 36);

    let out = run(&["sha", "--ell", "7"]);
    assert_eq!(exit_code(&out), 0);
    let v = parse(&out);
    assert_eq!(v["predicted_sha"], "1");
    assert_eq!(v["congruence"]["matches"], true);

    let out = run(&["sha", "--ell", "67"]);
    assert_eq!(exit_code(&out), 0);
    let v = parse(&out);
    assert_eq!(v["predicted_sha"], "1");
    assert_eq!(v["sha"]["tamagawa_ramified"], 4);
}

#[test]
fn usage_errors_exit_with_code_two() {
    for args in [
        vec!["gauss", "--ell", "11"],
        vec!["gauss", "--ell", "19"],
        vec!["gauss", "--ell", "7", "--prec", "32"],
        vec!["gauss", "--ell", "7", "--format", "csv"],
        vec!["sha", "--ell", "7", "--format", "markdown"],
        vec!["verify", "--lmax", "5"],
        vec!["tables", "--format", "yaml"],
        vec!["nonsense"],
    ] {
        let out = run(&args);
        assert_eq!(exit_code(&out), 2, "args: {args:?}");
    }

    let out = run_with_env(&["gauss", "--ell", "7"], "EISGAUSS_PREC", "abc");
    assert_eq!(exit_code(&out), 2);
    let out = run_with_env(&["gauss", "--ell", "7"], "EISGAUSS_PREC", "16");
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn env_precision_feeds_the_default() {
    let out = run_with_env(&["gauss", "--ell", "7"], "EISGAUSS_PREC", "160");
    assert_eq!(exit_code(&out), 0);
    let v = parse(&out);
    assert_eq!(v["precision_bits"], 160);
}

#[test]
fn out_flag_writes_the_same_payload() {
    let dir = std::env::temp_dir().join("eisgauss-cli-test");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("tables.json");
    let piped = run(&["tables"]);
    let out = run(&["tables", "--out", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout_of(&out).is_empty());
    let written = std::fs::read(&path).expect("file written");
    assert_eq!(written, piped.stdout);
    std::fs::remove_dir_all(&dir).ok();
}
