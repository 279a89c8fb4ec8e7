mod common;

use std::process::Command;

#[test]
fn every_stage_is_byte_identical_across_runs() {
    for (stage, same) in common::cli_stages_identical() {
        assert!(same, "{stage} output differs between runs");
    }
}

fn exit_code(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_poolcast")).args(args).output().unwrap().status.code().unwrap()
}

#[test]
fn exit_codes_distinguish_usage_and_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    let missing = missing.to_str().unwrap();
    assert_eq!(exit_code(&["features", "--panel", missing, "--out", "x.csv"]), 3);
    assert_eq!(exit_code(&["cluster", "--features", missing, "--kmax", "many", "--out", "x"]), 3);
    assert_eq!(exit_code(&["train", "--panel", missing, "--scheme", "nope", "--out", "m"]), 2);
    assert_eq!(exit_code(&["simulate"]), 2);
}
