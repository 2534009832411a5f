//! End-to-end checks of the `coded` binary: porcelain output is byte-stable
//! against golden files, exit codes follow the contract, and the bundled
//! data files round-trip through the parsers.

use std::path::Path;
use std::process::Command;

fn coded(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_coded"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).expect("golden file exists")
}

fn check_golden(args: &[&str], name: &str) {
    let out = coded(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        golden(name),
        "porcelain output for {args:?} drifted from {name}"
    );
}

#[test]
fn porcelain_output_matches_golden_files() {
    check_golden(
        &["--porcelain", "check", "code", "data/even.code"],
        "check_code_even.txt",
    );
    check_golden(
        &["--porcelain", "recode", "data/abba.code"],
        "recode_abba.txt",
    );
    check_golden(
        &["--porcelain", "beta", "--period", "10", "--dot"],
        "beta_golden_mean.txt",
    );
    check_golden(
        &["--porcelain", "sft", "data/golden_forbidden.code"],
        "sft_golden_mean.txt",
    );
    check_golden(
        &[
            "--porcelain",
            "blockmap",
            "data/golden_to_even.map",
            "data/golden.aut",
        ],
        "blockmap_even.txt",
    );
    check_golden(
        &["--porcelain", "check", "strongly-unambiguous", "data/even.aut"],
        "check_strong_even.txt",
    );
    check_golden(
        &["--porcelain", "morphism", "circular", "data/thue_morse.morph"],
        "morphism_circular_tm.txt",
    );
}

#[test]
fn exit_codes() {
    // a computed verdict exits 0 even when the answer is false
    assert_eq!(
        coded(&["check", "strongly-unambiguous", "data/even.aut"])
            .status
            .code(),
        Some(0)
    );
    // unreadable input
    assert_eq!(coded(&["check", "code", "data/missing.code"]).status.code(), Some(1));
    // malformed input carries a line number on stderr
    let dir = tempdir();
    let bad = dir.join("bad.aut");
    std::fs::write(&bad, "0 a 0\n0 ab 1\n").unwrap();
    let out = coded(&["dot", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    // a non-prefix code is an input error for recode
    let bad_code = dir.join("bad.code");
    std::fs::write(&bad_code, "a\nab\n").unwrap();
    assert_eq!(
        coded(&["recode", bad_code.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("coded-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn bundled_files_round_trip() {
    use coded_shifts::io::{
        format_automaton, format_code, format_morphism, parse_automaton, parse_code,
        parse_morphism, CodeInput,
    };
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut seen = 0;
    for entry in std::fs::read_dir(&data).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        match ext {
            "aut" => {
                let a = parse_automaton(&text).unwrap();
                let b = parse_automaton(&format_automaton(&a)).unwrap();
                assert_eq!(format_automaton(&a), format_automaton(&b));
                seen += 1;
            }
            "code" => {
                if let CodeInput::Finite(c) = parse_code(&text).unwrap() {
                    let CodeInput::Finite(d) = parse_code(&format_code(&c)).unwrap() else {
                        panic!("finite code reparsed as expression");
                    };
                    assert_eq!(c.words(), d.words());
                    seen += 1;
                }
            }
            "morph" => {
                let m = parse_morphism(&text).unwrap();
                let n = parse_morphism(&format_morphism(&m)).unwrap();
                assert_eq!(format_morphism(&m), format_morphism(&n));
                seen += 1;
            }
            _ => {}
        }
    }
    assert!(seen >= 7, "expected the bundled corpus to be exercised");
}
