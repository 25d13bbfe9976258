use std::fs;
use std::path::PathBuf;

use torus_ainf_cli::{run, Outcome};

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("torus-ainf").chain(args.iter().copied()).map(std::ffi::OsString::from))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("torus-ainf-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn goldens() {
    let cases: [(&[&str], &str); 5] = [
        (&["hh-table", "--field", "Q", "--rmax", "8"], "hh_q_8.txt"),
        (&["hh-table", "--field", "F2", "--rmax", "8"], "hh_f2_8.txt"),
        (&["jacobi", "--order", "50"], "jacobi_50.txt"),
        (&["triangle", "--wrap", "4"], "triangle_4.txt"),
        (&["m6", "--field", "Q"], "m6_q.txt"),
    ];
    for (args, file) in cases {
        let out = cli(args);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        assert_eq!(out.stdout, golden(file), "{args:?}");
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["bogus"][..],
        &["hh-table", "--field", "F4"],
        &["m6", "--field", "F2"],
        &["mc", "--field", "F3", "--m6", "1", "--m8", "0"],
        &["check", "/nonexistent/file.txt"],
    ] {
        let out = cli(args);
        assert_eq!(out.code, 2, "{args:?}: {}", out.stdout);
        assert!(out.stderr.ends_with('\n'));
    }
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn mc_dump_check_round_trip() {
    let file = tmp("mc.txt");
    let path = file.to_str().unwrap();
    let out = cli(&["mc", "--m6", "1", "--m8", "-2", "--order", "10", "--out", path]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("RESULT PASS"));
    let check = cli(&["check", path]);
    assert_eq!(check.code, 0, "{}", check.stdout);

    // A corrupted coefficient must be reported as a mismatch.
    let text = fs::read_to_string(&file).unwrap();
    let bad = scale_first_entry(&text, "MU6");
    assert_ne!(bad, text);
    let broken = tmp("broken.txt");
    fs::write(&broken, bad).unwrap();
    assert_eq!(cli(&["check", broken.to_str().unwrap()]).code, 1);
}

fn scale_first_entry(text: &str, section: &str) -> String {
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    if let Some(start) = lines.iter().position(|l| l == section) {
        if let Some(l) = lines[start + 1..].iter_mut().find(|l| l.ends_with("-> e1")) {
            *l = l.replace("-> e1", "-> 3*e1");
        }
    }
    lines.join("\n") + "\n"
}

#[test]
fn minimal_model_dump_loads() {
    let file = tmp("minimal.txt");
    let out = cli(&["minimal-model", "--order", "8", "--out", file.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(cli(&["check", file.to_str().unwrap(), "--order", "8"]).code, 0);
}

#[test]
fn gauge_fix_keeps_invariants() {
    for extra in [&[][..], &["--seed", "11"]] {
        let mut args = vec!["gauge-fix", "--order", "8"];
        args.extend_from_slice(extra);
        let out = cli(&args);
        assert_eq!(out.code, 0, "{}", out.stdout);
        assert!(out.stdout.contains("invariants preserved: ok"));
    }
}

#[test]
fn skoldberg_records_reach_24() {
    let out = cli(&["hh-table", "--method", "skoldberg", "--rmax", "24", "--format", "records"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("(24, -18, 1)"));
}
