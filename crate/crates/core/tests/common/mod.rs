//! Golden CLI cases shared by the acceptance harness and the CLI tests.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub const SIGMA: [&str; 10] = [
    "--set", "x=0.3", "--set", "y=0.7", "--set", "w=0.6", "--set", "z=0.8", "--set", "xbar=0.5",
];

/// `(golden file stem, arguments)`; bindings from [`SIGMA`] are appended
/// when the stem ends in `@sigma`.
pub const CASES: &[(&str, &[&str])] = &[
    (
        "ftf_psi1_compact",
        &["ftf", "--fixtures", "--system", "psi1", "--mode", "compact"],
    ),
    ("ftf_psi1_raw", &["ftf", "--fixtures", "--system", "psi1"]),
    (
        "ftf_phi_compact",
        &["ftf", "--fixtures", "--system", "phi", "--mode", "compact"],
    ),
    (
        "ftf_psi4_canonical_json",
        &[
            "ftf",
            "--fixtures",
            "--system",
            "psi4",
            "--mode",
            "canonical",
            "--json",
        ],
    ),
    ("matrix_psi1", &["matrix", "--fixtures", "--system", "psi1"]),
    (
        "matrix_psi1_rec",
        &["matrix", "--fixtures", "--system", "psi1_rec"],
    ),
    (
        "matrix_phi_json",
        &["matrix", "--fixtures", "--system", "phi", "--json"],
    ),
    (
        "matrix_psi1_resolved@sigma",
        &["matrix", "--fixtures", "--system", "psi1", "--resolve"],
    ),
    (
        "eval_psi1@sigma",
        &["eval", "--fixtures", "--system", "psi1"],
    ),
    (
        "eval_phi_json@sigma",
        &["eval", "--fixtures", "--system", "phi", "--json"],
    ),
    (
        "closure_psi1@sigma",
        &["closure", "--fixtures", "--system", "psi1"],
    ),
    (
        "closure_psi1_rec_json@sigma",
        &["closure", "--fixtures", "--system", "psi1_rec", "--json"],
    ),
    (
        "trace_psi1_rec@sigma",
        &["trace", "--fixtures", "--system", "psi1_rec"],
    ),
    (
        "trace_phi_json@sigma",
        &["trace", "--fixtures", "--system", "phi", "--json"],
    ),
    (
        "expand_psi1_rec_compact",
        &[
            "expand",
            "--fixtures",
            "--system",
            "psi1_rec",
            "--mode",
            "compact",
        ],
    ),
    (
        "expand_psi1_rec_raw",
        &["expand", "--fixtures", "--system", "psi1_rec"],
    ),
    (
        "expand_psi1_rec_base",
        &[
            "expand",
            "--fixtures",
            "--system",
            "psi1_rec",
            "--rec-count",
            "0",
            "--mode",
            "compact",
        ],
    ),
    (
        "expand_phi_simplified",
        &[
            "expand",
            "--fixtures",
            "--system",
            "phi",
            "--simplify",
            "--mode",
            "canonical",
        ],
    ),
    (
        "power_psi1_k2@sigma",
        &[
            "power",
            "--expr",
            "x*z + x*xbar*w + y*w + y*xbar*z",
            "-k",
            "2",
            "--mode",
            "compact",
        ],
    ),
    (
        "power_two_terms_json",
        &["power", "--expr", "x1 + x2", "-k", "3", "--json"],
    ),
    ("check_seed42", &["check", "--seed", "42", "--trials", "25"]),
    ("fixtures", &["fixtures"]),
    (
        "fixtures_counts",
        &["fixtures", "--rec-count", "3", "--phi-counts", "1,2,3,4,5"],
    ),
];

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fuzzchain")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

pub fn case_args(stem: &str, args: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    if stem.ends_with("@sigma") {
        v.extend(SIGMA.iter().map(|s| s.to_string()));
    }
    v
}

pub fn golden_path(stem: &str) -> PathBuf {
    golden_dir().join(format!("{}.txt", stem.trim_end_matches("@sigma")))
}

pub fn run_cli(args: &[String]) -> Output {
    Command::new(bin())
        .args(args)
        .env_remove("FUZZCHAIN_SEED")
        .output()
        .expect("binary runs")
}

/// Runs a case twice; `Ok` if both runs exit 0, agree byte for byte and
/// match the golden file. `FUZZCHAIN_BLESS=1` rewrites the golden file.
pub fn check_case(stem: &str, args: &[&str]) -> Result<(), String> {
    let argv = case_args(stem, args);
    let first = run_cli(&argv);
    let second = run_cli(&argv);
    if !first.status.success() {
        return Err(format!(
            "{stem}: exit {:?}: {}",
            first.status.code(),
            String::from_utf8_lossy(&first.stderr)
        ));
    }
    if first.stdout != second.stdout {
        return Err(format!("{stem}: output differs between runs"));
    }
    let path = golden_path(stem);
    if std::env::var_os("FUZZCHAIN_BLESS").is_some() {
        std::fs::write(&path, &first.stdout).map_err(|e| e.to_string())?;
    }
    let want = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if want != first.stdout {
        return Err(format!("{stem}: output does not match {}", path.display()));
    }
    Ok(())
}
