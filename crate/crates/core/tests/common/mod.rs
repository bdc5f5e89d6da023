#![allow(dead_code)]

use std::path::PathBuf;

/// One fixed invocation per subcommand; `{fmt}` is replaced by csv or json.
pub const GOLDEN_CASES: &[(&str, &[&str])] = &[
    (
        "bound",
        &[
            "bound",
            "--deformation",
            "kempf",
            "--beta",
            "0.01",
            "--v0",
            "1",
        ],
    ),
    (
        "wavefunction",
        &[
            "wavefunction",
            "--deformation",
            "cutoff",
            "--b",
            "10",
            "--x-min",
            "-3",
            "--x-max",
            "3",
            "--samples",
            "13",
        ],
    ),
    (
        "scatter",
        &[
            "scatter",
            "--deformation",
            "cutoff",
            "--b",
            "10",
            "--v0",
            "12.566370614359172",
            "--k-min",
            "0.1",
            "--k-max",
            "9.9",
            "--samples",
            "25",
        ],
    ),
    (
        "resonance",
        &[
            "resonance",
            "--deformation",
            "kempf",
            "--beta",
            "1",
            "--v0-min",
            "0.5",
            "--v0-max",
            "10",
            "--samples",
            "8",
        ],
    ),
    (
        "flux",
        &[
            "flux",
            "--deformation",
            "maxmomentum",
            "--beta",
            "1",
            "--k-min",
            "0.05",
            "--k-max",
            "0.95",
            "--samples",
            "10",
        ],
    ),
    (
        "asymptotic-check",
        &[
            "asymptotic-check",
            "--deformation",
            "kempf",
            "--beta",
            "1",
            "--k",
            "1",
        ],
    ),
    ("selfcheck", &["selfcheck"]),
];

pub fn golden_path(name: &str, format: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join(format!("{name}.{format}"))
}

/// Runs the CLI in-process and returns (exit code, stdout, stderr).
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("minlen-delta").chain(args.iter().copied());
    let code = minlen_delta::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("utf-8 stdout"),
        String::from_utf8(err).expect("utf-8 stderr"),
    )
}

pub fn run_case(args: &[&str], format: &str) -> (i32, String, String) {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--format", format]);
    run_cli(&full)
}
