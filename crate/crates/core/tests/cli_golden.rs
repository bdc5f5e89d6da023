//! Golden outputs of the command-line tool. Set `UPDATE_GOLDEN=1` to rewrite
//! them.

mod common;

use std::fs;

use common::{golden_path, run_case, run_cli, GOLDEN_CASES};

#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in GOLDEN_CASES {
        for format in ["csv", "json"] {
            let (code, out, err) = run_case(args, format);
            assert_eq!(code, 0, "{name}: {err}");
            let path = golden_path(name, format);
            if update {
                fs::write(&path, &out).unwrap();
                continue;
            }
            let expected =
                fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(
                out, expected,
                "{name}.{format} drifted from the golden file"
            );
        }
    }
}

#[test]
fn scatter_rows_are_unitary() {
    let (_, csv, _) = run_case(GOLDEN_CASES[2].1, "csv");
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let (t, r, k) = (col("T"), col("R"), col("k"));
    let mut last_k = 0.0;
    for line in lines {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cells[t] + cells[r] - 1.0).abs() < 1e-12);
        assert!(cells[k] > last_k);
        last_k = cells[k];
    }
}

#[test]
fn resonance_rows_follow_closed_form() {
    let (_, csv, _) = run_case(GOLDEN_CASES[3].1, "csv");
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    lines.next();
    let mut rows = 0;
    for line in lines {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let (vt, k) = (cells[1], cells[2]);
        assert!((k - (std::f64::consts::PI * vt - 1.0).sqrt()).abs() < 1e-8);
        rows += 1;
    }
    assert!(rows >= 7);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bound.csv");
    let (_, stdout, _) = run_cli(GOLDEN_CASES[0].1);
    let mut args: Vec<&str> = GOLDEN_CASES[0].1.to_vec();
    let p = path.to_str().unwrap().to_string();
    args.extend(["--output", &p]);
    let (code, out, _) = run_cli(&args);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap(), stdout);
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kempf.cfg");
    fs::write(
        &path,
        "# kempf run\ndeformation = kempf\nbeta = 0.01\nv0 = 2\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let (code, from_file, _) = run_cli(&["bound", "--config", p, "--v0", "1"]);
    assert_eq!(code, 0);
    let (_, from_flags, _) = run_cli(GOLDEN_CASES[0].1);
    assert_eq!(from_file, from_flags);

    fs::write(&path, "deformation = kempf\nbeta = -1\n").unwrap();
    let (code, _, err) = run_cli(&["bound", "--config", p]);
    assert_eq!(code, 2);
    assert!(err.contains("`beta`"), "{err}");

    fs::write(&path, "v0 = 1\nthis line is wrong\n").unwrap();
    let (code, _, err) = run_cli(&["bound", "--config", p]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn computation_errors_exit_one() {
    let (code, _, err) = run_cli(&[
        "scatter",
        "--deformation",
        "cutoff",
        "--b",
        "1",
        "--k-min",
        "0.5",
        "--k-max",
        "2",
    ]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: "), "{err}");
}
