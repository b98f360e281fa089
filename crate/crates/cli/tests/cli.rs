use std::path::PathBuf;
use std::process::{Command, Output};

use fwexpand::algebra::hamiltonian::dirac_hamiltonian;
use fwexpand::algebra::{parse_operator, Pauli};
use fwexpand::dirac::Gamma;
use fwexpand::fw::{fw_reduce, two_component, Branch};

fn fwexpand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fwexpand"))
        .args(args)
        .env_remove("FWEXPAND_UNITS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = fwexpand(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    fwexpand(args).status.code().expect("exit code")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("fwexpand-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

/// Compares against a checked-in file; `FWEXPAND_BLESS=1` rewrites it.
fn check_golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("FWEXPAND_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden {name} differs");
}

#[test]
fn expand_upper_lists_seven_terms_and_reparses() {
    let text = stdout(&["expand", "--branch", "upper", "--order", "2"]);
    let lines: Vec<(&str, &str)> = text.lines().map(|l| l.split_once(": ").unwrap()).collect();
    let names: Vec<&str> = lines.iter().map(|(n, _)| *n).collect();
    assert_eq!(names, ["rest", "potential", "kinetic", "zeeman", "mass_correction", "spin_orbit", "darwin"]);

    let h = two_component(&fw_reduce(&dirac_hamiltonian()).unwrap(), Branch::Upper).unwrap();
    let a = h.assumptions();
    for (name, body) in lines {
        let parsed = parse_operator::<Pauli>(body, a).unwrap();
        let expected = match name {
            "rest" => h.rest.clone(),
            "potential" => h.potential.clone(),
            "kinetic" => h.kinetic.clone(),
            "zeeman" => h.zeeman.clone(),
            "mass_correction" => h.mass_correction.expand().unwrap(),
            "spin_orbit" => h.spin_orbit.clone(),
            "darwin" => h.darwin.clone(),
            other => panic!("unexpected term {other}"),
        };
        assert_eq!(parsed, expected, "{name}");
    }
}

#[test]
fn expand_four_component_reparses() {
    let text = stdout(&["expand", "--ledger"]);
    let mut lines = text.lines();
    let body = lines.next().unwrap().strip_prefix("H: ").unwrap();
    let report = fw_reduce(&dirac_hamiltonian()).unwrap();
    let h = &report.final_hamiltonian;
    assert_eq!(&parse_operator::<Gamma>(body, h.assumptions()).unwrap(), h);
    let ledger: Vec<&str> = lines.collect();
    assert_eq!(ledger.len(), report.dropped.len());
    assert!(ledger.iter().all(|l| l.starts_with("# dropped stage")));
}

#[test]
fn expand_other_formats() {
    let latex = stdout(&["expand", "--branch", "lower", "--format", "latex"]);
    assert!(latex.starts_with("\\begin{align}\n") && latex.ends_with("\\end{align}\n"));
    assert_eq!(latex.matches("&=").count(), 7);
    let csv = stdout(&["expand", "--branch", "upper", "--format", "csv"]);
    assert_eq!(csv.lines().next(), Some("term,expression"));
    assert_eq!(csv.lines().count(), 8);
}

#[test]
fn spectrum_zero_field() {
    let single = stdout(&["--format", "csv", "spectrum", "--B", "0", "--n", "0", "--s", "-1"]);
    assert_eq!(single, "n,p_z,s,B,D,epsilon_exact,epsilon_expanded,residual,splitting\n0,0,-1,0,0,1,1,0,0\n");
    let both = stdout(&["--format", "csv", "spectrum", "--B", "0", "--n", "0"]);
    let rows: Vec<&str> = both.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.split(',').nth(5) == Some("1")));
}

#[test]
fn spectrum_csv_golden() {
    let csv = stdout(&["--format", "csv", "spectrum", "--B", "0.005,0.01,0.02", "--n", "0..=5"]);
    check_golden("spectrum.csv", &csv);
    assert_eq!(csv, stdout(&["spectrum", "--B", "0.005,0.01,0.02", "--n", "0..=5", "--format", "csv"]));
}

#[test]
fn moment_example() {
    let text = stdout(&["--format", "csv", "moment", "--epsilon-factors", "1,2,4"]);
    assert_eq!(text, "epsilon,mu,mu_over_mu_B\n1,0.5,1\n2,0.25,0.5\n4,0.125,0.25\n");
}

#[test]
fn units_from_environment_and_flag() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_fwexpand"));
        cmd.env_remove("FWEXPAND_UNITS");
        if let Some(v) = env {
            cmd.env("FWEXPAND_UNITS", v);
        }
        let out = cmd.args(args).output().unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let args = ["--format", "csv", "--precision", "5", "moment", "--epsilon-factors", "1"];
    let si = run(Some("si"), &args);
    assert_eq!(si.lines().nth(1).unwrap().split(',').nth(1), Some("9.274e-24"));
    let flagged: Vec<&str> = std::iter::once("--units").chain(["natural"]).chain(args).collect();
    assert_eq!(run(Some("si"), &flagged), run(None, &args));
    let mut bad = Command::new(env!("CARGO_BIN_EXE_fwexpand"));
    let out = bad.env("FWEXPAND_UNITS", "furlongs").args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn splitting_table_decreases() {
    let csv = stdout(&["--format", "csv", "splitting", "--B", "0.01", "--n", "0..=20"]);
    let values: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 21);
    assert!(values.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn identities_pass() {
    let text = stdout(&["identities", "--pairs", "10"]);
    let total = text.lines().last().unwrap();
    assert!(total.starts_with("total") && total.trim_end().ends_with(" 0"), "{total}");
}

#[test]
fn gauge_check_small_grid() {
    let args = ["gauge-check", "--n", "24", "--length", "40", "--eigs", "4", "--center", "5,0"];
    let text = stdout(&args);
    let value = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(&format!("# {key} "))).unwrap();
        line.rsplit(' ').next().unwrap().parse().unwrap()
    };
    assert!(value("max_relative_discrepancy") <= 1e-9);
    assert!(value("covariance_defect") <= 1e-12);
    assert_eq!(text, stdout(&args));

    let p_form = stdout(&["gauge-check", "--n", "24", "--length", "40", "--eigs", "4", "--center", "5,0", "--spin-orbit", "p"]);
    assert!(p_form.contains("# covariance_defect"));
}

#[test]
fn gauge_check_from_config() {
    let cfg = temp_file(
        "ok.toml",
        "[grid]\nn = 20\nl = 30.0\n[field]\nb = 0.02\n[solver]\nk = 3\n",
    );
    let csv = stdout(&["--config", cfg.to_str().unwrap(), "--format", "csv", "gauge-check"]);
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 4);

    let stalled = temp_file("stall.toml", "[grid]\nn = 40\nl = 60.0\n[field]\nb = 0.02\n[solver]\nk = 8\nmax_iter = 1\ntol = 1e-14\n");
    assert_eq!(code(&["--config", stalled.to_str().unwrap(), "gauge-check"]), 4);

    let broken = temp_file("broken.toml", "[grid]\nn = 20\n");
    assert_eq!(code(&["--config", broken.to_str().unwrap(), "gauge-check"]), 2);
    let coarse = temp_file("coarse.toml", "[grid]\nn = 20\nl = 300.0\n[field]\nb = 0.5\n");
    assert_eq!(code(&["--config", coarse.to_str().unwrap(), "gauge-check"]), 3);
    for p in [cfg, stalled, broken, coarse] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["expand", "--order", "3"]), 3);
    assert_eq!(code(&["spectrum", "--B", "-0.1"]), 3);
    assert_eq!(code(&["splitting", "--B", "0"]), 3);
    assert_eq!(code(&["moment", "--epsilon-factors", "1/2"]), 3);
    assert_eq!(code(&["gauge-check", "--n", "8"]), 3);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["spectrum", "--n", "x"]), 2);
    assert_eq!(code(&["moment"]), 2);
    assert_eq!(code(&["--config", "/nonexistent.toml", "gauge-check"]), 2);
    assert_eq!(code(&["--config", "/nonexistent.toml", "moment", "--epsilon", "1"]), 2);
    let out = fwexpand(&["expand", "--order", "3"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
}
