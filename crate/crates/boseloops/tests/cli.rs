//! Command-line tool: output formats, determinism and exit codes.

#![allow(clippy::excessive_precision)]

use std::path::Path;
use std::process::{Command, Output};

use boseloops::cli::{render, run, Cell, Command as Sub, Format, ResultTable, RunConfig};

const ISO: &str = r#"{
    "trap": { "model": "isotropic", "d": 3, "kappa_ladder": [0.1, 0.05, 0.02, 0.01] },
    "state": { "beta": 1.0, "eta": 2.0 },
    "task": {
        "pairs": [ { "x": [0.5, 0.0, 0.0], "y": [0.0, 0.0, 0.0] }, { "x": [0.1, 0.2, 0.3], "y": [0.3, 0.2, 0.1] } ],
        "delta": 0.5,
        "grid": [ [0.5, 0.0, 0.0], [1.0, 0.0, 0.0], [1.5, 0.0, 0.0] ],
        "rescaled": true
    }
}"#;

const Q2D: &str = r#"{
    "trap": { "model": "quasi2d", "kappa_ladder": [0.1, 0.01], "kappa_c": 1.0 },
    "state": { "beta": 1.0, "eta": 2.0 }
}"#;

const Q1D: &str = r#"{
    "trap": { "model": "quasi1d", "kappa": 0.3, "kappa_c": 1.0 },
    "state": { "beta": 1.0, "nu": 1.8 }
}"#;

fn boseloops(args: &[&str], config: &str, dir: &Path) -> Output {
    let path = dir.join("run.json");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_boseloops"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .output()
        .unwrap()
}

#[test]
fn every_subcommand_runs() {
    let cfg = RunConfig::from_json(ISO).unwrap();
    for sub in [Sub::Thermo, Sub::MuSolve, Sub::Rdm, Sub::Profile, Sub::Loops] {
        let t = run(sub, &cfg).unwrap();
        assert!(!t.rows.is_empty(), "{}", sub.name());
        assert_eq!(t.metadata["command"], sub.name());
        assert!(t.metadata.contains_key("software"));
    }
    for text in [Q1D, Q2D] {
        let cfg = RunConfig::from_json(text).unwrap();
        for sub in [Sub::Thermo, Sub::AnisoCheck, Sub::Loops] {
            assert!(!run(sub, &cfg).unwrap().rows.is_empty());
        }
    }
}

#[test]
fn csv_has_metadata_header_and_full_precision() {
    let cfg = RunConfig::from_json(ISO).unwrap();
    let csv = render(&run(Sub::Thermo, &cfg).unwrap(), Format::Csv).unwrap();
    let mut lines = csv.lines();
    let first = lines.next().unwrap();
    assert!(first.starts_with("# "));
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("kappa,nu,mu,"));
    let row = csv.lines().filter(|l| !l.starts_with('#')).nth(1).unwrap();
    let mantissa = row.split(',').nth(1).unwrap().split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
}

#[test]
fn csv_and_json_round_trip() {
    let cfg = RunConfig::from_json(ISO).unwrap();
    let t = run(Sub::Rdm, &cfg).unwrap();
    let back = ResultTable::from_csv_str(&t.to_csv_string().unwrap()).unwrap();
    assert_eq!(back.columns, t.columns);
    assert_eq!(back.metadata, t.metadata);
    for (a, b) in back.rows.iter().zip(&t.rows) {
        for (u, v) in a.iter().zip(b) {
            assert_eq!(u.to_csv(), v.to_csv());
        }
    }
    let json = ResultTable::from_json_str(&t.to_json_string().unwrap()).unwrap();
    assert_eq!(json, t);
}

#[test]
fn divergences_are_tagged() {
    let cfg = RunConfig::from_json(ISO).unwrap();
    let t = run(Sub::Rdm, &cfg).unwrap();
    let j = t.column("open_trap").unwrap();
    assert!(matches!(t.rows[0][j], Cell::Divergent(_)));
    assert!(t.rows[0][j].to_csv().starts_with("divergent:kappa^-1.5"));
    let json = t.to_json_string().unwrap();
    assert!(json.contains("\"law\": \"power_law\""));
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let one = boseloops(&["profile", "--threads", "1"], ISO, dir.path());
    let four = boseloops(&["profile", "--threads", "4"], ISO, dir.path());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let a = boseloops(&["loops", "--format", "json"], ISO, dir.path());
    let b = boseloops(
        &["loops", "--format", "json", "--threads", "3", "--seed", "7"],
        ISO,
        dir.path(),
    );
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file_matches_standard_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let to_file = boseloops(&["thermo", "--output", out.to_str().unwrap()], ISO, dir.path());
    assert!(to_file.status.success());
    let to_stdout = boseloops(&["thermo"], ISO, dir.path());
    assert_eq!(std::fs::read(&out).unwrap(), to_stdout.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str], cfg: &str| boseloops(args, cfg, dir.path()).status.code().unwrap();
    assert_eq!(code(&["thermo"], ISO), 0);
    // configuration and domain errors
    assert_eq!(
        code(&["thermo"], r#"{"trap":{"model":"isotropic"},"state":{"beta":1}}"#),
        2
    );
    assert_eq!(
        code(
            &["thermo"],
            r#"{"trap":{"model":"isotropic"},"state":{"beta":-1,"nu":1}}"#
        ),
        2
    );
    assert_eq!(code(&["thermo"], "not json"), 2);
    assert_eq!(
        code(
            &["profile"],
            r#"{"trap":{"model":"isotropic","kappa":0.1},"state":{"beta":1,"nu":1},"task":{"delta":1}}"#
        ),
        2
    );
    assert_eq!(code(&["aniso-check"], ISO), 2);
    // convergence
    assert_eq!(
        code(
            &["thermo"],
            r#"{"trap":{"model":"isotropic","kappa":0.01},"state":{"beta":1,"nu":0.5},"series":{"max_terms":1}}"#
        ),
        3
    );
    // I/O
    assert_eq!(code(&["thermo", "--output", "/nonexistent/dir/out.csv"], ISO), 4);
    let missing = Command::new(env!("CARGO_BIN_EXE_boseloops"))
        .args(["thermo", "--config", "/nonexistent/run.json"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(4));
}

#[test]
fn configuration_validation() {
    assert!(RunConfig::from_json(
        r#"{"trap":{"model":"isotropic","kappa_ladder":[0.01,0.1]},"state":{"beta":1,"nu":1}}"#
    )
    .is_err());
    assert!(RunConfig::from_json(
        r#"{"trap":{"model":"isotropic","kappa":0.1,"kappa_ladder":[0.1]},"state":{"beta":1,"nu":1}}"#
    )
    .is_err());
    assert!(RunConfig::from_json(r#"{"trap":{"model":"isotropic"},"state":{"beta":1,"nu":1,"mu":0}}"#).is_err());
    assert!(RunConfig::from_json(r#"{"trap":{"model":"isotropic"},"state":{"beta":1,"nu":1},"extra":1}"#).is_err());
    let cfg = RunConfig::from_json(r#"{"units":{"convention":"explicit","hbar":1,"mass":2,"omega0":0.5},"trap":{"model":"isotropic"},"state":{"beta":1,"nu":1}}"#).unwrap();
    assert_eq!(cfg.trap.ladder().unwrap(), boseloops::cli::DEFAULT_LADDER.to_vec());
    assert_eq!(cfg.units.name(), "explicit");
}

#[test]
fn chemical_potential_input_skips_the_solver() {
    let cfg = RunConfig::from_json(r#"{"trap":{"model":"isotropic","d":1,"kappa":0.2},"state":{"beta":1,"mu":-0.3}}"#)
        .unwrap();
    let t = run(Sub::Thermo, &cfg).unwrap();
    let nu = t.numbers("nu")[0];
    assert!((nu - 1.3330446678055307222).abs() < 1e-9);
    assert!(run(Sub::MuSolve, &cfg).is_err());
}

#[test]
fn shipped_configurations_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let sub = |name: &str| match name {
        "profile_thermal.json" => Sub::Profile,
        "quasi1d.json" | "quasi2d.json" => Sub::AnisoCheck,
        _ => Sub::Loops,
    };
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = RunConfig::from_path(&path).unwrap();
        let name = path.file_name().unwrap().to_str().unwrap();
        assert!(!run(sub(name), &cfg).unwrap().rows.is_empty(), "{name}");
        seen += 1;
    }
    assert!(seen >= 4);
}
