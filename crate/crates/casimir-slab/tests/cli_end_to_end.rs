//! End-to-end runs of the casimir-slab binary: exit codes, CSV and SVG
//! emission, determinism and config-file precedence.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_casimir-slab"))
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("casimir_slab_e2e_{name}"));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

#[test]
fn single_point_pressure_succeeds() {
    let out = run(bin().args(["pressure", "--ds", "0.5", "--quantity", "F_free"]));
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("F_free ="), "{text}");
    assert!(text.contains("lifshitz_free"), "{text}");
}

#[test]
fn invalid_arguments_exit_with_code_two() {
    let out = run(bin().args(["pressure", "--quantity", "F_bogus"]));
    assert_eq!(out.status.code(), Some(2));

    let out = run(bin().args(["sweep", "--range", "5:1:10:log"]));
    assert_eq!(out.status.code(), Some(2));

    let out = run(bin().args(["figure", "fig9"]));
    assert_eq!(out.status.code(), Some(2));

    // clap's own usage errors also exit 2.
    let out = run(bin().args(["frobnicate"]));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_with_code_one() {
    // Interaction force without mirrors fails at every grid point.
    let out = run(bin().args([
        "sweep",
        "--quantity",
        "F_interaction",
        "--axis",
        "ds",
        "--range",
        "0.1:1:3:lin",
        "--mirrors",
        "none",
    ]));
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("nan"));
}

#[test]
fn sweep_symmetric_interaction_is_zero() {
    let out = run(bin().args([
        "sweep",
        "--quantity",
        "F_interaction",
        "--axis",
        "d",
        "--range",
        "0.2:1:4:lin",
        "--ds",
        "0.5",
        "--workers",
        "2",
    ]));
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    let mut data_rows = 0;
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("kp_d,") {
            continue;
        }
        let value: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(value.abs() < 1e-10, "row {line}");
        data_rows += 1;
    }
    assert_eq!(data_rows, 4);
}

#[test]
fn figure_and_plot_roundtrip_deterministically() {
    let dir = tmpdir("figplot");
    let csv1 = dir.join("fig2_a.csv");
    let csv2 = dir.join("fig2_b.csv");
    for path in [&csv1, &csv2] {
        let out = run(bin().args([
            "figure",
            "fig2",
            "--workers",
            "4",
            "--out",
            path.to_str().unwrap(),
        ]));
        assert!(out.status.success(), "{out:?}");
    }
    let a = std::fs::read(&csv1).unwrap();
    let b = std::fs::read(&csv2).unwrap();
    assert_eq!(a, b, "fig2 CSV not byte-identical across runs");

    let svg1 = dir.join("fig2_a.svg");
    let svg2 = dir.join("fig2_b.svg");
    for (csv, svg) in [(&csv1, &svg1), (&csv1, &svg2)] {
        let out = run(bin().args([
            "plot",
            csv.to_str().unwrap(),
            svg.to_str().unwrap(),
        ]));
        assert!(out.status.success(), "{out:?}");
    }
    let sa = std::fs::read_to_string(&svg1).unwrap();
    let sb = std::fs::read_to_string(&svg2).unwrap();
    assert_eq!(sa, sb, "SVG not byte-identical");
    // fig2 carries exactly two curves.
    assert_eq!(sa.matches("<polyline").count(), 2);
}

#[test]
fn plot_rejects_empty_and_malformed_csv() {
    let dir = tmpdir("plotbad");
    let empty = dir.join("empty.csv");
    std::fs::write(&empty, "# nothing here\n").unwrap();
    let svg = dir.join("out.svg");
    let out = run(bin().args([
        "plot",
        empty.to_str().unwrap(),
        svg.to_str().unwrap(),
    ]));
    assert_eq!(out.status.code(), Some(2));
    assert!(!svg.exists(), "no SVG may be written on error");

    let bad = dir.join("bad.csv");
    std::fs::write(&bad, "x,y\n0.1,1.0\noops\n").unwrap();
    let out = run(bin().args(["plot", bad.to_str().unwrap(), svg.to_str().unwrap()]));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains(":3:"), "error should carry the line number: {err}");
}

#[test]
fn config_file_applies_under_flags() {
    let dir = tmpdir("config");
    let cfg = dir.join("run.conf");
    std::fs::write(&cfg, "ds = 0.25\nmirrors = none\n").unwrap();
    // Config supplies ds; flag overrides the quantity default.
    let out = run(bin().args([
        "pressure",
        "--quantity",
        "F_free",
        "--config",
        cfg.to_str().unwrap(),
    ]));
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ds = 0.25"), "{text}");

    // A flag beats the config value.
    let out = run(bin().args([
        "pressure",
        "--quantity",
        "F_free",
        "--ds",
        "0.5",
        "--config",
        cfg.to_str().unwrap(),
    ]));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ds = 0.5"), "{text}");
}

#[test]
fn verify_single_criterion_runs_clean() {
    let out = run(bin().args(["verify", "--criterion", "1"]));
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("nonretarded_constant"));
    assert!(text.contains("PASS"));
}
