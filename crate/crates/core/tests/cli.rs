use std::fs;
use std::process::{Command, Output};

use rhlab::lab::{read_distances, ExperimentConfig};

fn rhlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhlab")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn casimir_prints_closed_form_and_value() {
    let v = stdout_json(&rhlab(&["casimir", "--rep", "rep1", "--k", "3", "--point", "0,1,0,0,0"]));
    let value = v["casimirs"][0]["value"].as_f64().unwrap();
    assert!((value - (5.0 / std::f64::consts::PI).sqrt() / 7.0).abs() < 1e-14);
}

#[test]
fn reduce_reaches_the_canonical_form() {
    let v = stdout_json(&rhlab(&["reduce", "--shell2", "0.6,0,0,0.8,0"]));
    let (a, b) = (v["A"].as_f64().unwrap(), v["B"].as_f64().unwrap());
    assert!((a * a + b * b - 1.0).abs() < 1e-12);
    assert!(a * a >= 3.0 / 7.0 - 1e-12);
}

#[test]
fn simulate_exact_wave_tracks_the_rotation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let v = stdout_json(&rhlab(&[
        "simulate", "--exact", "--lmax", "8", "--T", "0.5", "--sample-every", "50", "--outdir", out,
    ]));
    assert!(v["max_error_vs_exact_wave"].as_f64().unwrap() < 1e-12);
    for f in ["trajectory.csv", "states.csv", "config.echo"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn experiment_from_config_file_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let cfg = dir.path().join("cfg.txt");
    fs::write(
        &cfg,
        format!(
            "# small sweep\nexperiment = thm_main_nondegenerate\neps_list = 1e-3, 3e-3, 1e-2\n\
             T = 0.2\ndt = 1e-2\nlmax = 8\nsample_every = 5\noutdir = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let o = rhlab(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.code().is_some_and(|c| c <= 1), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["distances.csv", "report.json", "config.echo", "eps_1e-3/trajectory.csv", "eps_1e-2/states.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let echo = fs::read_to_string(out.join("config.echo")).unwrap();
    assert!(echo.contains("# rng: ") && echo.contains("# config_hash: "));
    let back = ExperimentConfig::parse(&echo).unwrap();
    assert_eq!(back.lmax, 8);
    let rows = read_distances(out.join("distances.csv")).unwrap();
    assert_eq!(rows.len(), 3 * 5);
    assert!(rows.iter().all(|r| r.distance >= 0.0 && r.distance <= r.unmodded_distance + 1e-15));
}

#[test]
fn flags_override_and_mismatched_tags_fail() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.txt");
    fs::write(&cfg, "experiment = zprime\n").unwrap();
    let o = rhlab(&["experiment", "thm1_zonal", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = rhlab(&["experiment", "thm1_zonal", "--eps-list", "1e-2,1e-3", "--outdir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "descending eps list must be rejected");

    fs::write(&cfg, "experiment = zprime\nbogus = 1\n").unwrap();
    let o = rhlab(&["zprime", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}

#[test]
fn verify_formulas_exits_zero_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let o = rhlab(&["verify-formulas", "--outdir", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert!(!report["verify"]["warnings"].as_array().unwrap().is_empty());
}
