use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{degeneracy_time, Experiment, ExperimentConfig, RNG_ALGORITHM};
use super::verify::{verify_suite, VerifyReport, VerifySuite};
use crate::dynamics::{simulate_with, Diagnostics, RHWave, Trajectory};
use crate::error::{invalid, Error, Result};
use crate::harmonics::{Grid, ShellSelector, SpectralField};
use crate::reduction::{orbital_distance_axis, orbital_distance_so3};
use crate::stability::{fit_exponent, zprime_check, ExponentFit, ZPrimeReport};

/// `base` plus a seeded Gaussian field on `shells`, rescaled to L² norm
/// `eps`. The same seed gives the same direction for every `eps`.
pub fn perturb(base: &SpectralField, eps: f64, shells: ShellSelector, seed: u64) -> Result<SpectralField> {
    if !(eps > 0.0) || !eps.is_finite() {
        return invalid("perturbation size must be positive");
    }
    if shells.is_empty_within(base.lmax()) {
        return invalid(format!("shell selection {shells} is empty up to lmax={}", base.lmax()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = SpectralField::zeros(base.lmax());
    for l in 1..=base.lmax() {
        for m in -(l as i64)..=(l as i64) {
            let x: f64 = rng.sample(StandardNormal);
            if shells.contains(l) {
                p.set(l, m, x);
            }
        }
    }
    let n = p.l2_norm();
    let mut out = base.clone();
    out.axpy(eps / n, &p);
    Ok(out)
}

/// One `(t, eps, distance, unmodded_distance)` row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceRow {
    pub t: f64,
    pub eps: f64,
    pub distance: f64,
    pub unmodded_distance: f64,
}

pub const DISTANCES_HEADER: &str = "t,eps,distance,unmodded_distance";

/// The reference wave of a configuration.
pub fn reference_wave(cfg: &ExperimentConfig) -> RHWave {
    RHWave::degree2(cfg.omega_rot, cfg.base_shell2)
}

/// The experiment's distance and the plain distance to the unperturbed
/// wave at time `t`.
pub fn measure(cfg: &ExperimentConfig, t: f64, omega: &SpectralField) -> (f64, f64) {
    let w = reference_wave(cfg);
    let lmax = omega.lmax();
    let plain_t = (omega - &w.state(t, lmax)).l2_norm();
    match cfg.experiment {
        Experiment::Thm1Zonal => (plain_t, plain_t),
        Experiment::Thm2Omega0 | Experiment::DegeneracyDemo => {
            (orbital_distance_so3(omega, &cfg.base_shell2).distance, plain_t)
        }
        _ => (orbital_distance_axis(omega, &w).distance, plain_t),
    }
}

/// Distance rows recomputed from sampled states alone.
pub fn distance_rows(cfg: &ExperimentConfig, eps: f64, states: &[(f64, SpectralField)]) -> Vec<DistanceRow> {
    states
        .iter()
        .map(|(t, s)| {
            let (distance, unmodded_distance) = measure(cfg, *t, s);
            DistanceRow { t: *t, eps, distance, unmodded_distance }
        })
        .collect()
}

/// Largest relative drifts of the invariants along a run.
///
/// `C_k` drifts are divided by `max(|C_k(0)|, (4π)^{1−k/2}‖ω₀‖₂^k)`, the
/// Hölder lower bound of `∫|ω₀|^k`, so that Casimirs vanishing by symmetry
/// are not measured against rounding noise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservationDrift {
    pub energy: f64,
    pub enstrophy: f64,
    /// `C₃ … C_kmax`
    pub casimirs: Vec<f64>,
    /// Absolute drift of `∫ ω x dS`.
    pub angular_momentum: f64,
}

fn rel_drift(values: impl Iterator<Item = f64> + Clone, floor: f64) -> f64 {
    let mut it = values.clone();
    let first = it.next().unwrap_or(0.0);
    let scale = first.abs().max(floor).max(f64::MIN_POSITIVE);
    values.map(|v| (v - first).abs() / scale).fold(0.0, f64::max)
}

pub fn conservation_drift(traj: &Trajectory) -> ConservationDrift {
    let d = &traj.diagnostics;
    let kcount = d.first().map(|r| r.casimirs.len()).unwrap_or(0);
    let l0 = d.first().map(|r| r.angular_momentum).unwrap_or([0.0; 3]);
    let norm0 = d.first().map(|r| r.enstrophy.sqrt()).unwrap_or(0.0);
    let floor = |k: usize| (4.0 * PI).powf(1.0 - 0.5 * k as f64) * norm0.powi(k as i32);
    ConservationDrift {
        energy: rel_drift(d.iter().map(|r| r.energy), 0.0),
        enstrophy: rel_drift(d.iter().map(|r| r.enstrophy), 0.0),
        casimirs: (0..kcount).map(|k| rel_drift(d.iter().map(move |r| r.casimirs[k]), floor(k + 3))).collect(),
        angular_momentum: d
            .iter()
            .map(|r| (0..3).map(|i| (r.angular_momentum[i] - l0[i]).powi(2)).sum::<f64>().sqrt())
            .fold(0.0, f64::max),
    }
}

/// Quarter-turn check of the `Ω = 0` degeneracy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyCheck {
    /// `(3π/4)/ε`
    pub t_star: f64,
    /// Sample time used, the one closest to `t_star`.
    pub t_sample: f64,
    pub unmodded: f64,
    pub modded: f64,
    pub ratio: f64,
    /// Largest L² deviation from the exact rotating solution over all samples.
    pub exact_solution_error: f64,
    pub passed: bool,
}

/// Outcome of one `ε`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsRun {
    pub eps: f64,
    /// `"ok"` or the error that stopped the run.
    pub status: String,
    pub initial_distance: f64,
    /// `sup_{t ≤ T}` of the experiment's distance over the samples.
    pub sup_distance: f64,
    pub sup_unmodded: f64,
    pub final_distance: f64,
    pub samples: usize,
    pub conservation: Option<ConservationDrift>,
    pub zprime: Option<ZPrimeReport>,
    pub degeneracy: Option<DegeneracyCheck>,
}

impl EpsRun {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub code_version: String,
    pub rng: String,
}

/// Result of [`run_experiment`], written as `report.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub experiment: Experiment,
    pub config: ExperimentConfig,
    /// Suprema are taken over sampled `t ≤ T`; no claim beyond `T`.
    pub horizon: f64,
    pub runs: Vec<EpsRun>,
    pub fit: Option<ExponentFit>,
    /// The exponent in the stability estimate being probed.
    pub expected_exponent: Option<f64>,
    pub slope_threshold: Option<f64>,
    /// `max_ε sup-distance / ε^{1/2}`: the least `K` with `dist ≤ K ε^{1/2}`.
    pub k_half: Option<f64>,
    pub verify: Option<VerifyReport>,
    pub passed: bool,
    pub provenance: Provenance,
}

fn eps_dir(outdir: &Path, eps: f64) -> PathBuf {
    outdir.join(format!("eps_{eps:e}"))
}

fn run_one(cfg: &ExperimentConfig, eps: f64, grid: &Grid, diag: &Diagnostics) -> (EpsRun, Option<Trajectory>) {
    let w = reference_wave(cfg);
    let base = w.state(0.0, cfg.lmax);
    let mut run = EpsRun {
        eps,
        status: "ok".into(),
        initial_distance: f64::NAN,
        sup_distance: f64::NAN,
        sup_unmodded: f64::NAN,
        final_distance: f64::NAN,
        samples: 0,
        conservation: None,
        zprime: None,
        degeneracy: None,
    };
    let omega0 = if cfg.experiment == Experiment::DegeneracyDemo {
        // exactly ε x₃ on top of the wave
        let mut f = base.clone();
        f.set(1, 0, f.get(1, 0) + eps * (4.0 * std::f64::consts::PI / 3.0).sqrt());
        Ok(f)
    } else {
        perturb(&base, eps, cfg.perturb_shells, cfg.seed)
    };
    let traj = omega0.and_then(|o| simulate_with(&o, cfg.t_end, cfg.dt, cfg.sample_every, grid, diag));
    let traj = match traj {
        Ok(t) => t,
        Err(e) => {
            run.status = e.to_string();
            return (run, None);
        }
    };
    let pairs: Vec<(f64, SpectralField)> = traj.times.iter().copied().zip(traj.states.iter().cloned()).collect();
    let rows = distance_rows(cfg, eps, &pairs);
    run.samples = rows.len();
    run.initial_distance = rows[0].distance;
    run.sup_distance = rows.iter().map(|r| r.distance).fold(0.0, f64::max);
    run.sup_unmodded = rows.iter().map(|r| r.unmodded_distance).fold(0.0, f64::max);
    run.final_distance = rows.last().map(|r| r.distance).unwrap_or(f64::NAN);
    run.conservation = Some(conservation_drift(&traj));
    if cfg.experiment == Experiment::Zprime {
        run.zprime = zprime_check(&traj, Some(eps)).ok();
    }
    if cfg.experiment == Experiment::DegeneracyDemo {
        let t_star = degeneracy_time(eps);
        let (i, _) = rows
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.t - t_star).abs().total_cmp(&(b.1.t - t_star).abs()))
            .expect("trajectory has samples");
        let exact = RHWave::degree2(eps, cfg.base_shell2);
        let err = pairs.iter().map(|(t, s)| (s - &exact.state(*t, cfg.lmax)).l2_norm()).fold(0.0, f64::max);
        let r = rows[i];
        run.degeneracy = Some(DegeneracyCheck {
            t_star,
            t_sample: r.t,
            unmodded: r.unmodded_distance,
            modded: r.distance,
            ratio: r.unmodded_distance / r.distance,
            exact_solution_error: err,
            passed: r.unmodded_distance > 0.5 && r.distance <= 10.0 * eps && r.unmodded_distance >= 10.0 * r.distance,
        });
    }
    (run, Some(traj))
}

/// Runs every `ε` of `cfg` (in parallel), fits the exponent and, when
/// `write` is set, writes `cfg.outdir`.
pub fn run_experiment(cfg: &ExperimentConfig, write: bool) -> Result<StabilityReport> {
    cfg.validate()?;
    let provenance = Provenance {
        config_hash: cfg.hash(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        rng: RNG_ALGORITHM.to_string(),
    };
    let mut report = StabilityReport {
        experiment: cfg.experiment,
        config: cfg.clone(),
        horizon: cfg.t_end,
        runs: Vec::new(),
        fit: None,
        expected_exponent: None,
        slope_threshold: None,
        k_half: None,
        verify: None,
        passed: false,
        provenance,
    };
    if write {
        fs::create_dir_all(&cfg.outdir)?;
        let echo = format!("{}# rng: {RNG_ALGORITHM}\n# config_hash: {}\n", cfg.to_echo(), cfg.hash());
        fs::write(cfg.outdir.join("config.echo"), echo)?;
    }
    if !cfg.experiment.is_dynamical() {
        let suites: &[VerifySuite] = match cfg.experiment {
            Experiment::VerifyFormulas => &[VerifySuite::Formulas],
            _ => &[VerifySuite::Jacobians, VerifySuite::Folds],
        };
        let mut merged: Option<VerifyReport> = None;
        for s in suites {
            let r = verify_suite(*s)?;
            merged = Some(match merged {
                None => r,
                Some(m) => m.merge(r),
            });
        }
        let v = merged.expect("at least one suite");
        report.passed = v.passed;
        report.verify = Some(v);
        if write {
            fs::write(cfg.outdir.join("report.json"), serde_json::to_string_pretty(&report)?)?;
        }
        return Ok(report);
    }

    let grid = Grid::build(cfg.lmax, true)?;
    let diag = Diagnostics::new(cfg.lmax, 5)?;
    let results: Vec<(EpsRun, Option<Trajectory>)> =
        cfg.eps_list.par_iter().map(|&eps| run_one(cfg, eps, &grid, &diag)).collect();

    let mut rows = Vec::new();
    for (run, traj) in &results {
        let Some(traj) = traj else { continue };
        if write {
            let dir = eps_dir(&cfg.outdir, run.eps);
            fs::create_dir_all(&dir)?;
            traj.write_csv(dir.join("trajectory.csv"))?;
            traj.write_states_csv(dir.join("states.csv"))?;
        }
        let pairs: Vec<(f64, SpectralField)> =
            traj.times.iter().copied().zip(traj.states.iter().cloned()).collect();
        rows.extend(distance_rows(cfg, run.eps, &pairs));
    }
    report.runs = results.into_iter().map(|(r, _)| r).collect();

    let ok: Vec<&EpsRun> = report.runs.iter().filter(|r| r.ok()).collect();
    let all_ok = ok.len() == report.runs.len();
    if ok.len() >= 3 {
        let eps: Vec<f64> = ok.iter().map(|r| r.eps).collect();
        let dist: Vec<f64> = ok.iter().map(|r| r.sup_distance).collect();
        report.fit = fit_exponent(&eps, &dist).ok();
    }
    if !ok.is_empty() {
        report.k_half = Some(ok.iter().map(|r| r.sup_distance / r.eps.sqrt()).fold(0.0, f64::max));
    }
    let slope_ok = |threshold: f64| report.fit.map(|f| f.slope >= threshold).unwrap_or(false);
    report.passed = all_ok
        && match cfg.experiment {
            Experiment::Thm1Zonal | Experiment::ThmMainDegenerate => {
                report.expected_exponent = Some(0.5);
                report.slope_threshold = Some(0.45);
                slope_ok(0.45)
            }
            Experiment::ThmMainNondegenerate | Experiment::Thm2Omega0 => {
                report.expected_exponent = Some(1.0);
                report.slope_threshold = Some(0.8);
                slope_ok(0.8)
            }
            Experiment::DegeneracyDemo => {
                report.runs.iter().all(|r| r.degeneracy.as_ref().is_some_and(|d| d.passed))
            }
            Experiment::Zprime => report
                .runs
                .iter()
                .all(|r| r.zprime.as_ref().is_some_and(|z| z.passes && z.within_sqrt2_eps == Some(true))),
            Experiment::VerifyFormulas | Experiment::VerifyJacobians => unreachable!("handled above"),
        };

    if write {
        let mut csv = String::from(DISTANCES_HEADER);
        csv.push('\n');
        for r in &rows {
            csv.push_str(&format!("{:.16e},{:e},{:.16e},{:.16e}\n", r.t, r.eps, r.distance, r.unmodded_distance));
        }
        fs::write(cfg.outdir.join("distances.csv"), csv)?;
        fs::write(cfg.outdir.join("report.json"), serde_json::to_string_pretty(&report)?)?;
    }
    Ok(report)
}

/// Reads `distances.csv`.
pub fn read_distances(path: impl AsRef<Path>) -> Result<Vec<DistanceRow>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(DISTANCES_HEADER) {
        return Err(Error::Parse("distances.csv header mismatch".into()));
    }
    lines
        .map(|line| {
            let v: Vec<f64> = line
                .split(',')
                .map(|x| x.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("bad distances row '{line}'")))?;
            match v[..] {
                [t, eps, distance, unmodded_distance] => Ok(DistanceRow { t, eps, distance, unmodded_distance }),
                _ => Err(Error::Parse(format!("bad distances row '{line}'"))),
            }
        })
        .collect()
}

/// Path of the sampled states of one `ε`.
pub fn states_path(outdir: &Path, eps: f64) -> PathBuf {
    eps_dir(outdir, eps).join("states.csv")
}

/// Path of the diagnostics table of one `ε`.
pub fn trajectory_path(outdir: &Path, eps: f64) -> PathBuf {
    eps_dir(outdir, eps).join("trajectory.csv")
}
