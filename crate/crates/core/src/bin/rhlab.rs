use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use rhlab::dynamics::{simulate, RHWave};
use rhlab::lab::{conservation_drift, perturb, run_experiment, Experiment, ExperimentConfig, RNG_ALGORITHM};
use rhlab::polysphere::{casimir_closed_form, casimir_values, Representation};
use rhlab::reduction::{canonical_zonal_form, reduce_azimuthal, AzimuthalTarget, ShellState};
use rhlab::{Error, Grid, Result, SpectralField};

#[derive(Parser)]
#[command(name = "rhlab", version, about = "Stability lab for degree-2 Rossby-Haurwitz waves on the sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Overrides of the configuration keys.
#[derive(Args, Default)]
struct ConfigFlags {
    /// Flat `key = value` file with the configuration keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    omega_rot: Option<String>,
    /// Five comma-separated coefficients `c2,-2 .. c22`.
    #[arg(long, allow_hyphen_values = true)]
    base_shell2: Option<String>,
    /// Comma-separated, ascending.
    #[arg(long)]
    eps_list: Option<String>,
    /// Final time.
    #[arg(long = "T", visible_alias = "t-end")]
    t_end: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    lmax: Option<String>,
    #[arg(long)]
    sample_every: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// `n`, `=n`, `<=n`, `>=n`, `!=n` or `lo-hi`.
    #[arg(long)]
    perturb_shells: Option<String>,
    #[arg(long)]
    outdir: Option<PathBuf>,
}

impl ConfigFlags {
    fn resolve(&self, experiment: Option<Experiment>) -> Result<ExperimentConfig> {
        let mut cfg = match (&self.config, experiment) {
            (Some(path), tag) => {
                let cfg = ExperimentConfig::from_file(path)?;
                if tag.is_some_and(|t| t != cfg.experiment) {
                    return Err(Error::InvalidArgument(format!(
                        "{} is a {} configuration",
                        path.display(),
                        cfg.experiment
                    )));
                }
                cfg
            }
            (None, Some(tag)) => ExperimentConfig::defaults(tag),
            (None, None) => return Err(Error::InvalidArgument("an experiment tag or --config is required".into())),
        };
        let pairs = [
            ("omega_rot", &self.omega_rot),
            ("base_shell2", &self.base_shell2),
            ("eps_list", &self.eps_list),
            ("T", &self.t_end),
            ("dt", &self.dt),
            ("lmax", &self.lmax),
            ("sample_every", &self.sample_every),
            ("seed", &self.seed),
            ("perturb_shells", &self.perturb_shells),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if let Some(dir) = &self.outdir {
            cfg.outdir = dir.clone();
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a degree-2 wave, optionally perturbed by the first entry of
    /// `--eps-list`, and write `trajectory.csv` and `states.csv`.
    Simulate {
        #[command(flatten)]
        flags: ConfigFlags,
        /// Integrate the unperturbed wave.
        #[arg(long)]
        exact: bool,
    },
    /// Closed-form Casimirs of a low-mode representation, or exact values of
    /// a state file.
    Casimir {
        /// rep1, rep2, zonal:<alpha> or canonical.
        #[arg(long, default_value = "rep1")]
        rep: String,
        #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
        k: Vec<usize>,
        /// Evaluate at `Omega,A,B,C,D`.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Spectral state CSV (`l,m,value`); only shells 0..2 enter.
        #[arg(long, conflicts_with = "point")]
        state: Option<PathBuf>,
    },
    /// Rotate a shell-1/2 state to a normal form.
    Reduce {
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        omega_rot: f64,
        /// Five comma-separated coefficients `c2,-2 .. c22`.
        #[arg(long, allow_hyphen_values = true)]
        shell2: String,
        /// rep1, rep2, zonal or canonical.
        #[arg(long, default_value = "canonical")]
        target: String,
    },
    /// Compare the transcribed closed forms against exact integration.
    VerifyFormulas {
        #[arg(long)]
        outdir: Option<PathBuf>,
    },
    /// Determinant, rank and fold checks of the Casimir maps.
    VerifyJacobians {
        #[arg(long)]
        outdir: Option<PathBuf>,
    },
    /// Run one experiment and write its outputs below `outdir`.
    Experiment {
        /// One of the experiment tags; may be omitted with `--config`.
        tag: Option<Experiment>,
        #[command(flatten)]
        flags: ConfigFlags,
    },
    /// Track the `l >= 3` enstrophy of a perturbed wave.
    Zprime {
        #[command(flatten)]
        flags: ConfigFlags,
    },
}

fn parse_five(s: &str) -> Result<[f64; 5]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse(format!("cannot parse '{s}' as numbers")))?;
    v.try_into().map_err(|_| Error::Parse(format!("expected five numbers in '{s}'")))
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn experiment(cfg: &ExperimentConfig) -> Result<bool> {
    let report = run_experiment(cfg, true)?;
    for r in &report.runs {
        eprintln!(
            "eps {:e}: {} sup distance {:.6e}, sup unmodded {:.6e}",
            r.eps, r.status, r.sup_distance, r.sup_unmodded
        );
    }
    if let Some(f) = report.fit {
        eprintln!("slope {:.4} (residual {:.2e})", f.slope, f.residual);
    }
    if let Some(v) = &report.verify {
        for c in v.checks.iter().filter(|c| !c.passed) {
            eprintln!("FAILED {}: {} (value {:e}, tolerance {:e})", c.name, c.detail, c.value, c.tolerance);
        }
        for w in &v.warnings {
            eprintln!("warning: {w}");
        }
    }
    eprintln!("{}: {} -> {}", cfg.experiment, if report.passed { "pass" } else { "FAIL" }, cfg.outdir.display());
    Ok(report.passed)
}

fn verify(tag: Experiment, outdir: Option<PathBuf>) -> Result<bool> {
    let mut cfg = ExperimentConfig::defaults(tag);
    if let Some(dir) = outdir {
        cfg.outdir = dir;
    }
    experiment(&cfg)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate { flags, exact } => {
            let tag = flags.config.is_none().then_some(Experiment::ThmMainNondegenerate);
            let mut cfg = flags.resolve(tag)?;
            if flags.outdir.is_none() && flags.config.is_none() {
                cfg.outdir = PathBuf::from("runs").join("simulate");
            }
            let w = RHWave::degree2(cfg.omega_rot, cfg.base_shell2);
            let base = w.state(0.0, cfg.lmax);
            let omega0 = match (exact, cfg.eps_list.first()) {
                (false, Some(&eps)) => perturb(&base, eps, cfg.perturb_shells, cfg.seed)?,
                _ => base,
            };
            let grid = Grid::build(cfg.lmax, true)?;
            let traj = simulate(&omega0, cfg.t_end, cfg.dt, cfg.sample_every, &grid)?;
            fs::create_dir_all(&cfg.outdir)?;
            traj.write_csv(cfg.outdir.join("trajectory.csv"))?;
            traj.write_states_csv(cfg.outdir.join("states.csv"))?;
            let echo = format!("{}# rng: {RNG_ALGORITHM}\n# config_hash: {}\n", cfg.to_echo(), cfg.hash());
            fs::write(cfg.outdir.join("config.echo"), echo)?;
            let exact_error = exact.then(|| {
                traj.times
                    .iter()
                    .zip(&traj.states)
                    .map(|(&t, s)| (s - &w.state(t, cfg.lmax)).l2_norm())
                    .fold(0.0, f64::max)
            });
            print_json(&json!({
                "outdir": cfg.outdir,
                "samples": traj.len(),
                "drift": conservation_drift(&traj),
                "max_error_vs_exact_wave": exact_error,
            }))?;
            Ok(true)
        }
        Command::Casimir { rep, k, point, state } => {
            if let Some(path) = state {
                let f = SpectralField::read_csv(path)?;
                let values = casimir_values(&f, &k)?;
                print_json(&json!({ "k": k, "values": values }))?;
                return Ok(true);
            }
            let rep: Representation = rep.parse()?;
            let point = point.as_deref().map(parse_five).transpose()?;
            let mut out = Vec::new();
            for &kk in &k {
                let p = casimir_closed_form(kk, rep)?.pruned(1e-14);
                out.push(json!({
                    "k": kk,
                    "polynomial": p.to_string(),
                    "value": point.map(|x| p.eval(&x)),
                }));
            }
            print_json(&json!({ "representation": rep.to_string(), "casimirs": out }))?;
            Ok(true)
        }
        Command::Reduce { omega_rot, shell2, target } => {
            let c2 = parse_five(&shell2)?;
            if target.trim() == "canonical" {
                let c = canonical_zonal_form(&c2);
                let r: Vec<[f64; 3]> = (0..3).map(|i| [c.rotation[(i, 0)], c.rotation[(i, 1)], c.rotation[(i, 2)]]).collect();
                print_json(&json!({
                    "A": c.a,
                    "B": c.b,
                    "eigenvalues": c.eigenvalues,
                    "rotation": r,
                }))?;
            } else {
                let t: AzimuthalTarget = target.parse()?;
                let red = reduce_azimuthal(&ShellState::new(omega_rot, c2), t)?;
                print_json(&json!({
                    "state": red.state,
                    "phi0": red.phi0,
                    "degenerate": red.degenerate,
                    "zonal": red.zonal,
                }))?;
            }
            Ok(true)
        }
        Command::VerifyFormulas { outdir } => verify(Experiment::VerifyFormulas, outdir),
        Command::VerifyJacobians { outdir } => verify(Experiment::VerifyJacobians, outdir),
        Command::Experiment { tag, flags } => experiment(&flags.resolve(tag)?),
        Command::Zprime { flags } => experiment(&flags.resolve(Some(Experiment::Zprime))?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
