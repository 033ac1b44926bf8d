use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::harmonics::ShellSelector;

/// Name of the perturbation generator, written to `config.echo`.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha), standard normal via rand_distr";

/// Experiment tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Thm1Zonal,
    Thm2Omega0,
    ThmMainNondegenerate,
    ThmMainDegenerate,
    DegeneracyDemo,
    Zprime,
    VerifyFormulas,
    VerifyJacobians,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Thm1Zonal,
        Experiment::Thm2Omega0,
        Experiment::ThmMainNondegenerate,
        Experiment::ThmMainDegenerate,
        Experiment::DegeneracyDemo,
        Experiment::Zprime,
        Experiment::VerifyFormulas,
        Experiment::VerifyJacobians,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Experiment::Thm1Zonal => "thm1_zonal",
            Experiment::Thm2Omega0 => "thm2_omega0",
            Experiment::ThmMainNondegenerate => "thm_main_nondegenerate",
            Experiment::ThmMainDegenerate => "thm_main_degenerate",
            Experiment::DegeneracyDemo => "degeneracy_demo",
            Experiment::Zprime => "zprime",
            Experiment::VerifyFormulas => "verify_formulas",
            Experiment::VerifyJacobians => "verify_jacobians",
        }
    }

    /// True for tags that integrate the dynamics.
    pub fn is_dynamical(self) -> bool {
        !matches!(self, Experiment::VerifyFormulas | Experiment::VerifyJacobians)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().replace('-', "_");
        Experiment::ALL
            .into_iter()
            .find(|e| e.tag() == s)
            .ok_or_else(|| Error::Parse(format!("unknown experiment '{s}'")))
    }
}

/// Parameters of one experiment run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub omega_rot: f64,
    /// `[c₂,₋₂, c₂,₋₁, c₂₀, c₂₁, c₂₂]`
    pub base_shell2: [f64; 5],
    pub eps_list: Vec<f64>,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub dt: f64,
    pub lmax: usize,
    pub sample_every: usize,
    pub seed: u64,
    pub perturb_shells: ShellSelector,
    pub outdir: PathBuf,
}

/// Keys accepted in a configuration file, in echo order.
pub const CONFIG_KEYS: [&str; 11] = [
    "experiment",
    "omega_rot",
    "base_shell2",
    "eps_list",
    "T",
    "dt",
    "lmax",
    "sample_every",
    "seed",
    "perturb_shells",
    "outdir",
];

/// Default sweep.
pub const DEFAULT_EPS: [f64; 4] = [1e-3, 3e-3, 1e-2, 3e-2];

/// Horizon at which the perturbed `Ω = 0` wave has turned by `π/4`:
/// `t = (3π/4)/ε`.
pub fn degeneracy_time(eps: f64) -> f64 {
    0.75 * PI / eps
}

impl ExperimentConfig {
    /// Desk-scale defaults for `experiment`.
    pub fn defaults(experiment: Experiment) -> Self {
        let mut cfg = ExperimentConfig {
            experiment,
            omega_rot: 1.0,
            base_shell2: [0.0; 5],
            eps_list: DEFAULT_EPS.to_vec(),
            t_end: 20.0,
            dt: 1e-3,
            lmax: 32,
            sample_every: 200,
            seed: 20_240_601,
            perturb_shells: ShellSelector::AtLeast(1),
            outdir: PathBuf::from("runs").join(experiment.tag()),
        };
        match experiment {
            Experiment::Thm1Zonal => cfg.base_shell2 = [0.0, 0.0, 1.0, 0.0, 0.0],
            Experiment::ThmMainNondegenerate => cfg.base_shell2 = [0.0, 0.0, 0.0, 1.0, 0.0],
            Experiment::ThmMainDegenerate => cfg.base_shell2 = [0.0, 0.0, 0.6, 0.0, 0.8],
            Experiment::Thm2Omega0 => {
                cfg.omega_rot = 0.0;
                cfg.base_shell2 = [0.0, 0.0, 0.0, 0.0, 1.0];
            }
            Experiment::DegeneracyDemo => {
                cfg.omega_rot = 0.0;
                cfg.base_shell2 = [0.0, 0.0, 0.0, 0.0, 1.0];
                cfg.eps_list = vec![3e-2];
                cfg.t_end = (degeneracy_time(3e-2) / cfg.dt).ceil() * cfg.dt;
                cfg.perturb_shells = ShellSelector::Only(1);
                cfg.sample_every = 1000;
            }
            Experiment::Zprime => {
                let v = [0.3, -0.2, 0.5, 0.6, 0.5];
                let n = v.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
                cfg.base_shell2 = v.map(|x| x / n);
                cfg.eps_list = vec![0.1];
                cfg.perturb_shells = ShellSelector::AtLeast(3);
            }
            Experiment::VerifyFormulas | Experiment::VerifyJacobians => {
                cfg.eps_list.clear();
            }
        }
        cfg
    }

    /// Parses a flat `key = value` file; `#` starts a comment. Keys missing
    /// from the file take the defaults of its `experiment`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", i + 1)))?;
            let k = k.trim();
            if !CONFIG_KEYS.contains(&k) {
                return Err(Error::Parse(format!("line {}: unknown key '{k}'", i + 1)));
            }
            if map.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Parse(format!("line {}: duplicate key '{k}'", i + 1)));
            }
        }
        let exp: Experiment =
            map.remove("experiment").ok_or_else(|| Error::Parse("missing key 'experiment'".into()))?.parse()?;
        let mut cfg = Self::defaults(exp);
        for (k, v) in &map {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Sets one field from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Parse(format!("{key}: cannot parse '{value}' as {what}"));
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("a number"));
        match key {
            "experiment" => self.experiment = value.parse()?,
            "omega_rot" => self.omega_rot = num(value)?,
            "base_shell2" => {
                let v = parse_list(value).map_err(|_| bad("a list of numbers"))?;
                self.base_shell2 = v.try_into().map_err(|_| bad("five numbers"))?;
            }
            "eps_list" => self.eps_list = parse_list(value).map_err(|_| bad("a list of numbers"))?,
            "T" => self.t_end = num(value)?,
            "dt" => self.dt = num(value)?,
            "lmax" => self.lmax = value.trim().parse().map_err(|_| bad("an integer"))?,
            "sample_every" => self.sample_every = value.trim().parse().map_err(|_| bad("an integer"))?,
            "seed" => self.seed = value.trim().parse().map_err(|_| bad("a 64-bit integer"))?,
            "perturb_shells" => self.perturb_shells = value.parse()?,
            "outdir" => self.outdir = PathBuf::from(value.trim()),
            _ => return Err(Error::Parse(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Checks the invariants of the configuration and of the experiment's
    /// reference wave.
    pub fn validate(&self) -> Result<()> {
        let c = &self.base_shell2;
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !self.omega_rot.is_finite() || c.iter().any(|x| !x.is_finite()) {
            return invalid("non-finite wave parameters");
        }
        if !self.experiment.is_dynamical() {
            return Ok(());
        }
        if self.eps_list.is_empty() {
            return invalid("eps_list is empty");
        }
        if self.eps_list.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
            return invalid("eps values must be positive");
        }
        if self.eps_list.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("eps_list must be strictly ascending");
        }
        crate::dynamics::step_count(self.t_end, self.dt)?;
        if self.sample_every == 0 {
            return invalid("sample_every must be positive");
        }
        if self.lmax < 3 {
            return invalid("lmax must be at least 3");
        }
        if self.perturb_shells.is_empty_within(self.lmax) {
            return invalid(format!("perturb_shells {} selects no shell up to lmax", self.perturb_shells));
        }
        if (norm - 1.0).abs() > 1e-12 {
            return invalid(format!("base_shell2 must have unit norm, has {norm}"));
        }
        let [cm2, cm1, _c0, c1, c2] = *c;
        match self.experiment {
            Experiment::Thm1Zonal if cm2 != 0.0 || cm1 != 0.0 || c1 != 0.0 || c2 != 0.0 => {
                invalid("thm1_zonal needs a zonal base wave")
            }
            Experiment::Thm2Omega0 | Experiment::DegeneracyDemo if self.omega_rot != 0.0 => {
                invalid(format!("{} needs omega_rot = 0", self.experiment))
            }
            Experiment::ThmMainNondegenerate if c1 == 0.0 && cm1 == 0.0 => {
                invalid("thm_main_nondegenerate needs a nonzero (c21, c2-1) pair")
            }
            Experiment::ThmMainDegenerate if c1 != 0.0 || cm1 != 0.0 || (c2 == 0.0 && cm2 == 0.0) => {
                invalid("thm_main_degenerate needs c21 = c2-1 = 0 and a nonzero m = 2 part")
            }
            _ => Ok(()),
        }
    }

    /// Canonical `key = value` text with every key; read back by
    /// [`ExperimentConfig::parse`].
    pub fn to_echo(&self) -> String {
        let mut out = String::new();
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(",");
        let _ = writeln!(out, "experiment = {}", self.experiment);
        let _ = writeln!(out, "omega_rot = {:e}", self.omega_rot);
        let _ = writeln!(out, "base_shell2 = {}", list(&self.base_shell2));
        let _ = writeln!(out, "eps_list = {}", list(&self.eps_list));
        let _ = writeln!(out, "T = {:e}", self.t_end);
        let _ = writeln!(out, "dt = {:e}", self.dt);
        let _ = writeln!(out, "lmax = {}", self.lmax);
        let _ = writeln!(out, "sample_every = {}", self.sample_every);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "perturb_shells = {}", self.perturb_shells);
        let _ = writeln!(out, "outdir = {}", self.outdir.display());
        out
    }

    /// SHA-256 of the echo without the output directory.
    pub fn hash(&self) -> String {
        let text: String =
            self.to_echo().lines().filter(|l| !l.starts_with("outdir")).map(|l| format!("{l}\n")).collect();
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, std::num::ParseFloatError> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split([',', ' '])
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_round_trip() {
        for e in Experiment::ALL {
            let cfg = ExperimentConfig::defaults(e);
            cfg.validate().unwrap();
            let back = ExperimentConfig::parse(&cfg.to_echo()).unwrap();
            assert_eq!(back, cfg, "{e}");
            assert_eq!(back.hash(), cfg.hash());
        }
    }

    #[test]
    fn parse_overrides_and_errors() {
        let cfg = ExperimentConfig::parse(
            "# sweep\nexperiment = thm1_zonal\neps_list = [1e-3, 1e-2, 1e-1]\nT = 2\nlmax=12 # small\n",
        )
        .unwrap();
        assert_eq!(cfg.eps_list, vec![1e-3, 1e-2, 1e-1]);
        assert_eq!((cfg.t_end, cfg.lmax), (2.0, 12));
        assert!(ExperimentConfig::parse("T = 2").is_err());
        assert!(ExperimentConfig::parse("experiment = thm1_zonal\nfoo = 1").is_err());
        assert!(ExperimentConfig::parse("experiment = thm1_zonal\nT = 1\nT = 2").is_err());
        assert!(ExperimentConfig::parse("experiment = thm1_zonal\neps_list = 1e-2,1e-3,2e-2").is_err());
        assert!(ExperimentConfig::parse("experiment = thm1_zonal\nT = 1.0005").is_err());
        assert!(ExperimentConfig::parse("experiment = thm2_omega0\nomega_rot = 1").is_err());
        assert!(ExperimentConfig::parse("experiment = thm1_zonal\nbase_shell2 = 0,0,0,1,0").is_err());
        assert!(ExperimentConfig::parse("experiment = thm1_zonal\nperturb_shells = 40-50").is_err());
    }

    #[test]
    fn hash_ignores_outdir() {
        let a = ExperimentConfig::defaults(Experiment::Thm1Zonal);
        let mut b = a.clone();
        b.outdir = PathBuf::from("/elsewhere");
        assert_eq!(a.hash(), b.hash());
        b.seed += 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn demo_horizon_covers_quarter_turn() {
        let cfg = ExperimentConfig::defaults(Experiment::DegeneracyDemo);
        assert!(cfg.t_end >= degeneracy_time(3e-2));
        assert!(cfg.t_end - degeneracy_time(3e-2) < cfg.dt);
    }
}
