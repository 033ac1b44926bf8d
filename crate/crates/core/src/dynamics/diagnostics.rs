//! Conserved quantities along a trajectory and their CSV form.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::harmonics::{Grid, ShellSelector, SpectralField};

pub const TRAJECTORY_HEADER: &str = "t,energy,enstrophy,Lx,Ly,Lz,C3,C4,C5,p3_enstrophy";

/// Conserved and monitored quantities of one state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    /// `½‖ω‖²_{H⁻¹}`
    pub energy: f64,
    /// `‖ω‖²₂`
    pub enstrophy: f64,
    /// `∫ ω x dS`
    pub angular_momentum: [f64; 3],
    /// `C₃ … C_kmax`
    pub casimirs: Vec<f64>,
    /// `‖P_{≥3}ω‖²₂`
    pub p_geq3_enstrophy: f64,
}

impl DiagnosticsRecord {
    /// `C_k` for `3 ≤ k ≤ kmax`; `C₂` is the enstrophy.
    pub fn casimir(&self, k: usize) -> Option<f64> {
        match k {
            2 => Some(self.enstrophy),
            k if k >= 3 => self.casimirs.get(k - 3).copied(),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.energy.is_finite()
            && self.enstrophy.is_finite()
            && self.angular_momentum.iter().all(|x| x.is_finite())
            && self.casimirs.iter().all(|x| x.is_finite())
            && self.p_geq3_enstrophy.is_finite()
    }
}

/// Computes [`DiagnosticsRecord`]s; owns a grid that integrates `ω^kmax`
/// exactly for band-limited `ω`.
#[derive(Clone, Debug)]
pub struct Diagnostics {
    grid: Grid,
    kmax: usize,
}

impl Diagnostics {
    pub fn new(lmax: usize, kmax: usize) -> Result<Self> {
        if !(3..=9).contains(&kmax) {
            return invalid(format!("kmax={kmax} outside 3..=9"));
        }
        let grid = Grid::exact_for_degree(lmax.max(2), kmax * lmax.max(2))?;
        Ok(Self { grid, kmax })
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Quadrature `∫ ω^k dS` for each `k` in `3..=kmax`.
    pub fn casimirs(&self, omega: &SpectralField) -> Result<Vec<f64>> {
        let v = self.grid.synthesize(omega)?;
        let mut power = v.mul(&v);
        let mut out = Vec::with_capacity(self.kmax - 2);
        for _ in 3..=self.kmax {
            power = power.mul(&v);
            out.push(self.grid.integrate(&power)?);
        }
        Ok(out)
    }

    pub fn compute(&self, omega: &SpectralField) -> Result<DiagnosticsRecord> {
        Ok(DiagnosticsRecord {
            energy: omega.energy(),
            enstrophy: omega.l2_norm().powi(2),
            angular_momentum: angular_momentum(omega),
            casimirs: self.casimirs(omega)?,
            p_geq3_enstrophy: omega.project(ShellSelector::AtLeast(3)).l2_norm().powi(2),
        })
    }
}

/// `L = ∫ ω x dS = √(4π/3) (c₁₁, c₁,₋₁, c₁₀)`.
pub fn angular_momentum(omega: &SpectralField) -> [f64; 3] {
    let s = (4.0 * PI / 3.0).sqrt();
    [s * omega.get(1, 1), s * omega.get(1, -1), s * omega.get(1, 0)]
}

/// Sampled states and diagnostics of one run.
#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    pub diagnostics: Vec<DiagnosticsRecord>,
}

impl Trajectory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: f64, state: SpectralField, record: DiagnosticsRecord) {
        if let Some(&last) = self.times.last() {
            assert!(t > last, "sample times must increase");
        }
        self.times.push(t);
        self.states.push(state);
        self.diagnostics.push(record);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&SpectralField> {
        self.states.last()
    }

    /// Diagnostics table with header [`TRAJECTORY_HEADER`].
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(TRAJECTORY_HEADER);
        out.push('\n');
        for (t, d) in self.times.iter().zip(&self.diagnostics) {
            let c = |k: usize| d.casimir(k).unwrap_or(f64::NAN);
            let [lx, ly, lz] = d.angular_momentum;
            let _ = writeln!(
                out,
                "{t:.16e},{:.16e},{:.16e},{lx:.16e},{ly:.16e},{lz:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                d.energy,
                d.enstrophy,
                c(3),
                c(4),
                c(5),
                d.p_geq3_enstrophy
            );
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    /// Sampled states as `t,l,m,value` rows.
    pub fn states_to_csv_string(&self) -> String {
        let mut out = String::from("t,l,m,value\n");
        for (t, s) in self.times.iter().zip(&self.states) {
            for (l, m, c) in s.iter() {
                let _ = writeln!(out, "{t:.16e},{l},{m},{c:.16e}");
            }
        }
        out
    }

    pub fn write_states_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.states_to_csv_string())?;
        Ok(())
    }

    /// Reads `(t, state)` pairs written by [`Trajectory::write_states_csv`].
    pub fn read_states_csv(path: impl AsRef<Path>) -> Result<Vec<(f64, SpectralField)>> {
        let text = fs::read_to_string(path)?;
        let mut groups: Vec<(f64, Vec<(usize, i64, f64)>)> = Vec::new();
        for (i, line) in text.lines().enumerate().skip(1) {
            let bad = || Error::Parse(format!("states line {}: '{line}'", i + 1));
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 4 {
                return Err(bad());
            }
            let t: f64 = parts[0].parse().map_err(|_| bad())?;
            let l: usize = parts[1].parse().map_err(|_| bad())?;
            let m: i64 = parts[2].parse().map_err(|_| bad())?;
            let v: f64 = parts[3].parse().map_err(|_| bad())?;
            match groups.last_mut() {
                Some((gt, rows)) if *gt == t => rows.push((l, m, v)),
                _ => groups.push((t, vec![(l, m, v)])),
            }
        }
        groups
            .into_iter()
            .map(|(t, rows)| {
                let lmax = rows.iter().map(|r| r.0).max().unwrap_or(1);
                let mut f = SpectralField::zeros(lmax);
                for (l, m, v) in rows {
                    if l == 0 || m.unsigned_abs() as usize > l {
                        return Err(Error::Parse(format!("invalid (l, m) = ({l}, {m})")));
                    }
                    f.set(l, m, v);
                }
                Ok((t, f))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysphere::casimir_values;

    #[test]
    fn angular_momentum_of_y10() {
        let f = SpectralField::single(3, 1, 0);
        let l = angular_momentum(&f);
        assert!((l[2] - (4.0 * PI / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!((l[0], l[1]), (0.0, 0.0));
    }

    #[test]
    fn quadrature_casimirs_match_exact_values() {
        let mut f = SpectralField::zeros(2);
        f.set(1, 0, 0.4);
        f.set(1, 1, -0.2);
        f.set(2, 0, 0.7);
        f.set(2, -1, 0.3);
        f.set(2, 2, -0.5);
        let d = Diagnostics::new(2, 9).unwrap();
        let rec = d.compute(&f).unwrap();
        let exact = casimir_values(&f, &[3, 4, 5, 6, 7, 8, 9]).unwrap();
        for (q, e) in rec.casimirs.iter().zip(&exact) {
            assert!((q - e).abs() <= 1e-12 * e.abs().max(1.0));
        }
        assert_eq!(rec.casimir(2), Some(rec.enstrophy));
    }

    #[test]
    fn c3_of_y20() {
        let d = Diagnostics::new(4, 5).unwrap();
        let c3 = d.compute(&SpectralField::single(4, 2, 0)).unwrap().casimir(3).unwrap();
        assert!((c3 - (5.0 / PI).sqrt() / 7.0).abs() < 1e-14);
    }

    #[test]
    fn csv_and_states_round_trip() {
        let d = Diagnostics::new(3, 5).unwrap();
        let mut traj = Trajectory::new();
        for (i, t) in [0.0, 0.5].iter().enumerate() {
            let f = SpectralField::single(3, 2, i as i64);
            let rec = d.compute(&f).unwrap();
            traj.push(*t, f, rec);
        }
        let csv = traj.to_csv_string();
        assert_eq!(csv.lines().next().unwrap(), TRAJECTORY_HEADER);
        assert_eq!(csv.lines().count(), 3);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("states.csv");
        traj.write_states_csv(&p).unwrap();
        let back = Trajectory::read_states_csv(&p).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1].1, traj.states[1]);
        assert_eq!(back[1].0, 0.5);
    }
}
