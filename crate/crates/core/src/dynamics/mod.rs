//! Rossby–Haurwitz waves and a pseudo-spectral solver for the vorticity
//! equation `∂ₜω + ∇⊥ψ·∇ω = 0`, `Δψ = ω`, on the unit sphere.
//!
//! The velocity is `u = r̂ × ∇ψ`, so `ω = Ωx₃` is solid-body rotation with
//! angular velocity `Ω/2` towards the east. Rotation of the frame enters only
//! through the `Ωx₃` part of the initial vorticity.

mod diagnostics;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::harmonics::{Grid, GridField, SpectralField};

pub use diagnostics::{Diagnostics, DiagnosticsRecord, Trajectory, TRAJECTORY_HEADER};

/// `Ωx₃ + Y(θ, φ − ct)` with `Y` a single-shell field of degree `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RHWave {
    pub omega_rot: f64,
    pub degree: usize,
    /// Shell coefficients `[c_{j,-j}, …, c_{j,j}]`.
    pub coeffs: Vec<f64>,
}

impl RHWave {
    pub fn new(omega_rot: f64, degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        if degree < 1 {
            return invalid("wave degree must be at least 1");
        }
        if coeffs.len() != 2 * degree + 1 {
            return invalid(format!("degree-{degree} wave needs {} coefficients", 2 * degree + 1));
        }
        Ok(Self { omega_rot, degree, coeffs })
    }

    /// Degree-2 wave from `[c₂,₋₂, c₂,₋₁, c₂₀, c₂₁, c₂₂]`.
    pub fn degree2(omega_rot: f64, shell2: [f64; 5]) -> Self {
        Self { omega_rot, degree: 2, coeffs: shell2.to_vec() }
    }

    /// Travelling speed `c = Ω (1/2 − 1/(j(j+1)))`.
    pub fn speed(&self) -> f64 {
        let j = self.degree as f64;
        self.omega_rot * (0.5 - 1.0 / (j * (j + 1.0)))
    }

    /// True if the shell part has no `m ≠ 0` content.
    pub fn is_zonal(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| i == self.degree || *c == 0.0)
    }

    /// The exact solution at time `t`.
    pub fn state(&self, t: f64, lmax: usize) -> SpectralField {
        let mut f = SpectralField::zeros(lmax.max(self.degree));
        f.set_shell(self.degree, &self.coeffs);
        let mut out = f.rotate_azimuth(self.speed() * t);
        out.set(1, 0, out.get(1, 0) + self.omega_rot * (4.0 * PI / 3.0).sqrt());
        out
    }
}

/// `rh_state(w, t)`: the wave at time `t` with cutoff `lmax`.
pub fn rh_state(w: &RHWave, t: f64, lmax: usize) -> SpectralField {
    w.state(t, lmax)
}

/// True if `g` analyzes quadratic products of degree-`lmax` fields exactly.
pub fn is_dealiased_for(g: &Grid, lmax: usize) -> bool {
    g.lmax() >= lmax && 2 * g.nlat() >= 3 * lmax + 1 && g.nlon() > 3 * lmax
}

/// `∂ₜω = −J(ψ, ω)` with `J = ∂_φψ ∂_μω − ∂_μψ ∂_φω`, truncated to `ω`'s band.
pub fn tendency(omega: &SpectralField, g: &Grid) -> Result<SpectralField> {
    if !is_dealiased_for(g, omega.lmax()) {
        return invalid(format!(
            "grid {}x{} is not dealiased for lmax={}",
            g.nlat(),
            g.nlon(),
            omega.lmax()
        ));
    }
    Ok(tendency_unchecked(omega, g))
}

fn tendency_unchecked(omega: &SpectralField, g: &Grid) -> SpectralField {
    let psi = omega.inverse_laplacian();
    let psi_phi = g.synthesize(&psi.d_phi()).expect("band checked");
    let psi_mu = g.synthesize_d_mu(&psi).expect("band checked");
    let om_phi = g.synthesize(&omega.d_phi()).expect("band checked");
    let om_mu = g.synthesize_d_mu(omega).expect("band checked");
    let mut jac = GridField::zeros(g);
    for (((out, a), (b, c)), d) in jac
        .values_mut()
        .iter_mut()
        .zip(psi_phi.values())
        .zip(om_mu.values().iter().zip(psi_mu.values()))
        .zip(om_phi.values())
    {
        *out = -(a * b - c * d);
    }
    g.analyze(&jac).expect("shape fixed by grid").with_lmax(omega.lmax())
}

/// One classical fourth-order Runge–Kutta step.
pub fn step_rk4(omega: &SpectralField, dt: f64, g: &Grid) -> Result<SpectralField> {
    if !(dt > 0.0) {
        return invalid("dt must be positive");
    }
    let k1 = tendency(omega, g)?;
    let mut y = omega.clone();
    y.axpy(0.5 * dt, &k1);
    let k2 = tendency_unchecked(&y, g);
    let mut y = omega.clone();
    y.axpy(0.5 * dt, &k2);
    let k3 = tendency_unchecked(&y, g);
    let mut y = omega.clone();
    y.axpy(dt, &k3);
    let k4 = tendency_unchecked(&y, g);
    let mut out = omega.clone();
    out.axpy(dt / 6.0, &k1);
    out.axpy(dt / 3.0, &k2);
    out.axpy(dt / 3.0, &k3);
    out.axpy(dt / 6.0, &k4);
    if !out.is_finite() {
        return Err(Error::BlowUp { step: 1 });
    }
    Ok(out)
}

/// Number of steps `n` with `n·dt = t_end`.
pub fn step_count(t_end: f64, dt: f64) -> Result<usize> {
    if !(t_end > 0.0) || !(dt > 0.0) {
        return invalid("T and dt must be positive");
    }
    let n = (t_end / dt).round();
    if (n * dt - t_end).abs() > 1e-9 * t_end.max(1.0) {
        return invalid(format!("T={t_end} is not a whole number of steps dt={dt}"));
    }
    Ok(n as usize)
}

/// Fixed-step RK4 from `omega0` to `t_end`, sampling the state and the
/// diagnostics at step 0, every `sample_every` steps and at the final step.
pub fn simulate(
    omega0: &SpectralField,
    t_end: f64,
    dt: f64,
    sample_every: usize,
    g: &Grid,
) -> Result<Trajectory> {
    let diag = Diagnostics::new(omega0.lmax(), 5)?;
    simulate_with(omega0, t_end, dt, sample_every, g, &diag)
}

/// [`simulate`] with a caller-provided diagnostics engine.
pub fn simulate_with(
    omega0: &SpectralField,
    t_end: f64,
    dt: f64,
    sample_every: usize,
    g: &Grid,
    diag: &Diagnostics,
) -> Result<Trajectory> {
    let steps = step_count(t_end, dt)?;
    if sample_every == 0 {
        return invalid("sample_every must be positive");
    }
    if !is_dealiased_for(g, omega0.lmax()) {
        return invalid("simulation grid is not dealiased for the initial state");
    }
    let mut traj = Trajectory::new();
    let mut omega = omega0.clone();
    traj.push(0.0, omega.clone(), diag.compute(&omega)?);
    for n in 1..=steps {
        omega = step_rk4(&omega, dt, g).map_err(|e| match e {
            Error::BlowUp { .. } => Error::BlowUp { step: n },
            other => other,
        })?;
        if n % sample_every == 0 || n == steps {
            traj.push(n as f64 * dt, omega.clone(), diag.compute(&omega)?);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn speeds() {
        let w = RHWave::degree2(3.0, [0.0, 0.0, 0.0, 1.0, 0.0]);
        assert!((w.speed() - 1.0).abs() < 1e-15);
        let w3 = RHWave::new(12.0, 3, vec![0.0; 7]).unwrap();
        assert!((w3.speed() - 5.0).abs() < 1e-14);
        assert!(RHWave::new(1.0, 2, vec![0.0; 4]).is_err());
    }

    #[test]
    fn rh_state_at_zero() {
        let w = RHWave::degree2(2.0, [0.1, 0.2, 0.3, 0.4, 0.5]);
        let f = rh_state(&w, 0.0, 4);
        assert!((f.get(1, 0) - 2.0 * (4.0 * PI / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(f.shell(2), vec![0.1, 0.2, 0.3, 0.4, 0.5]);
    }

    #[test]
    fn rh_state_period() {
        let w = RHWave::degree2(1.0, [0.0, 0.0, 0.0, 0.0, 1.0]);
        let t = 2.0 * PI / (2.0 * w.speed());
        let f = rh_state(&w, t, 2);
        assert!((f.get(2, 2) - 1.0).abs() < 1e-14);
        assert!(f.get(2, -2).abs() < 1e-14);
        // quarter period of the m=2 pair moves Y₂₂ onto Y₂,₋₂
        let q = rh_state(&w, PI / (4.0 * w.speed()), 2);
        assert!((q.get(2, -2) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zonal_wave_is_steady() {
        let w = RHWave::degree2(1.5, [0.0, 0.0, 1.0, 0.0, 0.0]);
        assert!(w.is_zonal());
        assert_eq!(rh_state(&w, 0.0, 3), rh_state(&w, 17.0, 3));
    }

    #[test]
    fn zonal_and_eigen_states_have_zero_tendency() {
        let g = Grid::build(8, true).unwrap();
        let mut z = SpectralField::zeros(8);
        z.set(1, 0, 0.7);
        z.set(4, 0, -0.3);
        z.set(7, 0, 0.2);
        assert!(tendency(&z, &g).unwrap().l2_norm() < 1e-13);
        let mut e = SpectralField::zeros(8);
        e.set(5, 3, 0.8);
        e.set(5, -1, 0.4);
        assert!(tendency(&e, &g).unwrap().l2_norm() < 1e-13);
    }

    #[test]
    fn tendency_matches_wave_derivative() {
        let lmax = 12;
        let g = Grid::build(lmax, true).unwrap();
        let w = RHWave::degree2(2.0, [0.3, -0.5, 0.2, 0.6, -0.4]);
        let h = 1e-5;
        let fd = (&rh_state(&w, h, lmax) - &rh_state(&w, -h, lmax)).scaled(0.5 / h);
        let tend = tendency(&rh_state(&w, 0.0, lmax), &g).unwrap();
        assert!((&tend - &fd).l2_norm() < 1e-8);
    }

    #[test]
    fn aliased_grid_rejected() {
        let g = Grid::build(8, false).unwrap();
        assert!(tendency(&SpectralField::zeros(8), &g).is_err());
    }

    #[test]
    fn step_preserves_zonal_state_and_bad_dt() {
        let g = Grid::build(6, true).unwrap();
        let mut z = SpectralField::zeros(6);
        z.set(2, 0, 1.0);
        z.set(3, 0, 0.5);
        let out = step_rk4(&z, 0.01, &g).unwrap();
        assert!((&out - &z).l2_norm() < 1e-15);
        assert!(step_rk4(&z, 0.0, &g).is_err());
    }

    #[test]
    fn step_counts() {
        assert_eq!(step_count(5.0, 1e-3).unwrap(), 5000);
        assert!(step_count(1.0, 0.3).is_err());
        assert!(step_count(-1.0, 0.1).is_err());
    }
}
