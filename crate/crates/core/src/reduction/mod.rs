//! Finite-dimensional reduction of low-shell states.
//!
//! A field on shells 1 and 2 is `ω(x) = v·x + xᵀQx` with `v ∈ ℝ³` and `Q`
//! symmetric traceless. Rotating the sphere, `ω ↦ ω(R·)`, acts by
//! `v ↦ Rᵀv` and `Q ↦ RᵀQR`. Canonical forms and orbital distances are
//! computed in these coordinates.

mod canonical;
mod distance;

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::harmonics::SpectralField;

pub use canonical::{
    canonical_zonal_form, reduce_azimuthal, sorted_eigen, AzimuthalTarget, CanonicalForm, Reduced, ZonalParams,
};
pub use distance::{orbital_distance_axis, orbital_distance_so3, AxisDistance, So3Distance};

/// `√(15/16π)`, the scale of the off-diagonal shell-2 harmonics.
pub fn k2() -> f64 {
    (15.0 / (16.0 * PI)).sqrt()
}

/// Symmetric traceless 3×3 matrix with `xᵀQx = Σ c₂,ₘ Y₂,ₘ(x)` on S².
/// Entries are stored as `[q11, q12, q13, q22, q23, q33]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QMatrix {
    pub entries: [f64; 6],
}

impl QMatrix {
    /// From `[c₂,₋₂, c₂,₋₁, c₂₀, c₂₁, c₂₂]`.
    pub fn from_shell2(c2: &[f64; 5]) -> Self {
        let k = k2();
        let [cm2, cm1, c0, c1, c2p] = *c2;
        let s = 3f64.sqrt() / 3.0;
        Self {
            entries: [
                k * (c2p - s * c0),
                k * cm2,
                k * c1,
                k * (-c2p - s * c0),
                k * cm1,
                k * 2.0 * s * c0,
            ],
        }
    }

    /// Inverse of [`QMatrix::from_shell2`]; requires a traceless matrix.
    pub fn to_shell2(&self) -> Result<[f64; 5]> {
        let [q11, q12, q13, q22, q23, q33] = self.entries;
        let scale = self.entries.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if self.trace().abs() > 1e-12 * scale {
            return invalid(format!("Q has trace {:e}", self.trace()));
        }
        let k = k2();
        Ok([q12 / k, q23 / k, q33 * 3f64.sqrt() / (2.0 * k), q13 / k, (q11 - q22) / (2.0 * k)])
    }

    pub fn from_matrix(m: &Matrix3<f64>) -> Result<Self> {
        let scale = m.amax().max(1.0);
        if (m - m.transpose()).amax() > 1e-12 * scale {
            return invalid("Q must be symmetric");
        }
        Ok(Self { entries: [m[(0, 0)], m[(0, 1)], m[(0, 2)], m[(1, 1)], m[(1, 2)], m[(2, 2)]] })
    }

    pub fn to_matrix(&self) -> Matrix3<f64> {
        let [q11, q12, q13, q22, q23, q33] = self.entries;
        Matrix3::new(q11, q12, q13, q12, q22, q23, q13, q23, q33)
    }

    pub fn trace(&self) -> f64 {
        self.entries[0] + self.entries[3] + self.entries[5]
    }

    /// `xᵀQx`.
    pub fn eval(&self, x: [f64; 3]) -> f64 {
        let v = Vector3::from(x);
        v.dot(&(self.to_matrix() * v))
    }

    /// `RᵀQR`, the matrix of `x ↦ ω(Rx)`.
    pub fn conjugate(&self, r: &Matrix3<f64>) -> Self {
        let m = r.transpose() * self.to_matrix() * r;
        let sym = (m + m.transpose()) * 0.5;
        Self::from_matrix(&sym).expect("symmetrized")
    }
}

/// `shell2_to_q`
pub fn shell2_to_q(c2: &[f64; 5]) -> QMatrix {
    QMatrix::from_shell2(c2)
}

/// `q_to_shell2`
pub fn q_to_shell2(q: &QMatrix) -> Result<[f64; 5]> {
    q.to_shell2()
}

/// `L²` inner product of two shell-2 fields: `(8π/15) tr(Q_f Q_g)`.
pub fn shell2_inner(f: &QMatrix, g: &QMatrix) -> f64 {
    8.0 * PI / 15.0 * (f.to_matrix() * g.to_matrix()).trace()
}

/// Fails unless `RᵀR = I` and `det R = 1` to `1e-10`.
pub fn check_rotation(r: &Matrix3<f64>) -> Result<()> {
    let err = (r.transpose() * r - Matrix3::identity()).amax();
    if err > 1e-10 || (r.determinant() - 1.0).abs() > 1e-10 {
        return invalid(format!("not a rotation (orthogonality error {err:e}, det {})", r.determinant()));
    }
    Ok(())
}

/// Rotation by `angle` about the polar axis: maps `(θ, φ)` to `(θ, φ + angle)`.
pub fn rotation_about_e3(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Rotation by `angle` about the unit vector `axis` (right-hand rule).
pub fn rotation_about(axis: [f64; 3], angle: f64) -> Matrix3<f64> {
    let a = nalgebra::Unit::new_normalize(Vector3::from(axis));
    *nalgebra::Rotation3::from_axis_angle(&a, angle).matrix()
}

/// Haar-uniform random rotation.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let quat = nalgebra::UnitQuaternion::from_quaternion(nalgebra::Quaternion::new(q[0], q[1], q[2], q[3]));
    *quat.to_rotation_matrix().matrix()
}

/// Which parametrization a [`ShellState`] is currently written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShellRep {
    Raw,
    /// `c₂,₋₁ = 0`
    Rep1,
    /// `c₂,₋₂ = 0`
    Rep2,
    /// `c₂,₋₂ = 0`, shell-2 part parametrized by `(A, B, D, α)`.
    Zonal,
}

/// Shell-1 vector `v` (with `ω₁ = v·x`) and shell-2 coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellState {
    pub shell1: [f64; 3],
    /// `[c₂,₋₂, c₂,₋₁, c₂₀, c₂₁, c₂₂]`
    pub c2: [f64; 5],
    pub rep: ShellRep,
}

impl ShellState {
    /// `Ωx₃ + Σ c₂,ₘ Y₂,ₘ`.
    pub fn new(omega_rot: f64, c2: [f64; 5]) -> Self {
        Self { shell1: [0.0, 0.0, omega_rot], c2, rep: ShellRep::Raw }
    }

    /// Shells 1 and 2 of `f`; higher shells are ignored.
    pub fn from_field(f: &SpectralField) -> Self {
        let s = (3.0 / (4.0 * PI)).sqrt();
        Self {
            shell1: [s * f.get(1, 1), s * f.get(1, -1), s * f.get(1, 0)],
            c2: [f.get(2, -2), f.get(2, -1), f.get(2, 0), f.get(2, 1), f.get(2, 2)],
            rep: ShellRep::Raw,
        }
    }

    pub fn to_field(&self, lmax: usize) -> SpectralField {
        let s = (4.0 * PI / 3.0).sqrt();
        let mut f = SpectralField::zeros(lmax.max(2));
        f.set(1, 1, s * self.shell1[0]);
        f.set(1, -1, s * self.shell1[1]);
        f.set(1, 0, s * self.shell1[2]);
        f.set_shell(2, &self.c2);
        f
    }

    /// `Ω`, the polar component of the shell-1 vector.
    pub fn omega_rot(&self) -> f64 {
        self.shell1[2]
    }

    pub fn q(&self) -> QMatrix {
        QMatrix::from_shell2(&self.c2)
    }

    pub fn shell2_norm(&self) -> f64 {
        self.c2.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `Σ c₂,ₘ² = 1` to `tol`.
    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.shell2_norm() - 1.0).abs() <= tol
    }

    /// `‖ω‖₂` over shells 1 and 2.
    pub fn l2_norm(&self) -> f64 {
        let v2: f64 = self.shell1.iter().map(|x| x * x).sum();
        (4.0 * PI / 3.0 * v2 + self.shell2_norm().powi(2)).sqrt()
    }
}

/// The state of `x ↦ ω(Rx)`.
pub fn rotate_state(s: &ShellState, r: &Matrix3<f64>) -> Result<ShellState> {
    check_rotation(r)?;
    let v = r.transpose() * Vector3::from(s.shell1);
    let c2 = s.q().conjugate(r).to_shell2()?;
    Ok(ShellState { shell1: [v[0], v[1], v[2]], c2, rep: ShellRep::Raw })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn point(theta: f64, phi: f64) -> [f64; 3] {
        [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
    }

    #[test]
    fn q_off_diagonal_example() {
        let q = QMatrix::from_shell2(&[1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!((q.entries[1] - k2()).abs() < 1e-15);
        assert_eq!([q.entries[0], q.entries[2], q.entries[3], q.entries[4], q.entries[5]], [0.0; 5]);
        let f = SpectralField::single(2, 2, -2);
        let x = point(0.8, 2.1);
        assert!((q.eval(x) - f.evaluate(0.8, 2.1)).abs() < 1e-14);
    }

    #[test]
    fn q_zonal_example() {
        let q = QMatrix::from_shell2(&[0.0, 0.0, 1.0, 0.0, 0.0]);
        let s = 3f64.sqrt() / 3.0;
        let expect = [-s * k2(), 0.0, 0.0, -s * k2(), 0.0, 2.0 * s * k2()];
        for (a, b) in q.entries.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(q.trace().abs() < 1e-15);
    }

    #[test]
    fn quadratic_form_reproduces_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let c2: [f64; 5] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let q = QMatrix::from_shell2(&c2);
            let mut f = SpectralField::zeros(2);
            f.set_shell(2, &c2);
            for (t, p) in [(0.1, 0.2), (1.3, -2.5), (2.9, 4.0)] {
                assert!((q.eval(point(t, p)) - f.evaluate(t, p)).abs() < 1e-13);
            }
            for (a, b) in q.to_shell2().unwrap().iter().zip(&c2) {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn traceful_q_rejected() {
        let q = QMatrix { entries: [1.0, 0.0, 0.0, 0.0, 0.0, 0.0] };
        assert!(q.to_shell2().is_err());
    }

    #[test]
    fn inner_product_via_q() {
        let a = [0.3, -0.1, 0.5, 0.2, 0.7];
        let b = [-0.4, 0.6, 0.1, 0.9, -0.2];
        let ip: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        let via_q = shell2_inner(&QMatrix::from_shell2(&a), &QMatrix::from_shell2(&b));
        assert!((ip - via_q).abs() < 1e-14);
    }

    #[test]
    fn rotate_identity_and_isometry() {
        let s = ShellState::new(0.7, [0.1, 0.2, 0.3, 0.4, 0.5]);
        let same = rotate_state(&s, &Matrix3::identity()).unwrap();
        for (a, b) in same.c2.iter().zip(&s.c2) {
            assert!((a - b).abs() < 1e-15);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = random_rotation(&mut rng);
        let rs = rotate_state(&s, &r).unwrap();
        assert!((rs.l2_norm() - s.l2_norm()).abs() < 1e-12);
        assert!(rotate_state(&s, &(Matrix3::identity() * 2.0)).is_err());
    }

    #[test]
    fn rotation_acts_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = ShellState { shell1: [0.2, -0.3, 0.9], c2: [0.1, 0.2, 0.3, 0.4, 0.5], rep: ShellRep::Raw };
        let r = random_rotation(&mut rng);
        let rs = rotate_state(&s, &r).unwrap();
        let f = s.to_field(2);
        let g = rs.to_field(2);
        let x = point(1.1, 0.4);
        let rx = r * Vector3::from(x);
        let theta = rx[2].acos();
        let phi = rx[1].atan2(rx[0]);
        assert!((g.evaluate(1.1, 0.4) - f.evaluate(theta, phi)).abs() < 1e-13);
    }

    #[test]
    fn axis_rotation_frequencies() {
        let s = ShellState::new(1.0, [0.0, 0.0, 0.0, 1.0, 0.0]);
        let r = rotate_state(&s, &rotation_about_e3(0.3)).unwrap();
        // Y₂₁(θ, φ+φ₀) = cos φ₀ Y₂₁ − sin φ₀ Y₂,₋₁
        assert!((r.c2[3] - 0.3f64.cos()).abs() < 1e-14);
        assert!((r.c2[1] + 0.3f64.sin()).abs() < 1e-14);
        let s = ShellState::new(1.0, [0.0, 0.0, 0.0, 0.0, 1.0]);
        let r = rotate_state(&s, &rotation_about_e3(0.3)).unwrap();
        assert!((r.c2[4] - 0.6f64.cos()).abs() < 1e-14);
        assert!((r.c2[0] + 0.6f64.sin()).abs() < 1e-14);
        assert!((r.omega_rot() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn field_round_trip() {
        let mut f = SpectralField::zeros(3);
        f.set(1, -1, 0.3);
        f.set(1, 1, -0.2);
        f.set(2, 1, 0.5);
        let s = ShellState::from_field(&f);
        assert!((&s.to_field(3) - &f).l2_norm() < 1e-15);
    }
}
