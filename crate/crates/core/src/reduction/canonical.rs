//! Canonical forms: full diagonalization of the shell-2 quadratic form and
//! azimuthal normalizations about the polar axis.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{rotate_state, rotation_about_e3, QMatrix, ShellRep, ShellState};
use crate::error::{Error, Result};

/// Eigenpairs of `Q` ordered so that `|λ₃| = max|λᵢ|` (ties broken towards
/// `λ₃ ≥ 0`) and `λ₁ ≥ λ₂`, with eigenvector columns forming a rotation.
pub fn sorted_eigen(q: &QMatrix) -> ([f64; 3], Matrix3<f64>) {
    let eig = SymmetricEigen::new(q.to_matrix());
    let vals = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tie = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let mut i3 = 0;
    for i in 1..3 {
        let (a, b) = (vals[i].abs(), vals[i3].abs());
        if a > b + tie || ((a - b).abs() <= tie && vals[i] > vals[i3]) {
            i3 = i;
        }
    }
    let mut rest: Vec<usize> = (0..3).filter(|&i| i != i3).collect();
    if vals[rest[1]] > vals[rest[0]] {
        rest.swap(0, 1);
    }
    let order = [rest[0], rest[1], i3];
    let mut r = Matrix3::from_columns(&[
        eig.eigenvectors.column(order[0]).into_owned(),
        eig.eigenvectors.column(order[1]).into_owned(),
        eig.eigenvectors.column(order[2]).into_owned(),
    ]);
    if r.determinant() < 0.0 {
        r.set_column(0, &(-r.column(0)));
    }
    (order.map(|i| vals[i]), r)
}

/// `ω(Rx) = A Y₂₀ + B Y₂₂` for a shell-2 field `ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalForm {
    pub a: f64,
    pub b: f64,
    pub rotation: Matrix3<f64>,
    pub eigenvalues: [f64; 3],
}

/// Rotates a shell-2 field to `A Y₂₀ + B Y₂₂` by diagonalizing its `Q`.
///
/// With `λ` ordered as in [`sorted_eigen`], `A = (λ₃/2)√(16π/5)` and
/// `B = ((λ₁−λ₂)/2)√(16π/15)`; for a unit field `A² + B² = 1` and
/// `A² ≥ 3/7`.
pub fn canonical_zonal_form(c2: &[f64; 5]) -> CanonicalForm {
    let (l, r) = sorted_eigen(&QMatrix::from_shell2(c2));
    CanonicalForm {
        a: 0.5 * l[2] * (16.0 * PI / 5.0).sqrt(),
        b: 0.5 * (l[0] - l[1]) * (16.0 * PI / 15.0).sqrt(),
        rotation: r,
        eigenvalues: l,
    }
}

/// Target of an azimuthal normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AzimuthalTarget {
    /// Remove `c₂,₋₁`, leaving `c₂₁ ≥ 0`.
    Rep1,
    /// Remove `c₂,₋₂`, leaving `c₂₂ ≥ 0`.
    Rep2,
    /// As `Rep2`, then write `c₂₁ Y₂₁ + c₂,₋₁ Y₂,₋₁ = B Y₂₁(θ, φ+α)`.
    Zonal,
}

impl fmt::Display for AzimuthalTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AzimuthalTarget::Rep1 => "rep1",
            AzimuthalTarget::Rep2 => "rep2",
            AzimuthalTarget::Zonal => "zonal",
        })
    }
}

impl FromStr for AzimuthalTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "rep1" => Ok(AzimuthalTarget::Rep1),
            "rep2" => Ok(AzimuthalTarget::Rep2),
            "zonal" | "rep3" => Ok(AzimuthalTarget::Zonal),
            other => Err(Error::InvalidArgument(format!("unknown target '{other}'"))),
        }
    }
}

/// Parameters of `Ωx₃ + A Y₂₀ + B Y₂₁(θ, φ+α) + D Y₂₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZonalParams {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub alpha: f64,
}

/// Outcome of [`reduce_azimuthal`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reduced {
    /// The state of `x ↦ ω(R_{e₃}^{φ₀} x)`.
    pub state: ShellState,
    pub phi0: f64,
    /// The pair to be removed was already zero; any `φ₀` works and `0` is
    /// returned.
    pub degenerate: bool,
    pub zonal: Option<ZonalParams>,
}

/// Rotates about the polar axis so that `g(θ, φ) = ω(θ, φ + φ₀)` takes the
/// requested form. The shell-1 part is rotated along.
pub fn reduce_azimuthal(s: &ShellState, target: AzimuthalTarget) -> Result<Reduced> {
    let [cm2, cm1, _, c1, c2] = s.c2;
    let scale = s.shell2_norm().max(f64::MIN_POSITIVE);
    let zero = |a: f64, b: f64| a.hypot(b) <= 1e-15 * scale;
    let (phi0, degenerate) = match target {
        AzimuthalTarget::Rep1 => {
            if zero(cm1, c1) {
                (0.0, true)
            } else {
                (cm1.atan2(c1), false)
            }
        }
        AzimuthalTarget::Rep2 | AzimuthalTarget::Zonal => {
            if zero(cm2, c2) {
                (0.0, true)
            } else {
                (0.5 * cm2.atan2(c2), false)
            }
        }
    };
    let mut state = rotate_state(s, &rotation_about_e3(phi0))?;
    let mut degenerate = degenerate;
    // exact zeros for the eliminated coefficient
    match target {
        AzimuthalTarget::Rep1 => {
            state.c2[1] = 0.0;
            state.rep = ShellRep::Rep1;
        }
        AzimuthalTarget::Rep2 | AzimuthalTarget::Zonal => {
            state.c2[0] = 0.0;
            state.rep = ShellRep::Rep2;
        }
    }
    let zonal = if target == AzimuthalTarget::Zonal {
        state.rep = ShellRep::Zonal;
        let [_, cm1, c0, c1, c2] = state.c2;
        let b = cm1.hypot(c1);
        let alpha = if zero(cm1, c1) {
            degenerate = true;
            0.0
        } else {
            (-cm1).atan2(c1)
        };
        Some(ZonalParams { a: c0, b, d: c2, alpha })
    } else {
        None
    };
    Ok(Reduced { state, phi0, degenerate, zonal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::SpectralField;
    use crate::polysphere::{Param, Representation};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_random(rng: &mut ChaCha8Rng) -> [f64; 5] {
        let v: [f64; 5] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.map(|x| x / n)
    }

    #[test]
    fn zonal_input_is_already_canonical() {
        let f = canonical_zonal_form(&[0.0, 0.0, 1.0, 0.0, 0.0]);
        assert!((f.a.abs() - 1.0).abs() < 1e-14);
        assert!(f.b.abs() < 1e-14);
        let f = canonical_zonal_form(&[0.0, 0.0, -1.0, 0.0, 0.0]);
        assert!((f.a + 1.0).abs() < 1e-14);
    }

    #[test]
    fn sectoral_input() {
        // eigenvalues k(1, −1, 0): tie between ±k resolved towards +k
        let f = canonical_zonal_form(&[0.0, 0.0, 0.0, 0.0, 1.0]);
        assert!((f.a - 3f64.sqrt() / 2.0).abs() < 1e-14);
        assert!((f.b - 0.5).abs() < 1e-14);
        let s = ShellState::new(0.0, [0.0, 0.0, 0.0, 0.0, 1.0]);
        let r = rotate_state(&s, &f.rotation).unwrap();
        let expect = [0.0, 0.0, f.a, 0.0, f.b];
        for (x, y) in r.c2.iter().zip(expect) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn random_canonical_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let c2 = unit_random(&mut rng);
            let f = canonical_zonal_form(&c2);
            assert!((f.a * f.a + f.b * f.b - 1.0).abs() < 1e-12);
            assert!(f.a * f.a >= 3.0 / 7.0 - 1e-12);
            let l = f.eigenvalues;
            assert!(l[0].abs() <= l[2].abs() && l[1].abs() <= l[2].abs());
            assert!(l[0] >= l[1]);
            assert!((l.iter().sum::<f64>()).abs() < 1e-12);
            assert!((f.rotation.determinant() - 1.0).abs() < 1e-12);
            let r = rotate_state(&ShellState::new(0.0, c2), &f.rotation).unwrap();
            let expect = [0.0, 0.0, f.a, 0.0, f.b];
            for (x, y) in r.c2.iter().zip(expect) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rep2_moves_sin_sector_onto_cos_sector() {
        let s = ShellState::new(0.5, [1.0, 0.0, 0.0, 0.0, 0.0]);
        let r = reduce_azimuthal(&s, AzimuthalTarget::Rep2).unwrap();
        assert!((r.phi0 - PI / 4.0).abs() < 1e-15);
        assert!((r.state.c2[4] - 1.0).abs() < 1e-14);
        assert_eq!(r.state.c2[0], 0.0);
        assert!(!r.degenerate);
    }

    #[test]
    fn zonal_state_is_degenerate() {
        let s = ShellState::new(1.0, [0.0, 0.0, 1.0, 0.0, 0.0]);
        for t in [AzimuthalTarget::Rep1, AzimuthalTarget::Rep2, AzimuthalTarget::Zonal] {
            let r = reduce_azimuthal(&s, t).unwrap();
            assert!(r.degenerate);
            assert_eq!(r.phi0, 0.0);
            assert_eq!(r.state.c2, s.c2);
        }
    }

    #[test]
    fn reductions_preserve_norm_and_match_representations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s = ShellState::new(0.8, unit_random(&mut rng));
            for t in [AzimuthalTarget::Rep1, AzimuthalTarget::Rep2, AzimuthalTarget::Zonal] {
                let r = reduce_azimuthal(&s, t).unwrap();
                assert!((r.state.shell2_norm() - 1.0).abs() < 1e-12);
                assert!((r.state.omega_rot() - 0.8).abs() < 1e-15);
                let direct = rotate_state(&s, &rotation_about_e3(r.phi0)).unwrap();
                for (x, y) in direct.c2.iter().zip(&r.state.c2) {
                    assert!((x - y).abs() < 1e-12);
                }
                match t {
                    AzimuthalTarget::Rep1 => assert!(r.state.c2[3] >= 0.0),
                    AzimuthalTarget::Rep2 => assert!(r.state.c2[4] >= 0.0),
                    AzimuthalTarget::Zonal => {
                        let z = r.zonal.unwrap();
                        let rep = Representation::Zonal { alpha: z.alpha };
                        let mut pt = [0.0; 5];
                        pt[Param::Omega.index()] = 0.8;
                        pt[Param::A.index()] = z.a;
                        pt[Param::B.index()] = z.b;
                        pt[Param::D.index()] = z.d;
                        let f = rep.to_field(&pt, 2);
                        let g: SpectralField = r.state.to_field(2);
                        assert!((&f - &g).l2_norm() < 1e-12);
                    }
                }
            }
        }
    }
}
