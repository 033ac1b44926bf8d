//! Hand-transcribed closed forms, compared against the exact polynomial
//! engine by the verification suites.
//!
//! Points are `[Ω, A, B, C, D]`. The representations are those of
//! [`Representation`](crate::polysphere::Representation).

use std::f64::consts::PI;

use crate::polysphere::ParamPoint;

fn unpack(p: &ParamPoint) -> (f64, f64, f64, f64, f64) {
    (p[0], p[1], p[2], p[3], p[4])
}

fn s3() -> f64 {
    3f64.sqrt()
}

pub fn rep1_c3(p: &ParamPoint) -> f64 {
    let (o, a, b, c, d) = unpack(p);
    (10.0 * a.powi(3)
        + 15.0 * s3() * b * b * d
        + a * (15.0 * b * b - 30.0 * c * c - 30.0 * d * d + 56.0 * o * o * PI))
        / (14.0 * (5.0 * PI).sqrt())
}

/// `C₄` with the `Ω⁴` term as transcribed, `4Ω⁴π`.
pub fn rep1_c4_as_transcribed(p: &ParamPoint) -> f64 {
    let (o, a, b, c, d) = unpack(p);
    let s = a * a + b * b + c * c + d * d;
    2.0 / 7.0 * (11.0 * a * a + 3.0 * (3.0 * b * b + c * c + d * d)) * o * o
        + 15.0 * s * s / (28.0 * PI)
        + 4.0 * o.powi(4) * PI
}

/// `C₄` with the `Ω⁴` term `4πΩ⁴/5`.
pub fn rep1_c4(p: &ParamPoint) -> f64 {
    let (o, ..) = unpack(p);
    rep1_c4_as_transcribed(p) - 4.0 * o.powi(4) * PI + 0.8 * o.powi(4) * PI
}

pub fn rep1_c5(p: &ParamPoint) -> f64 {
    let (o, a, b, c, d) = unpack(p);
    let s = a * a + b * b + c * c + d * d;
    5f64.sqrt()
        * (75.0 * s * (2.0 * a.powi(3) + 3.0 * s3() * b * b * d + 3.0 * a * (b * b - 2.0 * (c * c + d * d)))
            + 220.0 * (8.0 * a.powi(3) + 3.0 * b * b * (3.0 * a + s3() * d)) * o * o * PI
            + 1056.0 * a * o.powi(4) * PI * PI)
        / (924.0 * PI.powf(1.5))
}

pub fn rep2_c3(p: &ParamPoint) -> f64 {
    let (o, a, b, c, d) = unpack(p);
    (10.0 * a.powi(3)
        + 15.0 * s3() * (b - c) * (b + c) * d
        + 15.0 * a * (b * b + c * c - 2.0 * d * d)
        + 56.0 * a * o * o * PI)
        / (14.0 * (5.0 * PI).sqrt())
}

pub fn rep2_c4(p: &ParamPoint) -> f64 {
    let (o, a, b, c, d) = unpack(p);
    let s = a * a + b * b + c * c + d * d;
    2.0 / 7.0 * (11.0 * a * a + 9.0 * (b * b + c * c) + 3.0 * d * d) * o * o
        + 15.0 * s * s / (28.0 * PI)
        + 4.0 * o.powi(4) * PI / 5.0
}

pub fn rep2_c5(p: &ParamPoint) -> f64 {
    let (o, a, b, c, d) = unpack(p);
    let s = a * a + b * b + c * c + d * d;
    let bc = (b - c) * (b + c);
    5f64.sqrt()
        * (75.0 * s * (2.0 * a.powi(3) + 3.0 * s3() * bc * d + 3.0 * a * (b * b + c * c - 2.0 * d * d))
            + 220.0 * (8.0 * a.powi(3) + 9.0 * a * (b * b + c * c) + 3.0 * s3() * bc * d) * o * o * PI
            + 1056.0 * a * o.powi(4) * PI * PI)
        / (924.0 * PI.powf(1.5))
}

/// `C₃` of `Ωx₃ + A Y₂₀ + B Y₂₁(θ, φ+α) + D Y₂₂`; `C` is ignored.
pub fn zonal_c3(p: &ParamPoint, alpha: f64) -> f64 {
    let (o, a, b, _, d) = unpack(p);
    (a * (10.0 * a * a + 15.0 * b * b - 30.0 * d * d + 56.0 * o * o * PI)
        + 15.0 * s3() * b * b * d * (2.0 * alpha).cos())
        / (14.0 * (5.0 * PI).sqrt())
}

pub fn zonal_c4(p: &ParamPoint) -> f64 {
    let (o, a, b, _, d) = unpack(p);
    let s = a * a + b * b + d * d;
    2.0 / 7.0 * (11.0 * a * a + 9.0 * b * b + 3.0 * d * d) * o * o + 15.0 * s * s / (28.0 * PI)
        + 4.0 * o.powi(4) * PI / 5.0
}

/// `∫ (A Y₂₀ + B Y₂₂)³ dS`
pub fn canonical_c3(a: f64, b: f64) -> f64 {
    (5.0 / PI).sqrt() / 7.0 * a * (a * a - 3.0 * b * b)
}

/// The cubic above on `A² + B² = 1`.
pub fn canonical_f(a: f64) -> f64 {
    (5.0 / PI).sqrt() / 7.0 * a * (4.0 * a * a - 3.0)
}

pub fn canonical_f_prime(a: f64) -> f64 {
    3.0 / 7.0 * (5.0 / PI).sqrt() * (4.0 * a * a - 1.0)
}

/// `det ∇_{A,B,D} G` for `{C₃, C₄, C₅}` in representation 1 with `C`
/// eliminated.
pub fn det_rep1_c345(p: &ParamPoint) -> f64 {
    let (o, _, b, _, _) = unpack(p);
    480.0 * s3() * b.powi(3) * o.powi(4) * (44.0 * PI * o * o - 15.0) / (3773.0 * PI)
}

/// `Ω²` at which [`det_rep1_c345`] vanishes for every `B`.
pub fn critical_omega_sq() -> f64 {
    15.0 / (44.0 * PI)
}

/// `Ω²` at which the `{C₃, C₄, C₅}` fold condition of representation 2
/// degenerates.
pub fn critical_omega_sq_degenerate() -> f64 {
    15.0 / (176.0 * PI)
}

/// Transcribed determinants for `{C₃, C₄, k}`, `k ∈ {6, 7, 8, 9}`, at
/// `Ω² = 15/(44π)`, as functions of `(A, B, D)`.
pub fn det_alternative(k: usize, a: f64, b: f64, d: f64) -> Option<f64> {
    let r3 = s3();
    let v = match k {
        7 => {
            3375.0 * r3 * b.powi(3) / (1_695_694.0 * PI.powi(4))
                * (-18450.0 / 121.0 + 150.0 / 11.0 * (9.0 + 8.0 * a * a + 6.0 * b * b))
        }
        6 => {
            -16875.0 * 5f64.sqrt() * b.powi(3) / (5_934_929.0 * PI.powf(3.5))
                * (72.0 * r3 * a.powi(3) + r3 * a * (-984.0 / 11.0 + 81.0 * b * b) + 81.0 * b * b * d)
        }
        8 => {
            3375.0 * 5f64.sqrt() * b.powi(3) / (14_413_399.0 * PI.powf(4.5))
                * (-22800.0 / 11.0 * r3 * a.powi(3) + r3 * a * (32400.0 / 11.0 - 25650.0 / 11.0 * b * b)
                    - 25650.0 / 11.0 * b * b * d)
        }
        9 => {
            let b2 = b * b;
            10125.0 * b.powi(3) / (1_095_418_324.0 * PI.powi(5))
                * (-144000.0 * r3 * a.powi(6) - 800.0 * r3 * a.powi(4) * (-3540.0 / 11.0 + 405.0 * b2)
                    - 30.0 * r3 * a * a * (36000.0 / 121.0 - 106200.0 / 11.0 * b2 + 6075.0 * b2 * b2)
                    - 324000.0 * a.powi(3) * b2 * d
                    - 900.0 * a * b2 * (-3540.0 / 11.0 + 405.0 * b2) * d
                    + 3.0 * r3 * (-8_424_000.0 / 1331.0 + 2_394_000.0 / 121.0 * b2 - 20250.0 * b2 * b2 * d * d))
        }
        _ => return None,
    };
    Some(v)
}
