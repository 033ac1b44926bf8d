use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{invalid, Result};
use crate::harmonics::ShellSelector;
use crate::polysphere::{casimir_values, ParamPoint, Representation};

/// Bounds of `‖P_{≥3}ω_t‖²/‖P_{≥3}ω₀‖²` along a trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZPrimeReport {
    pub samples: usize,
    /// `‖P_{≥3}ω₀‖₂²`
    pub initial: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// All ratios in `[1/2, 2]`; vacuous when `P_{≥3}ω₀ = 0`.
    pub passes: bool,
    pub vacuous: bool,
    /// `max_t ‖P_{≥3}ω_t‖₂`
    pub max_norm: f64,
    /// `max_t ‖P_{≥3}ω_t‖₂ ≤ √2 ε` for the supplied `ε`.
    pub within_sqrt2_eps: Option<bool>,
}

/// Relative slack for rounding when the bound is attained.
const ZPRIME_SLACK: f64 = 1e-12;

/// Checks `½‖P_{≥3}ω₀‖² ≤ ‖P_{≥3}ω_t‖² ≤ 2‖P_{≥3}ω₀‖²` at every sample and,
/// given `eps ≥ ‖P_{≥3}ω₀‖₂`, the corollary `‖P_{≥3}ω_t‖₂ ≤ √2 ε`.
pub fn zprime_check(traj: &Trajectory, eps: Option<f64>) -> Result<ZPrimeReport> {
    if traj.is_empty() {
        return invalid("empty trajectory");
    }
    let values: Vec<f64> = if traj.diagnostics.len() == traj.len() {
        traj.diagnostics.iter().map(|d| d.p_geq3_enstrophy).collect()
    } else {
        traj.states.iter().map(|s| s.project(ShellSelector::AtLeast(3)).l2_norm().powi(2)).collect()
    };
    let initial = values[0];
    let max_norm = values.iter().cloned().fold(0.0, f64::max).sqrt();
    let within = eps.map(|e| max_norm <= 2f64.sqrt() * e * (1.0 + ZPRIME_SLACK));
    if initial == 0.0 {
        let all_zero = values.iter().all(|&v| v == 0.0);
        return Ok(ZPrimeReport {
            samples: values.len(),
            initial,
            min_ratio: f64::NAN,
            max_ratio: f64::NAN,
            passes: true,
            vacuous: all_zero,
            max_norm,
            within_sqrt2_eps: within,
        });
    }
    let ratios: Vec<f64> = values.iter().map(|v| v / initial).collect();
    let min_ratio = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(ZPrimeReport {
        samples: values.len(),
        initial,
        min_ratio,
        max_ratio,
        passes: min_ratio >= 0.5 * (1.0 - ZPRIME_SLACK) && max_ratio <= 2.0 * (1.0 + ZPRIME_SLACK),
        vacuous: false,
        max_norm,
        within_sqrt2_eps: within,
    })
}

/// Least-squares line `log d = slope · log ε + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    /// Natural logarithm of the prefactor.
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

pub fn fit_exponent(eps: &[f64], dist: &[f64]) -> Result<ExponentFit> {
    if eps.len() != dist.len() {
        return invalid("eps and distance lists differ in length");
    }
    if eps.len() < 3 {
        return invalid("exponent fit needs at least three points");
    }
    if eps.iter().chain(dist).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return invalid("exponent fit needs positive finite data");
    }
    let x: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let y: Vec<f64> = dist.iter().map(|d| d.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return invalid("exponent fit needs distinct eps values");
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual =
        (x.iter().zip(&y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum::<f64>() / n).sqrt();
    Ok(ExponentFit { slope, intercept, residual })
}

/// Parameter point of `Ωx₃ + sin β Y₂₀ + cos β sin γ Y₂₁(θ, φ+α) +
/// cos β cos γ Y₂₂` in the zonal representation with angle `α`.
pub fn rmk_state_point(omega: f64, beta: f64, gamma: f64) -> ParamPoint {
    let (sb, cb) = beta.sin_cos();
    let (sg, cg) = gamma.sin_cos();
    [omega, sb, cb * sg, 0.0, cb * cg]
}

/// Finite-difference step of [`alpha_column_check`].
pub const ALPHA_FD_STEP: f64 = 1e-6;

/// `|∂_α (C_k)_{k∈ks}|` at `(α, β, γ)` by central differences with step
/// `10⁻⁶`; the Casimirs themselves are exact.
pub fn alpha_column_check(omega: f64, beta: f64, gamma: f64, alpha: f64, ks: &[usize]) -> Result<f64> {
    if ks.is_empty() {
        return invalid("no Casimir orders given");
    }
    let point = rmk_state_point(omega, beta, gamma);
    let values = |a: f64| casimir_values(&Representation::Zonal { alpha: a }.to_field(&point, 2), ks);
    let plus = values(alpha + ALPHA_FD_STEP)?;
    let minus = values(alpha - ALPHA_FD_STEP)?;
    Ok(plus
        .iter()
        .zip(&minus)
        .map(|(p, m)| ((p - m) / (2.0 * ALPHA_FD_STEP)).powi(2))
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Diagnostics, Trajectory};
    use crate::harmonics::SpectralField;
    use std::f64::consts::PI;

    #[test]
    fn exact_power_laws() {
        let eps = [1e-3, 3e-3, 1e-2, 3e-2];
        let lin: Vec<f64> = eps.to_vec();
        let f = fit_exponent(&eps, &lin).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12 && f.residual < 1e-12);
        let half: Vec<f64> = eps.iter().map(|e| 3.0 * e.sqrt()).collect();
        let f = fit_exponent(&eps, &half).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(fit_exponent(&eps, &[1.0, 0.0, 1.0, 1.0]).is_err());
        assert!(fit_exponent(&eps[..2], &lin[..2]).is_err());
    }

    #[test]
    fn alpha_column_vanishes_without_y21() {
        for k in [3, 4, 5, 6] {
            assert!(alpha_column_check(0.7, 0.4, 0.0, 0.3, &[k]).unwrap() <= 1e-8);
            assert!(alpha_column_check(0.7, 0.4, PI, 1.3, &[k]).unwrap() <= 1e-8);
        }
        assert!(alpha_column_check(1.0, 0.3, PI / 4.0, 0.4, &[3, 4, 5]).unwrap() > 1e-3);
        // a lone Y₂₁ only rotates
        assert!(alpha_column_check(1.0, 0.0, PI / 2.0, 0.4, &[3, 4, 5]).unwrap() < 1e-6);
    }

    #[test]
    fn zprime_vacuous_and_bounded() {
        let d = Diagnostics::new(4, 3).unwrap();
        let mut t = Trajectory::new();
        let low = SpectralField::single(4, 2, 1);
        t.push(0.0, low.clone(), d.compute(&low).unwrap());
        let r = zprime_check(&t, None).unwrap();
        assert!(r.passes && r.vacuous);

        let mut t = Trajectory::new();
        for (i, s) in [0.1, 0.12, 0.08].iter().enumerate() {
            let mut f = low.clone();
            f.set(3, 0, *s);
            t.push(i as f64, f.clone(), d.compute(&f).unwrap());
        }
        let r = zprime_check(&t, Some(0.1)).unwrap();
        assert!(r.passes);
        assert_eq!(r.within_sqrt2_eps, Some(true));
        assert!((r.max_ratio - 1.44).abs() < 1e-12);

        let mut f = low.clone();
        f.set(4, 0, 0.2);
        t.push(5.0, f.clone(), d.compute(&f).unwrap());
        assert!(!zprime_check(&t, Some(0.1)).unwrap().passes);
        assert!(zprime_check(&Trajectory::new(), None).is_err());
    }
}
