//! Low-shell states as sphere polynomials and their polynomial Casimirs.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::{Param, ParamPoint, ParamPoly, SpherePoly};
use crate::error::{invalid, Error, Result};
use crate::harmonics::SpectralField;

/// How the second-shell coefficients of `Ωx₃ + …` are parametrized by
/// `(A, B, C, D)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Representation {
    /// `Ωx₃ + A Y₂₀ + B Y₂₁ + C Y₂,₋₂ + D Y₂₂` (no `Y₂,₋₁` component).
    Rep1,
    /// `Ωx₃ + A Y₂₀ + B Y₂₁ + C Y₂,₋₁ + D Y₂₂` (no `Y₂,₋₂` component).
    Rep2,
    /// `Ωx₃ + A Y₂₀ + B Y₂₁(θ, φ+α) + D Y₂₂`, i.e.
    /// `B (cos α Y₂₁ − sin α Y₂,₋₁)`; `C` is unused.
    Zonal { alpha: f64 },
    /// `Ωx₃ + A Y₂₀ + B Y₂₂`.
    Canonical,
}

impl Representation {
    /// Second-shell parameters that enter the state.
    pub fn shell_params(&self) -> &'static [Param] {
        match self {
            Representation::Rep1 | Representation::Rep2 => &[Param::A, Param::B, Param::C, Param::D],
            Representation::Zonal { .. } => &[Param::A, Param::B, Param::D],
            Representation::Canonical => &[Param::A, Param::B],
        }
    }

    /// Shell-2 coefficients `[c₂,₋₂, c₂,₋₁, c₂₀, c₂₁, c₂₂]` as polynomials.
    fn shell2_polys(&self) -> [ParamPoly; 5] {
        let v = ParamPoly::var;
        let z = ParamPoly::zero;
        match *self {
            Representation::Rep1 => [v(Param::C), z(), v(Param::A), v(Param::B), v(Param::D)],
            Representation::Rep2 => [z(), v(Param::C), v(Param::A), v(Param::B), v(Param::D)],
            Representation::Zonal { alpha } => [
                z(),
                v(Param::B).scaled(-alpha.sin()),
                v(Param::A),
                v(Param::B).scaled(alpha.cos()),
                v(Param::D),
            ],
            Representation::Canonical => [z(), z(), v(Param::A), z(), v(Param::B)],
        }
    }

    /// Numeric shell-2 coefficients `[c₂,₋₂, …, c₂₂]` at `point`.
    pub fn shell2_coeffs(&self, point: &ParamPoint) -> [f64; 5] {
        let polys = self.shell2_polys();
        std::array::from_fn(|i| polys[i].eval(point))
    }

    /// The spectral field `Ω x₃ + Σ c₂,ₘ Y₂,ₘ` at `point`.
    pub fn to_field(&self, point: &ParamPoint, lmax: usize) -> SpectralField {
        let mut f = SpectralField::zeros(lmax.max(2));
        f.set(1, 0, point[Param::Omega.index()] * (4.0 * PI / 3.0).sqrt());
        f.set_shell(2, &self.shell2_coeffs(point));
        f
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::Rep1 => f.write_str("rep1"),
            Representation::Rep2 => f.write_str("rep2"),
            Representation::Zonal { alpha } => write!(f, "zonal:{alpha}"),
            Representation::Canonical => f.write_str("canonical"),
        }
    }
}

impl FromStr for Representation {
    type Err = Error;

    /// `rep1`, `rep2`, `canonical`, `zonal` or `zonal:<alpha>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "rep1" => Ok(Representation::Rep1),
            "rep2" => Ok(Representation::Rep2),
            "canonical" => Ok(Representation::Canonical),
            "zonal" => Ok(Representation::Zonal { alpha: 0.0 }),
            _ => match s.strip_prefix("zonal:") {
                Some(a) => a
                    .parse()
                    .map(|alpha| Representation::Zonal { alpha })
                    .map_err(|_| Error::InvalidArgument(format!("bad zonal angle in '{s}'"))),
                None => Err(Error::InvalidArgument(format!("unknown representation '{s}'"))),
            },
        }
    }
}

/// `Σ c₁,ₘ Y₁,ₘ + Σ c₂,ₘ Y₂,ₘ` written in `x`. Shell 1 is `[c₁,₋₁, c₁₀, c₁₁]`.
fn shells_to_spherepoly(c1: &[ParamPoly; 3], c2: &[ParamPoly; 5]) -> SpherePoly {
    let s3 = (3.0 / (4.0 * PI)).sqrt();
    let s5 = (5.0 / (16.0 * PI)).sqrt();
    let k = (15.0 / (16.0 * PI)).sqrt();
    let mono = |e: [u8; 3], c: &ParamPoly, w: f64| SpherePoly::monomial(e, c.scaled(w));
    let terms = [
        mono([0, 1, 0], &c1[0], s3),
        mono([0, 0, 1], &c1[1], s3),
        mono([1, 0, 0], &c1[2], s3),
        // Y₂,₋₂ = 2k x₁x₂
        mono([1, 1, 0], &c2[0], 2.0 * k),
        // Y₂,₋₁ = 2k x₂x₃
        mono([0, 1, 1], &c2[1], 2.0 * k),
        // Y₂₀ = s5 (3x₃² − 1)
        mono([0, 0, 2], &c2[2], 3.0 * s5),
        mono([0, 0, 0], &c2[2], -s5),
        // Y₂₁ = 2k x₁x₃
        mono([1, 0, 1], &c2[3], 2.0 * k),
        // Y₂₂ = k (x₁² − x₂²)
        mono([2, 0, 0], &c2[4], k),
        mono([0, 2, 0], &c2[4], -k),
    ];
    terms.iter().fold(SpherePoly::zero(), |acc, t| &acc + t)
}

/// The state `Ωx₃ + …` of `rep` as a polynomial in `x` with parameter
/// coefficients.
pub fn state_to_spherepoly(rep: Representation) -> SpherePoly {
    let s3 = (3.0 / (4.0 * PI)).sqrt();
    // Ω x₃ = Ω √(4π/3) Y₁₀
    let c1 = [ParamPoly::zero(), ParamPoly::var(Param::Omega).scaled(1.0 / s3), ParamPoly::zero()];
    shells_to_spherepoly(&c1, &rep.shell2_polys())
}

/// Numeric sphere polynomial of a field supported on shells 1 and 2.
pub fn low_shell_spherepoly(f: &SpectralField) -> Result<SpherePoly> {
    if f.iter().any(|(l, _, c)| l > 2 && c != 0.0) {
        return invalid("field has content above shell 2");
    }
    let c = |l: usize, m: i64| ParamPoly::constant(f.get(l, m));
    let c1 = [c(1, -1), c(1, 0), c(1, 1)];
    let c2 = [c(2, -2), c(2, -1), c(2, 0), c(2, 1), c(2, 2)];
    Ok(shells_to_spherepoly(&c1, &c2))
}

/// `C_k = ∫_{S²} ω^k dS` for the state of `rep`, as a polynomial in
/// `(Ω, A, B, C, D)`.
pub fn casimir_closed_form(k: usize, rep: Representation) -> Result<ParamPoly> {
    if !(1..=9).contains(&k) {
        return invalid(format!("Casimir order {k} outside 1..=9"));
    }
    Ok(state_to_spherepoly(rep).pow(k)?.integrate())
}

/// Exact `C_k` of a field supported on shells 1 and 2, for each `k` in `ks`.
pub fn casimir_values(f: &SpectralField, ks: &[usize]) -> Result<Vec<f64>> {
    let p = low_shell_spherepoly(f)?;
    let origin = [0.0; 5];
    let mut out = Vec::with_capacity(ks.len());
    for &k in ks {
        if !(1..=9).contains(&k) {
            return invalid(format!("Casimir order {k} outside 1..=9"));
        }
        out.push(p.pow(k)?.integrate().eval(&origin));
    }
    Ok(out)
}

/// The Casimir map `(C_k)_{k ∈ ks}` of `rep` with `eliminated²` replaced by
/// `1 − Σ (other shell-2 parameters)²`.
pub fn normalized_map(ks: &[usize], rep: Representation, eliminated: Param) -> Result<Vec<ParamPoly>> {
    let params = rep.shell_params();
    if !params.contains(&eliminated) {
        return invalid(format!("{eliminated} is not a parameter of {rep}"));
    }
    let mut replacement = ParamPoly::constant(1.0);
    for &p in params.iter().filter(|&&p| p != eliminated) {
        replacement = &replacement - &ParamPoly::var(p).pow(2)?;
    }
    ks.iter()
        .map(|&k| casimir_closed_form(k, rep)?.substitute_square(eliminated, &replacement))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(omega: f64, a: f64, b: f64, c: f64, d: f64) -> ParamPoint {
        [omega, a, b, c, d]
    }

    #[test]
    fn rep2_with_zero_shell2_is_omega_x3() {
        let p = state_to_spherepoly(Representation::Rep2);
        let q = p.terms().filter(|(_, c)| c.eval(&at(1.0, 0.0, 0.0, 0.0, 0.0)) != 0.0).count();
        assert_eq!(q, 1);
        assert!((p.coeff([0, 0, 1]).eval(&at(1.0, 0.0, 0.0, 0.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn displayed_coefficients() {
        let k = (15.0 / (16.0 * PI)).sqrt();
        let s5 = (5.0 / (16.0 * PI)).sqrt();
        let rep1 = state_to_spherepoly(Representation::Rep1);
        assert_eq!(rep1.coeff([1, 1, 0]), ParamPoly::var(Param::C).scaled(2.0 * k));
        let rep2 = state_to_spherepoly(Representation::Rep2);
        assert_eq!(rep2.coeff([0, 0, 2]), ParamPoly::var(Param::A).scaled(3.0 * s5));
        assert_eq!(rep2.coeff([0, 0, 0]), ParamPoly::var(Param::A).scaled(-s5));
    }

    #[test]
    fn sphere_poly_matches_pointwise_field() {
        let pt = at(0.7, 0.3, -0.4, 0.5, 0.2);
        for rep in [
            Representation::Rep1,
            Representation::Rep2,
            Representation::Zonal { alpha: 0.9 },
            Representation::Canonical,
        ] {
            let p = state_to_spherepoly(rep);
            let f = rep.to_field(&pt, 2);
            for (t, ph) in [(0.3_f64, 1.0_f64), (1.2, -2.0), (2.8, 0.4)] {
                let x = [t.sin() * ph.cos(), t.sin() * ph.sin(), t.cos()];
                assert!((p.eval(x, &pt) - f.evaluate(t, ph)).abs() < 1e-13, "{rep}");
            }
        }
    }

    #[test]
    fn c3_of_y20() {
        let c3 = casimir_closed_form(3, Representation::Rep1).unwrap();
        let expect = (5.0 / PI).sqrt() / 7.0;
        assert!((c3.eval(&at(0.0, 1.0, 0.0, 0.0, 0.0)) - expect).abs() < 1e-14);
        assert!((expect - 10.0 / (14.0 * (5.0 * PI).sqrt())).abs() < 1e-15);
    }

    #[test]
    fn c3_canonical_closed_form() {
        let c3 = casimir_closed_form(3, Representation::Canonical).unwrap();
        for (a, b) in [(0.8, 0.6), (-0.3, 0.1), (1.5, -2.0)] {
            let expect = (5.0 / PI).sqrt() / 7.0 * a * (a * a - 3.0 * b * b);
            assert!((c3.eval(&at(0.0, a, b, 0.0, 0.0)) - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn c4_pure_rotation_term() {
        let c4 = casimir_closed_form(4, Representation::Rep2).unwrap();
        assert!((c4.coeff([4, 0, 0, 0, 0]) - 4.0 * PI / 5.0).abs() < 1e-14);
    }

    #[test]
    fn c2_is_enstrophy() {
        let pt = at(0.7, 0.3, -0.4, 0.5, 0.2);
        let c2 = casimir_closed_form(2, Representation::Rep1).unwrap().eval(&pt);
        let f = Representation::Rep1.to_field(&pt, 2);
        assert!((c2 - f.l2_norm().powi(2)).abs() < 1e-13);
    }

    #[test]
    fn normalization_parity() {
        let g = normalized_map(&[3, 4, 5], Representation::Rep1, Param::C).unwrap();
        assert!(g.iter().all(|p| p.degree_in(Param::C) == 0));
        assert!(normalized_map(&[3], Representation::Zonal { alpha: 0.2 }, Param::B).is_ok());
        // A enters C₃ with odd powers
        assert!(matches!(
            normalized_map(&[3], Representation::Rep1, Param::A),
            Err(Error::ParityViolation { .. })
        ));
        assert!(normalized_map(&[3], Representation::Zonal { alpha: 0.2 }, Param::C).is_err());
    }

    #[test]
    fn numeric_values_match_closed_form() {
        let pt = at(0.4, -0.2, 0.5, 0.1, 0.6);
        let f = Representation::Rep2.to_field(&pt, 3);
        let vals = casimir_values(&f, &[3, 5, 7]).unwrap();
        for (v, k) in vals.iter().zip([3, 5, 7]) {
            let closed = casimir_closed_form(k, Representation::Rep2).unwrap().eval(&pt);
            assert!((v - closed).abs() < 1e-12 * closed.abs().max(1.0));
        }
        let mut g = f.clone();
        g.set(3, 0, 0.1);
        assert!(casimir_values(&g, &[3]).is_err());
    }

    #[test]
    fn parse_representation() {
        assert_eq!("rep1".parse::<Representation>().unwrap(), Representation::Rep1);
        assert_eq!("zonal:0.5".parse::<Representation>().unwrap(), Representation::Zonal { alpha: 0.5 });
        assert!("rep3".parse::<Representation>().is_err());
    }
}
