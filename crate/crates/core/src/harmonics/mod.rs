//! Real spherical harmonics on S², shell projectors and norms.
//!
//! A vorticity field is stored as its coefficients `c_{l,m}` against the
//! orthonormal real basis `Y_{l,m}` with `1 ≤ l ≤ lmax`, `-l ≤ m ≤ l`. The
//! `l = 0` mode is absent by construction, since vorticity on the sphere
//! integrates to zero.

mod grid;
mod io;
pub mod legendre;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub use grid::{Grid, GridField};
pub use legendre::real_harmonic;

/// Number of stored coefficients for a given degree cutoff.
#[inline]
pub fn num_coeffs(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 1) - 1
}

/// Flat index of `(l, m)` in the coefficient vector.
#[inline]
pub fn coeff_index(l: usize, m: i64) -> usize {
    debug_assert!(l >= 1 && m.unsigned_abs() as usize <= l);
    (l * l - 1) + (m + l as i64) as usize
}

/// Coefficients of a zero-mean real field on S², indexed by `(l, m)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    lmax: usize,
    coeffs: Vec<f64>,
}

impl SpectralField {
    pub fn zeros(lmax: usize) -> Self {
        Self { lmax, coeffs: vec![0.0; num_coeffs(lmax)] }
    }

    pub fn from_coeffs(lmax: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != num_coeffs(lmax) {
            return invalid(format!(
                "expected {} coefficients for lmax={lmax}, got {}",
                num_coeffs(lmax),
                coeffs.len()
            ));
        }
        Ok(Self { lmax, coeffs })
    }

    /// A field with a single unit coefficient.
    pub fn single(lmax: usize, l: usize, m: i64) -> Self {
        let mut f = Self::zeros(lmax);
        f.set(l, m, 1.0);
        f
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    /// Coefficient `c_{l,m}`; zero outside the stored band (including `l = 0`).
    pub fn get(&self, l: usize, m: i64) -> f64 {
        if l == 0 || l > self.lmax || m.unsigned_abs() as usize > l {
            return 0.0;
        }
        self.coeffs[coeff_index(l, m)]
    }

    /// Sets `c_{l,m}`. Panics if `(l, m)` is outside the band or `l = 0`.
    pub fn set(&mut self, l: usize, m: i64, value: f64) {
        assert!(l >= 1 && l <= self.lmax, "degree {l} outside 1..={}", self.lmax);
        assert!(m.unsigned_abs() as usize <= l, "order {m} outside -{l}..={l}");
        self.coeffs[coeff_index(l, m)] = value;
    }

    /// Iterates `(l, m, c_{l,m})` in `(l, m)` order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, f64)> + '_ {
        (1..=self.lmax).flat_map(move |l| {
            (-(l as i64)..=l as i64).map(move |m| (l, m, self.coeffs[coeff_index(l, m)]))
        })
    }

    /// Coefficients of shell `l` as `[c_{l,-l}, …, c_{l,l}]`.
    pub fn shell(&self, l: usize) -> Vec<f64> {
        (-(l as i64)..=l as i64).map(|m| self.get(l, m)).collect()
    }

    pub fn set_shell(&mut self, l: usize, values: &[f64]) {
        assert_eq!(values.len(), 2 * l + 1);
        for (i, v) in values.iter().enumerate() {
            self.set(l, i as i64 - l as i64, *v);
        }
    }

    /// Zero-padded or truncated copy with a new cutoff.
    pub fn with_lmax(&self, lmax: usize) -> Self {
        let mut out = Self::zeros(lmax);
        let n = num_coeffs(lmax.min(self.lmax));
        out.coeffs[..n].copy_from_slice(&self.coeffs[..n]);
        out
    }

    pub fn dot(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().min(other.coeffs.len());
        self.coeffs[..n].iter().zip(&other.coeffs[..n]).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { lmax: self.lmax, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// `self += s * other` over the common band.
    pub fn axpy(&mut self, s: f64, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    /// Multiplies each coefficient by `-l(l+1)`.
    pub fn laplacian(&self) -> Self {
        self.map_degree(|l| -((l * (l + 1)) as f64))
    }

    /// Stream function `ψ = Δ⁻¹ω`: divides each coefficient by `-l(l+1)`.
    pub fn inverse_laplacian(&self) -> Self {
        self.map_degree(|l| -1.0 / ((l * (l + 1)) as f64))
    }

    fn map_degree(&self, factor: impl Fn(usize) -> f64) -> Self {
        let mut out = self.clone();
        for l in 1..=self.lmax {
            let f = factor(l);
            let start = coeff_index(l, -(l as i64));
            for c in &mut out.coeffs[start..start + 2 * l + 1] {
                *c *= f;
            }
        }
        out
    }

    /// Keeps only the shells selected by `which`.
    pub fn project(&self, which: ShellSelector) -> Self {
        let mut out = self.clone();
        for l in 1..=self.lmax {
            if !which.contains(l) {
                let start = coeff_index(l, -(l as i64));
                out.coeffs[start..start + 2 * l + 1].fill(0.0);
            }
        }
        out
    }

    /// `‖f‖₂`, by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `‖f‖_{H⁻¹} = sqrt(Σ c² / (l(l+1)))`.
    pub fn hminus1_norm(&self) -> f64 {
        self.iter()
            .map(|(l, _, c)| c * c / ((l * (l + 1)) as f64))
            .sum::<f64>()
            .sqrt()
    }

    /// Kinetic energy `½‖ω‖²_{H⁻¹}`.
    pub fn energy(&self) -> f64 {
        0.5 * self.hminus1_norm().powi(2)
    }

    /// Point evaluation `Σ c_{l,m} Y_{l,m}(θ, φ)`.
    pub fn evaluate(&self, theta: f64, phi: f64) -> f64 {
        let mu = theta.cos();
        let mut v = 0.0;
        for m in 0..=self.lmax {
            let col = legendre::alf_column(m, mu, self.lmax);
            let (cm, sm) = ((m as f64 * phi).cos(), (m as f64 * phi).sin());
            for l in m.max(1)..=self.lmax {
                let lam = col[l - m];
                if m == 0 {
                    v += self.get(l, 0) * lam;
                } else {
                    let s2 = std::f64::consts::SQRT_2 * lam;
                    v += s2 * (self.get(l, m as i64) * cm + self.get(l, -(m as i64)) * sm);
                }
            }
        }
        v
    }

    /// The field rotated eastward about the polar axis: `g(θ, φ) = f(θ, φ - angle)`.
    pub fn rotate_azimuth(&self, angle: f64) -> Self {
        let mut out = self.clone();
        for l in 1..=self.lmax {
            for m in 1..=l as i64 {
                let (c, s) = ((m as f64 * angle).cos(), (m as f64 * angle).sin());
                let (cp, cn) = (self.get(l, m), self.get(l, -m));
                out.set(l, m, cp * c - cn * s);
                out.set(l, -m, cp * s + cn * c);
            }
        }
        out
    }

    /// Pure φ-derivative `∂f/∂φ`, which stays in the same band.
    pub fn d_phi(&self) -> Self {
        let mut out = Self::zeros(self.lmax);
        for l in 1..=self.lmax {
            for m in 1..=l as i64 {
                let mf = m as f64;
                out.set(l, m, mf * self.get(l, -m));
                out.set(l, -m, -mf * self.get(l, m));
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }
}

fn check_same_band(a: &SpectralField, b: &SpectralField) {
    assert_eq!(a.lmax, b.lmax, "spectral fields with different cutoffs");
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        check_same_band(self, rhs);
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        check_same_band(self, rhs);
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scaled(-1.0)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scaled(rhs)
    }
}

/// Selects a set of shells `𝓗^l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShellSelector {
    /// `P_n`
    Only(usize),
    /// `P_{≤n}`
    AtMost(usize),
    /// `P_{≥n}`
    AtLeast(usize),
    /// `P_{≠n}`
    Except(usize),
    /// Shells `lo..=hi`.
    Range(usize, usize),
}

impl ShellSelector {
    pub fn contains(&self, l: usize) -> bool {
        match *self {
            ShellSelector::Only(n) => l == n,
            ShellSelector::AtMost(n) => l <= n,
            ShellSelector::AtLeast(n) => l >= n,
            ShellSelector::Except(n) => l != n,
            ShellSelector::Range(lo, hi) => lo <= l && l <= hi,
        }
    }

    /// True if no shell in `1..=lmax` is selected.
    pub fn is_empty_within(&self, lmax: usize) -> bool {
        !(1..=lmax).any(|l| self.contains(l))
    }
}

impl fmt::Display for ShellSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ShellSelector::Only(n) => write!(f, "={n}"),
            ShellSelector::AtMost(n) => write!(f, "<={n}"),
            ShellSelector::AtLeast(n) => write!(f, ">={n}"),
            ShellSelector::Except(n) => write!(f, "!={n}"),
            ShellSelector::Range(lo, hi) => write!(f, "{lo}-{hi}"),
        }
    }
}

impl FromStr for ShellSelector {
    type Err = Error;

    /// Accepts `=n`, `n`, `<=n`, `>=n`, `!=n` and `lo-hi`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad shell selector '{s}'")))
        };
        if let Some(rest) = s.strip_prefix("<=") {
            Ok(ShellSelector::AtMost(num(rest)?))
        } else if let Some(rest) = s.strip_prefix(">=") {
            Ok(ShellSelector::AtLeast(num(rest)?))
        } else if let Some(rest) = s.strip_prefix("!=") {
            Ok(ShellSelector::Except(num(rest)?))
        } else if let Some(rest) = s.strip_prefix('=') {
            Ok(ShellSelector::Only(num(rest)?))
        } else if let Some((lo, hi)) = s.split_once('-') {
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(Error::Parse(format!("empty shell range '{s}'")));
            }
            Ok(ShellSelector::Range(lo, hi))
        } else {
            Ok(ShellSelector::Only(num(s)?))
        }
    }
}
