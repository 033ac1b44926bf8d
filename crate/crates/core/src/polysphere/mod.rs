//! Exact polynomial algebra on the sphere.
//!
//! A [`SpherePoly`] is a polynomial in the ambient coordinates `(x₁, x₂, x₃)`
//! whose coefficients are [`ParamPoly`]s in the state parameters
//! `(Ω, A, B, C, D)`. Integration over S² is exact monomial by monomial, so
//! Casimirs of low-shell states come out as closed-form polynomials in the
//! parameters. The constraint `|x| = 1` is only used when integrating.
//!
//! Coefficients are `f64`: closed forms carry `√π` and `√3` factors, and
//! comparisons elsewhere use relative tolerances.

mod casimir;
mod matrix;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

pub use casimir::{
    casimir_closed_form, casimir_values, low_shell_spherepoly, normalized_map, state_to_spherepoly,
    Representation,
};
pub use matrix::{determinant, eval_matrix, jacobian, PolyMatrix};

/// Largest total degree accepted by [`ParamPoly::pow`] and [`SpherePoly::pow`].
pub const MAX_DEGREE: usize = 40;

/// A state parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Omega,
    A,
    B,
    C,
    D,
}

impl Param {
    pub const ALL: [Param; 5] = [Param::Omega, Param::A, Param::B, Param::C, Param::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::Omega => "Omega",
            Param::A => "A",
            Param::B => "B",
            Param::C => "C",
            Param::D => "D",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Omega" | "omega" | "Ω" | "W" => Ok(Param::Omega),
            "A" | "a" => Ok(Param::A),
            "B" | "b" => Ok(Param::B),
            "C" | "c" => Ok(Param::C),
            "D" | "d" => Ok(Param::D),
            other => Err(Error::Parse(format!("unknown parameter '{other}'"))),
        }
    }
}

/// Values of `(Ω, A, B, C, D)`, indexed by [`Param::index`].
pub type ParamPoint = [f64; 5];

/// Exponents of `(Ω, A, B, C, D)`.
pub type ParamExps = [u8; 5];

/// Polynomial in `(Ω, A, B, C, D)` with real coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamPoly {
    terms: BTreeMap<ParamExps, f64>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial([0; 5], c)
    }

    pub fn var(p: Param) -> Self {
        let mut e = [0; 5];
        e[p.index()] = 1;
        Self::monomial(e, 1.0)
    }

    pub fn monomial(exps: ParamExps, c: f64) -> Self {
        let mut out = Self::zero();
        out.add_term(exps, c);
        out
    }

    fn add_term(&mut self, exps: ParamExps, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(exps).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamExps, &f64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: ParamExps) -> f64 {
        self.terms.get(&exps).copied().unwrap_or(0.0)
    }

    /// Total degree; `0` for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, p: Param) -> usize {
        self.terms.keys().map(|e| e[p.index()] as usize).max().unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * s);
        }
        out
    }

    /// Drops terms with `|c| ≤ rel · max|c|`.
    pub fn pruned(&self, rel: f64) -> Self {
        let cut = rel * self.max_abs_coeff();
        Self { terms: self.terms.iter().filter(|(_, c)| c.abs() > cut).map(|(e, c)| (*e, *c)).collect() }
    }

    /// `self^k`; fails if the result would exceed [`MAX_DEGREE`].
    pub fn pow(&self, k: usize) -> Result<Self> {
        if self.degree() * k > MAX_DEGREE {
            return invalid(format!("power of degree {} exceeds the limit {MAX_DEGREE}", self.degree() * k));
        }
        let mut out = Self::constant(1.0);
        for _ in 0..k {
            out = &out * self;
        }
        Ok(out)
    }

    /// Formal partial derivative.
    pub fn partial(&self, p: Param) -> Self {
        let i = p.index();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = *e;
                d[i] -= 1;
                out.add_term(d, c * e[i] as f64);
            }
        }
        out
    }

    pub fn eval(&self, point: &ParamPoint) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = *c;
                for (x, &k) in point.iter().zip(e) {
                    if k > 0 {
                        v *= x.powi(k as i32);
                    }
                }
                v
            })
            .sum()
    }

    /// Replaces `p` by the polynomial `value`.
    pub fn substitute(&self, p: Param, value: &ParamPoly) -> Self {
        let i = p.index();
        let mut powers = vec![ParamPoly::constant(1.0)];
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut rest = *e;
            rest[i] = 0;
            out = &out + &(&ParamPoly::monomial(rest, *c) * &powers[k]);
        }
        out
    }

    /// Replaces `p²` by `value`. Every exponent of `p` must be even.
    pub fn substitute_square(&self, p: Param, value: &ParamPoly) -> Result<Self> {
        let i = p.index();
        if let Some(e) = self.terms.keys().find(|e| e[i] % 2 == 1) {
            return Err(Error::ParityViolation { param: p.name(), exponent: e[i] });
        }
        let mut powers = vec![ParamPoly::constant(1.0)];
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let k = (e[i] / 2) as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut rest = *e;
            rest[i] = 0;
            out = &out + &(&ParamPoly::monomial(rest, *c) * &powers[k]);
        }
        Ok(out)
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, *c);
        }
        out
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        self.scaled(-1.0)
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb) {
                    *x = x.checked_add(*y).expect("parameter exponent overflow");
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = ["Omega", "A", "B", "C", "D"];
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                f.write_str(if *c < 0.0 { " - " } else { " + " })?;
            } else if *c < 0.0 {
                f.write_str("-")?;
            }
            write!(f, "{:.15e}", c.abs())?;
            for (name, &k) in names.iter().zip(e) {
                match k {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

/// Exponents of `(x₁, x₂, x₃)`.
pub type SphereExps = [u8; 3];

/// Polynomial in `(x₁, x₂, x₃)` with [`ParamPoly`] coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpherePoly {
    terms: BTreeMap<SphereExps, ParamPoly>,
}

impl SpherePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: ParamPoly) -> Self {
        Self::monomial([0; 3], c)
    }

    /// The coordinate function `x_{i+1}`.
    pub fn coord(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(e, ParamPoly::constant(1.0))
    }

    pub fn monomial(exps: SphereExps, c: ParamPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(exps, c);
        out
    }

    fn add_term(&mut self, exps: SphereExps, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                *existing = &*existing + &c;
                if existing.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SphereExps, &ParamPoly)> {
        self.terms.iter()
    }

    /// Coefficient of `x₁^a x₂^b x₃^c`.
    pub fn coeff(&self, exps: SphereExps) -> ParamPoly {
        self.terms.get(&exps).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, s: &ParamPoly) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * s);
        }
        out
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        if self.degree() * k > MAX_DEGREE {
            return invalid(format!("power of x-degree {} exceeds the limit {MAX_DEGREE}", self.degree() * k));
        }
        let mut out = Self::constant(ParamPoly::constant(1.0));
        for _ in 0..k {
            out = &out * self;
        }
        Ok(out)
    }

    /// Exact `∫_{S²} p dS`.
    pub fn integrate(&self) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (e, c) in &self.terms {
            let w = monomial_integral(e[0] as usize, e[1] as usize, e[2] as usize);
            if w != 0.0 {
                out = &out + &c.scaled(w);
            }
        }
        out
    }

    /// Point value at `x ∈ ℝ³` for parameters `point`.
    pub fn eval(&self, x: [f64; 3], point: &ParamPoint) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c.eval(point) * x[0].powi(e[0] as i32) * x[1].powi(e[1] as i32) * x[2].powi(e[2] as i32)
            })
            .sum()
    }
}

impl Add for &SpherePoly {
    type Output = SpherePoly;
    fn add(self, rhs: &SpherePoly) -> SpherePoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &SpherePoly {
    type Output = SpherePoly;
    fn sub(self, rhs: &SpherePoly) -> SpherePoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &SpherePoly {
    type Output = SpherePoly;
    fn mul(self, rhs: &SpherePoly) -> SpherePoly {
        let mut out = SpherePoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

fn double_factorial_odd(n: i64) -> f64 {
    // (n)!! for odd n ≥ -1
    let mut v = 1.0;
    let mut k = n;
    while k > 1 {
        v *= k as f64;
        k -= 2;
    }
    v
}

/// `∫_{S²} x₁^a x₂^b x₃^c dS`: zero if any exponent is odd, otherwise
/// `4π (a-1)!! (b-1)!! (c-1)!! / (a+b+c+1)!!`.
pub fn monomial_integral(a: usize, b: usize, c: usize) -> f64 {
    if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 {
        return 0.0;
    }
    let num = double_factorial_odd(a as i64 - 1) * double_factorial_odd(b as i64 - 1) * double_factorial_odd(c as i64 - 1);
    4.0 * PI * num / double_factorial_odd((a + b + c + 1) as i64)
}

/// `∫_{S²} p dS`.
pub fn sphere_integrate(p: &SpherePoly) -> ParamPoly {
    p.integrate()
}
