//! Gauss–Legendre × uniform-longitude grids and the transforms between
//! spectral coefficients and grid values.
//!
//! Latitudinal sums exploit the equatorial symmetry of the Gauss nodes:
//! `λ_l^m(-μ) = (-1)^{l+m} λ_l^m(μ)`. Longitudinal sums use a real FFT,
//! which is exact whenever `nlon > 2·m_max` for the retained orders.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use realfft::num_complex::Complex;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};

use super::legendre::{alf_column_with_derivative, gauss_legendre};
use super::SpectralField;
use crate::error::{invalid, Result};

type C64 = Complex<f64>;

/// Quadrature grid plus precomputed Legendre tables for degrees `≤ lmax`.
#[derive(Clone)]
pub struct Grid {
    lmax: usize,
    nlat: usize,
    nlon: usize,
    mu: Vec<f64>,
    weights: Vec<f64>,
    /// Northern rows (including the equator row when `nlat` is odd).
    nhalf: usize,
    /// Row stride of the Legendre tables.
    ntab: usize,
    moff: Vec<usize>,
    plm: Vec<f64>,
    dplm: Vec<f64>,
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("lmax", &self.lmax)
            .field("nlat", &self.nlat)
            .field("nlon", &self.nlon)
            .finish()
    }
}

/// Smallest even `n ≥ target` whose only prime factors are 2 and 3.
///
/// Radix-5 stages are noticeably slower in the real-FFT backend.
fn fft_friendly(target: usize) -> usize {
    let mut n = target.max(2);
    loop {
        if n % 2 == 0 {
            let mut r = n;
            for p in [2, 3] {
                while r % p == 0 {
                    r /= p;
                }
            }
            if r == 1 {
                return n;
            }
        }
        n += 1;
    }
}

impl Grid {
    /// Grid for fields of degree `≤ lmax`. With `dealias`, products of two
    /// such fields are analyzed without aliasing.
    pub fn build(lmax: usize, dealias: bool) -> Result<Grid> {
        if lmax < 2 {
            return invalid(format!("lmax must be at least 2, got {lmax}"));
        }
        let degree = if dealias { 3 * lmax } else { 2 * lmax };
        Self::exact_for_degree(lmax, degree)
    }

    /// Grid on which every integrand of total degree `≤ degree` (in the
    /// Cartesian coordinates of S²) is integrated exactly.
    pub fn exact_for_degree(lmax: usize, degree: usize) -> Result<Grid> {
        let nlat = (degree + 2) / 2;
        let nlon = fft_friendly(degree + 1);
        Self::new(lmax, nlat.max(lmax + 1), nlon.max(2 * lmax + 1))
    }

    pub fn new(lmax: usize, nlat: usize, nlon: usize) -> Result<Grid> {
        if lmax < 1 {
            return invalid("lmax must be at least 1");
        }
        if nlat < lmax + 1 {
            return invalid(format!("nlat={nlat} too small for lmax={lmax}"));
        }
        if nlon < 2 * lmax + 1 {
            return invalid(format!("nlon={nlon} too small for lmax={lmax}"));
        }
        let (mu, weights) = gauss_legendre(nlat);
        let nhalf = nlat.div_ceil(2);
        let mut moff = Vec::with_capacity(lmax + 1);
        let mut off = 0;
        for m in 0..=lmax {
            moff.push(off);
            off += lmax - m + 1;
        }
        let ntab = off;
        let mut plm = vec![0.0; nhalf * ntab];
        let mut dplm = vec![0.0; nhalf * ntab];
        for j in 0..nhalf {
            for m in 0..=lmax {
                let (v, d) = alf_column_with_derivative(m, mu[j], lmax);
                let base = j * ntab + moff[m];
                plm[base..base + v.len()].copy_from_slice(&v);
                dplm[base..base + d.len()].copy_from_slice(&d);
            }
        }
        let mut planner = RealFftPlanner::<f64>::new();
        let r2c = planner.plan_fft_forward(nlon);
        let c2r = planner.plan_fft_inverse(nlon);
        Ok(Grid { lmax, nlat, nlon, mu, weights, nhalf, ntab, moff, plm, dplm, r2c, c2r })
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn nlat(&self) -> usize {
        self.nlat
    }

    pub fn nlon(&self) -> usize {
        self.nlon
    }

    /// `cos θ` at the latitude nodes, north to south.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn theta(&self, j: usize) -> f64 {
        self.mu[j].acos()
    }

    pub fn phi(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.nlon as f64
    }

    /// Largest total degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        (2 * self.nlat - 1).min(self.nlon - 1)
    }

    fn nspec(&self) -> usize {
        self.nlon / 2 + 1
    }

    pub(crate) fn fourier_buffer(&self) -> Vec<C64> {
        vec![C64::new(0.0, 0.0); self.nlat * self.nspec()]
    }

    /// Pointwise values `Σ c_{l,m} Y_{l,m}` on the grid.
    pub fn synthesize(&self, f: &SpectralField) -> Result<GridField> {
        self.check_band(f)?;
        let mut four = self.fourier_buffer();
        self.spectral_to_fourier(f, false, &mut four);
        Ok(self.fourier_to_grid(&mut four))
    }

    /// Pointwise values of `∂f/∂μ`, `μ = cos θ`.
    pub fn synthesize_d_mu(&self, f: &SpectralField) -> Result<GridField> {
        self.check_band(f)?;
        let mut four = self.fourier_buffer();
        self.spectral_to_fourier(f, true, &mut four);
        Ok(self.fourier_to_grid(&mut four))
    }

    /// Coefficients `∫ v Y_{l,m} dS` for `l ≤ lmax`; exact for band-limited
    /// `v` of degree `≤ exact_degree() - lmax`.
    pub fn analyze(&self, v: &GridField) -> Result<SpectralField> {
        self.check_shape(v)?;
        let mut four = self.fourier_buffer();
        self.grid_to_fourier(v, &mut four);
        Ok(self.fourier_to_spectral(&four, self.lmax))
    }

    /// Quadrature `∫_{S²} v dS`.
    pub fn integrate(&self, v: &GridField) -> Result<f64> {
        self.check_shape(v)?;
        let dphi = 2.0 * PI / self.nlon as f64;
        let total: f64 = (0..self.nlat)
            .map(|j| self.weights[j] * v.row(j).iter().sum::<f64>())
            .sum();
        Ok(total * dphi)
    }

    fn check_band(&self, f: &SpectralField) -> Result<()> {
        if f.lmax() > self.lmax {
            return invalid(format!(
                "field of degree {} does not fit a grid built for lmax={}",
                f.lmax(),
                self.lmax
            ));
        }
        Ok(())
    }

    fn check_shape(&self, v: &GridField) -> Result<()> {
        if v.nlat != self.nlat || v.nlon != self.nlon {
            return invalid(format!(
                "grid field is {}x{}, grid is {}x{}",
                v.nlat, v.nlon, self.nlat, self.nlon
            ));
        }
        Ok(())
    }

    /// Latitudinal (Legendre) synthesis into per-row half spectra laid out
    /// for the inverse real FFT. `derivative` selects `∂/∂μ`.
    pub(crate) fn spectral_to_fourier(&self, f: &SpectralField, derivative: bool, out: &mut [C64]) {
        let nspec = self.nspec();
        out.iter_mut().for_each(|c| *c = C64::new(0.0, 0.0));
        let table = if derivative { &self.dplm } else { &self.plm };
        let fl = f.lmax().min(self.lmax);
        let mut cc = vec![0.0; fl + 1];
        let mut cs = vec![0.0; fl + 1];
        for m in 0..=fl {
            let scale = if m == 0 { 1.0 } else { SQRT_2 };
            for l in m..=fl {
                cc[l - m] = if l == 0 { 0.0 } else { scale * f.get(l, m as i64) };
                cs[l - m] = if m == 0 { 0.0 } else { scale * f.get(l, -(m as i64)) };
            }
            let n = fl - m + 1;
            for j in 0..self.nhalf {
                let base = j * self.ntab + self.moff[m];
                let row = &table[base..base + n];
                let (mut ec, mut oc, mut es, mut os) = (0.0, 0.0, 0.0, 0.0);
                for (i, &p) in row.iter().enumerate() {
                    if i % 2 == 0 {
                        ec += cc[i] * p;
                        es += cs[i] * p;
                    } else {
                        oc += cc[i] * p;
                        os += cs[i] * p;
                    }
                }
                let (an, bn) = (ec + oc, es + os);
                // derivative parity is flipped relative to the values
                let (as_, bs) = if derivative { (oc - ec, os - es) } else { (ec - oc, es - os) };
                out[j * nspec + m] = half_spectrum(m, an, bn);
                let mirror = self.nlat - 1 - j;
                if mirror != j {
                    out[mirror * nspec + m] = half_spectrum(m, as_, bs);
                }
            }
        }
    }

    /// Inverse real FFT of every row; consumes the spectra.
    pub(crate) fn fourier_to_grid(&self, four: &mut [C64]) -> GridField {
        let nspec = self.nspec();
        let mut values = vec![0.0; self.nlat * self.nlon];
        let mut scratch = self.c2r.make_scratch_vec();
        for j in 0..self.nlat {
            let spec = &mut four[j * nspec..(j + 1) * nspec];
            let row = &mut values[j * self.nlon..(j + 1) * self.nlon];
            self.c2r
                .process_with_scratch(spec, row, &mut scratch)
                .expect("inverse FFT buffer sizes are fixed by the grid");
        }
        GridField { nlat: self.nlat, nlon: self.nlon, values }
    }

    pub(crate) fn grid_to_fourier(&self, v: &GridField, out: &mut [C64]) {
        let nspec = self.nspec();
        let mut input = vec![0.0; self.nlon];
        let mut scratch = self.r2c.make_scratch_vec();
        for j in 0..self.nlat {
            input.copy_from_slice(v.row(j));
            self.r2c
                .process_with_scratch(&mut input, &mut out[j * nspec..(j + 1) * nspec], &mut scratch)
                .expect("forward FFT buffer sizes are fixed by the grid");
        }
    }

    /// Latitudinal (Legendre) analysis of per-row forward spectra, keeping
    /// degrees `≤ lmax_out`.
    pub(crate) fn fourier_to_spectral(&self, four: &[C64], lmax_out: usize) -> SpectralField {
        let lmax_out = lmax_out.min(self.lmax);
        let nspec = self.nspec();
        let dphi = 2.0 * PI / self.nlon as f64;
        let mut out = SpectralField::zeros(lmax_out);
        let mut acc_c = vec![0.0; lmax_out + 1];
        let mut acc_s = vec![0.0; lmax_out + 1];
        for m in 0..=lmax_out {
            let n = lmax_out - m + 1;
            acc_c[..n].fill(0.0);
            acc_s[..n].fill(0.0);
            for j in 0..self.nhalf {
                let mirror = self.nlat - 1 - j;
                let xn = four[j * nspec + m];
                let (sum, diff) = if mirror != j {
                    let xs = four[mirror * nspec + m];
                    (xn + xs, xn - xs)
                } else {
                    (xn, xn)
                };
                let w = self.weights[j];
                let base = j * self.ntab + self.moff[m];
                for (i, &p) in self.plm[base..base + n].iter().enumerate() {
                    let x = if i % 2 == 0 { sum } else { diff };
                    acc_c[i] += w * p * x.re;
                    acc_s[i] -= w * p * x.im;
                }
            }
            let scale = dphi * if m == 0 { 1.0 } else { SQRT_2 };
            for l in m.max(1)..=lmax_out {
                out.set(l, m as i64, scale * acc_c[l - m]);
                if m > 0 {
                    out.set(l, -(m as i64), scale * acc_s[l - m]);
                }
            }
        }
        out
    }
}

#[inline]
fn half_spectrum(m: usize, a: f64, b: f64) -> C64 {
    if m == 0 {
        C64::new(a, 0.0)
    } else {
        C64::new(0.5 * a, -0.5 * b)
    }
}

/// Values on a grid, row-major `[nlat][nlon]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    nlat: usize,
    nlon: usize,
    values: Vec<f64>,
}

impl GridField {
    pub fn zeros(grid: &Grid) -> Self {
        Self { nlat: grid.nlat, nlon: grid.nlon, values: vec![0.0; grid.nlat * grid.nlon] }
    }

    /// Samples `f(θ, φ)` at the grid nodes.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = Self::zeros(grid);
        for j in 0..grid.nlat {
            let theta = grid.theta(j);
            for k in 0..grid.nlon {
                out.values[j * grid.nlon + k] = f(theta, grid.phi(k));
            }
        }
        out
    }

    pub fn from_values(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nlat * grid.nlon {
            return invalid(format!(
                "expected {} grid values, got {}",
                grid.nlat * grid.nlon,
                values.len()
            ));
        }
        Ok(Self { nlat: grid.nlat, nlon: grid.nlon, values })
    }

    pub fn nlat(&self) -> usize {
        self.nlat
    }

    pub fn nlon(&self) -> usize {
        self.nlon
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.nlon..(j + 1) * self.nlon]
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.values[j * self.nlon + k]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { nlat: self.nlat, nlon: self.nlon, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.nlat, self.nlon), (other.nlat, other.nlon));
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Self { nlat: self.nlat, nlon: self.nlon, values }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::num_coeffs;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(lmax: usize, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = (0..num_coeffs(lmax)).map(|_| rng.random_range(-1.0..1.0)).collect();
        SpectralField::from_coeffs(lmax, c).unwrap()
    }

    #[test]
    fn grid_sizes() {
        assert!(Grid::build(1, false).is_err());
        let g = Grid::build(2, false).unwrap();
        assert_eq!(g.nlat(), 3);
        let g = Grid::build(32, true).unwrap();
        assert!(g.nlat() >= 49 && g.nlon() >= 97);
        assert!((g.weights().iter().sum::<f64>() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn synthesize_matches_closed_forms() {
        let g = Grid::build(4, false).unwrap();
        let f = SpectralField::single(4, 2, 2);
        let v = g.synthesize(&f).unwrap();
        let k = (15.0 / (16.0 * PI)).sqrt();
        for j in 0..g.nlat() {
            for kk in 0..g.nlon() {
                let (t, p) = (g.theta(j), g.phi(kk));
                let expect = k * t.sin().powi(2) * (2.0 * p).cos();
                assert!((v.get(j, kk) - expect).abs() < 1e-14);
            }
        }
        // Y_{2,0} at the north pole
        let y20 = SpectralField::single(4, 2, 0);
        let pole = 2.0 * (5.0 / (16.0 * PI)).sqrt();
        assert!((y20.evaluate(0.0, 0.3) - pole).abs() < 1e-14);
    }

    #[test]
    fn single_harmonics_have_zero_mean() {
        let g = Grid::build(6, false).unwrap();
        for l in 1..=6 {
            for m in -(l as i64)..=l as i64 {
                let v = g.synthesize(&SpectralField::single(6, l, m)).unwrap();
                assert!(g.integrate(&v).unwrap().abs() < 1e-14);
            }
        }
    }

    #[test]
    fn constant_analyzes_to_zero() {
        let g = Grid::build(8, false).unwrap();
        let one = GridField::from_fn(&g, |_, _| 1.0);
        assert!(g.analyze(&one).unwrap().l2_norm() < 1e-14);
    }

    #[test]
    fn round_trip_and_parseval() {
        let g = Grid::build(32, false).unwrap();
        for seed in 0..5 {
            let f = random_field(32, seed);
            let v = g.synthesize(&f).unwrap();
            let back = g.analyze(&v).unwrap();
            assert!((&back - &f).l2_norm() < 1e-10);
            let sq = g.integrate(&v.mul(&v)).unwrap();
            assert!((sq - f.l2_norm().powi(2)).abs() < 1e-10);
        }
    }

    #[test]
    fn d_mu_matches_pointwise_derivative() {
        let g = Grid::build(10, false).unwrap();
        let f = random_field(10, 7);
        let d = g.synthesize_d_mu(&f).unwrap();
        let h = 1e-6;
        for j in [0, 3, 5] {
            for k in [0, 4] {
                let (t, p) = (g.theta(j), g.phi(k));
                let mu = t.cos();
                let fd = (f.evaluate((mu + h).acos(), p) - f.evaluate((mu - h).acos(), p)) / (2.0 * h);
                assert!((fd - d.get(j, k)).abs() < 1e-5 * (1.0 + fd.abs()));
            }
        }
    }

    #[test]
    fn shape_and_band_errors() {
        let g = Grid::build(4, false).unwrap();
        let big = SpectralField::zeros(5);
        assert!(g.synthesize(&big).is_err());
        let other = Grid::build(6, false).unwrap();
        let v = GridField::zeros(&other);
        assert!(g.analyze(&v).is_err());
    }

    #[test]
    fn fft_sizes_are_smooth_and_even() {
        assert_eq!(fft_friendly(97), 108);
        assert_eq!(fft_friendly(5), 6);
        assert_eq!(fft_friendly(161), 162);
    }
}
