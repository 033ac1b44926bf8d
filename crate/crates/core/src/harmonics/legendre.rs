//! Gauss–Legendre quadrature and normalized associated Legendre functions.
//!
//! The normalized functions are
//! `λ_l^m(μ) = sqrt((2l+1)/(4π) · (l-m)!/(l+m)!) · (1-μ²)^{m/2} d^m/dμ^m P_l(μ)`,
//! i.e. without the Condon–Shortley phase. With this normalization the real
//! harmonics are `Y_{l,0} = λ_l^0`, `Y_{l,m} = √2 λ_l^m cos mφ` and
//! `Y_{l,-m} = √2 λ_l^m sin mφ` for `m > 0`: the two `(-1)^m` factors of the
//! textbook definition cancel.

use std::f64::consts::PI;

/// Gauss–Legendre nodes on `[-1, 1]` in descending order, with weights.
///
/// Exact for polynomials of degree `≤ 2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                let (_, d) = legendre_and_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `ε_l^m = sqrt((l² - m²) / (4l² - 1))`, the coupling in
/// `μ λ_l^m = ε_{l+1}^m λ_{l+1}^m + ε_l^m λ_{l-1}^m`.
#[inline]
pub fn epsilon(l: usize, m: usize) -> f64 {
    if l < m || l == 0 {
        return 0.0;
    }
    let (l, m) = (l as f64, m as f64);
    ((l * l - m * m) / (4.0 * l * l - 1.0)).sqrt()
}

/// Diagonal seed `λ_m^m(μ)` from the closed-form product, evaluated stably as
/// a running product in `sin θ`.
fn diagonal(m: usize, sin_theta: f64) -> f64 {
    let mut v = (0.25 / PI).sqrt();
    for k in 1..=m {
        let kf = k as f64;
        v *= ((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * sin_theta;
    }
    v
}

/// Values `λ_l^m(μ)` for `l = m ..= lmax` (returned vector index `l - m`).
pub fn alf_column(m: usize, mu: f64, lmax: usize) -> Vec<f64> {
    if m > lmax {
        return Vec::new();
    }
    let sin_theta = (1.0 - mu * mu).max(0.0).sqrt();
    let mut out = Vec::with_capacity(lmax - m + 1);
    let pmm = diagonal(m, sin_theta);
    out.push(pmm);
    if lmax == m {
        return out;
    }
    let mut prev2 = pmm;
    let mut prev1 = (2.0 * m as f64 + 3.0).sqrt() * mu * pmm;
    out.push(prev1);
    for l in m + 2..=lmax {
        let cur = (mu * prev1 - epsilon(l - 1, m) * prev2) / epsilon(l, m);
        out.push(cur);
        prev2 = prev1;
        prev1 = cur;
    }
    out
}

/// Values and μ-derivatives of `λ_l^m` for `l = m ..= lmax`.
///
/// Uses `(1-μ²) dλ_l/dμ = -l ε_{l+1} λ_{l+1} + (l+1) ε_l λ_{l-1}`; undefined
/// at the poles, which are never quadrature nodes.
pub fn alf_column_with_derivative(m: usize, mu: f64, lmax: usize) -> (Vec<f64>, Vec<f64>) {
    let ext = alf_column(m, mu, lmax + 1);
    let one_minus = 1.0 - mu * mu;
    let mut vals = Vec::with_capacity(lmax - m + 1);
    let mut ders = Vec::with_capacity(lmax - m + 1);
    for l in m..=lmax {
        let i = l - m;
        let up = ext[i + 1];
        let down = if i > 0 { ext[i - 1] } else { 0.0 };
        let lf = l as f64;
        let d = (-lf * epsilon(l + 1, m) * up + (lf + 1.0) * epsilon(l, m) * down) / one_minus;
        vals.push(ext[i]);
        ders.push(d);
    }
    (vals, ders)
}

/// Pointwise real spherical harmonic `Y_{l,m}(θ, φ)`.
pub fn real_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> f64 {
    let am = m.unsigned_abs() as usize;
    assert!(am <= l, "|m| must not exceed l");
    let lam = alf_column(am, theta.cos(), l)[l - am];
    match m.cmp(&0) {
        std::cmp::Ordering::Equal => lam,
        std::cmp::Ordering::Greater => std::f64::consts::SQRT_2 * lam * (am as f64 * phi).cos(),
        std::cmp::Ordering::Less => std::f64::consts::SQRT_2 * lam * (am as f64 * phi).sin(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 3, 7, 49, 145] {
            let (_, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn quadrature_is_exact_to_degree_2n_minus_1() {
        let n = 5;
        let (x, w) = gauss_legendre(n);
        for deg in 0..2 * n {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "deg={deg}");
        }
    }

    #[test]
    fn nodes_are_descending_and_symmetric() {
        let (x, _) = gauss_legendre(8);
        for i in 0..7 {
            assert!(x[i] > x[i + 1]);
        }
        for i in 0..8 {
            assert!((x[i] + x[7 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn second_shell_closed_forms() {
        let (theta, phi) = (0.7_f64, 1.3_f64);
        let k = (15.0 / (16.0 * PI)).sqrt();
        let y20 = (5.0 / (16.0 * PI)).sqrt() * (3.0 * theta.cos().powi(2) - 1.0);
        assert!((real_harmonic(2, 0, theta, phi) - y20).abs() < 1e-14);
        let y21 = k * (2.0 * theta).sin() * phi.cos();
        assert!((real_harmonic(2, 1, theta, phi) - y21).abs() < 1e-14);
        let y2m1 = k * (2.0 * theta).sin() * phi.sin();
        assert!((real_harmonic(2, -1, theta, phi) - y2m1).abs() < 1e-14);
        let y22 = k * theta.sin().powi(2) * (2.0 * phi).cos();
        assert!((real_harmonic(2, 2, theta, phi) - y22).abs() < 1e-14);
        let y2m2 = k * theta.sin().powi(2) * (2.0 * phi).sin();
        assert!((real_harmonic(2, -2, theta, phi) - y2m2).abs() < 1e-14);
        let y10 = (3.0 / (4.0 * PI)).sqrt() * theta.cos();
        assert!((real_harmonic(1, 0, theta, phi) - y10).abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let mu = 0.37;
        let h = 1e-6;
        for m in [0, 1, 3, 7] {
            let (_, d) = alf_column_with_derivative(m, mu, 12);
            let p = alf_column(m, mu + h, 12);
            let q = alf_column(m, mu - h, 12);
            for i in 0..d.len() {
                let fd = (p[i] - q[i]) / (2.0 * h);
                assert!((fd - d[i]).abs() < 1e-6 * (1.0 + d[i].abs()), "m={m} i={i}");
            }
        }
    }

    #[test]
    fn column_is_orthonormal_under_quadrature() {
        let lmax = 20;
        let (x, w) = gauss_legendre(lmax + 1);
        for m in [0, 5, 20] {
            let cols: Vec<Vec<f64>> = x.iter().map(|&mu| alf_column(m, mu, lmax)).collect();
            for a in 0..=lmax - m {
                for b in 0..=lmax - m {
                    let s: f64 = (0..x.len()).map(|j| w[j] * cols[j][a] * cols[j][b]).sum();
                    let expect = if a == b { 1.0 / (2.0 * PI) } else { 0.0 };
                    assert!((s - expect).abs() < 1e-13, "m={m} a={a} b={b} s={s}");
                }
            }
        }
    }
}
