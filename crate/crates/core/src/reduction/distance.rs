//! Distances from a field to group orbits of reference waves.

use std::f64::consts::PI;

use nalgebra::{Matrix3, SymmetricEigen};

use super::QMatrix;
use crate::dynamics::RHWave;
use crate::harmonics::{ShellSelector, SpectralField};

/// Result of [`orbital_distance_axis`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisDistance {
    pub distance: f64,
    /// A minimizing time, in `[0, 2π/|c|)`; `0` when the orbit is a point.
    pub s_star: f64,
    /// The corresponding azimuthal shift `c·s*` modulo `2π`.
    pub angle: f64,
}

/// `inf_s ‖ω − ω^{RH}_s‖₂` over the travelling orbit of `w`.
///
/// The inner product with the shifted wave is a trigonometric polynomial in
/// the shift angle; it is maximized by sampling 1024 angles followed by
/// Newton refinement. The returned distance is evaluated directly at the
/// minimizer to avoid cancellation.
pub fn orbital_distance_axis(omega: &SpectralField, w: &RHWave) -> AxisDistance {
    let lmax = omega.lmax().max(w.degree);
    let omega = omega.with_lmax(lmax);
    let c = w.speed();
    let direct = |theta: f64| {
        let mut shifted = SpectralField::zeros(lmax);
        shifted.set_shell(w.degree, &w.coeffs);
        let mut target = shifted.rotate_azimuth(theta);
        target.set(1, 0, target.get(1, 0) + w.omega_rot * (4.0 * PI / 3.0).sqrt());
        (&omega - &target).l2_norm()
    };
    if c == 0.0 || w.is_zonal() {
        return AxisDistance { distance: direct(0.0), s_star: 0.0, angle: 0.0 };
    }
    // P(θ) = Σ_m a_m cos mθ + b_m sin mθ
    let j = w.degree;
    let mut a = vec![0.0; j + 1];
    let mut b = vec![0.0; j + 1];
    for m in 1..=j {
        let (cp, cm) = (w.coeffs[j + m], w.coeffs[j - m]);
        let (op, om) = (omega.get(j, m as i64), omega.get(j, -(m as i64)));
        a[m] = op * cp + om * cm;
        b[m] = om * cp - op * cm;
    }
    let derivs = |theta: f64| {
        let (mut d1, mut d2) = (0.0, 0.0);
        for m in 1..=j {
            let mf = m as f64;
            let (s, co) = (mf * theta).sin_cos();
            d1 += mf * (-a[m] * s + b[m] * co);
            d2 += -mf * mf * (a[m] * co + b[m] * s);
        }
        (d1, d2)
    };
    let value = |theta: f64| {
        (1..=j).map(|m| {
            let (s, co) = (m as f64 * theta).sin_cos();
            a[m] * co + b[m] * s
        })
        .sum::<f64>()
    };
    let n = 1024;
    let mut best = 0.0;
    let mut best_val = f64::NEG_INFINITY;
    for i in 0..n {
        let t = 2.0 * PI * i as f64 / n as f64;
        let v = value(t);
        if v > best_val {
            best_val = v;
            best = t;
        }
    }
    let mut theta = best;
    for _ in 0..50 {
        let (d1, d2) = derivs(theta);
        if d1.abs() <= 1e-12 || d2 >= 0.0 {
            break;
        }
        let step = d1 / d2;
        let next = theta - step;
        if value(next) < value(theta) - 1e-15 {
            break;
        }
        theta = next;
        if step.abs() < 1e-16 {
            break;
        }
    }
    let theta = theta.rem_euclid(2.0 * PI);
    let period = 2.0 * PI / c.abs();
    let s_star = (theta / c).rem_euclid(period);
    AxisDistance { distance: direct(theta), s_star, angle: theta }
}

/// Result of [`orbital_distance_so3`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct So3Distance {
    pub distance: f64,
    /// Minimizer: the reference enters as `x ↦ y(R* x)`.
    pub rotation: Matrix3<f64>,
}

fn descending_eigen(q: &QMatrix) -> ([f64; 3], Matrix3<f64>) {
    let e = SymmetricEigen::new(q.to_matrix());
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &k| e.eigenvalues[k].total_cmp(&e.eigenvalues[i]));
    let mut v = Matrix3::from_columns(&[
        e.eigenvectors.column(idx[0]).into_owned(),
        e.eigenvectors.column(idx[1]).into_owned(),
        e.eigenvectors.column(idx[2]).into_owned(),
    ]);
    if v.determinant() < 0.0 {
        v.set_column(2, &(-v.column(2)));
    }
    (idx.map(|i| e.eigenvalues[i]), v)
}

/// `inf_{R ∈ SO(3)} ‖ω − y(R·)‖₂` for a shell-2 reference `y`.
///
/// Content of `ω` outside shell 2 contributes a rotation-independent term.
/// For shell 2, `⟨ω₂, y(R·)⟩ = (8π/15) tr(Q_ω RᵀQ_y R)` is maximized by
/// aligning the eigenbases with eigenvalues in the same order, which is
/// exact and needs no search.
pub fn orbital_distance_so3(omega: &SpectralField, y2: &[f64; 5]) -> So3Distance {
    let w2: [f64; 5] = std::array::from_fn(|i| omega.get(2, i as i64 - 2));
    let rest = omega.project(ShellSelector::Except(2)).l2_norm().powi(2);
    let (_, u) = descending_eigen(&QMatrix::from_shell2(&w2));
    let (_, v) = descending_eigen(&QMatrix::from_shell2(y2));
    let r = v * u.transpose();
    let rotated = QMatrix::from_shell2(y2).conjugate(&r).to_shell2().expect("conjugation keeps Q traceless");
    let d2: f64 = w2.iter().zip(&rotated).map(|(a, b)| (a - b) * (a - b)).sum();
    So3Distance { distance: (rest + d2).sqrt(), rotation: r }
}
