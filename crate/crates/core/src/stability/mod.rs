//! Quantitative inverse-function estimates for polynomial maps.
//!
//! A [`PolyMap`] is a polynomial map `ℝⁿ → ℝᵐ` in a subset of the
//! parameters `(Ω, A, B, C, D)`; the rest are held fixed. Derivatives up to
//! third order are exact. Near a point with invertible Jacobian the inverse is
//! Lipschitz, `|x − x₀| ≤ C|F(x) − F(x₀)|`; near a fold point it is Hölder-½,
//! `|x − x₀|² ≤ C|F(x) − F(x₀)|`. The constants follow the usual Taylor
//! argument with sampled bounds on the higher derivatives.

mod checks;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::polysphere::{normalized_map, Param, ParamPoint, ParamPoly, Representation};

pub use checks::{
    alpha_column_check, fit_exponent, rmk_state_point, zprime_check, ExponentFit, ZPrimeReport,
};

/// Relative singular value cutoff used for ranks.
pub const RANK_TOL: f64 = 1e-10;

/// Number of quasi-random points used for derivative bounds and property tests.
pub const DEFAULT_SAMPLES: usize = 10_000;

/// A polynomial map with exact derivatives up to third order.
#[derive(Clone, Debug)]
pub struct PolyMap {
    components: Vec<ParamPoly>,
    vars: Vec<Param>,
    base: ParamPoint,
    grad: Vec<Vec<ParamPoly>>,
    hess: Vec<Vec<Vec<ParamPoly>>>,
    third: Vec<Vec<Vec<Vec<ParamPoly>>>>,
}

impl PolyMap {
    /// `components` as functions of `vars`; every other parameter takes its
    /// value from `base`.
    pub fn new(components: Vec<ParamPoly>, vars: Vec<Param>, base: ParamPoint) -> Result<Self> {
        if components.is_empty() || vars.is_empty() {
            return invalid("map needs at least one component and one variable");
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return invalid(format!("variable {v} listed twice"));
            }
        }
        let grad: Vec<Vec<ParamPoly>> =
            components.iter().map(|f| vars.iter().map(|&v| f.partial(v)).collect()).collect();
        let hess: Vec<Vec<Vec<ParamPoly>>> = grad
            .iter()
            .map(|row| row.iter().map(|g| vars.iter().map(|&v| g.partial(v)).collect()).collect())
            .collect();
        let third = hess
            .iter()
            .map(|h| {
                h.iter()
                    .map(|row| row.iter().map(|g| vars.iter().map(|&v| g.partial(v)).collect()).collect())
                    .collect()
            })
            .collect();
        Ok(Self { components, vars, base, grad, hess, third })
    }

    /// The Casimir map `(C_k)_{k∈ks}` of `rep` at rotation rate `omega`, with
    /// `eliminated` removed through the normalization of shell 2. The
    /// variables are the remaining shell-2 parameters in `(A, B, C, D)` order.
    pub fn casimir(ks: &[usize], rep: Representation, eliminated: Param, omega: f64) -> Result<Self> {
        let components = normalized_map(ks, rep, eliminated)?;
        let vars = rep.shell_params().iter().copied().filter(|&p| p != eliminated).collect();
        let mut base = [0.0; 5];
        base[Param::Omega.index()] = omega;
        Self::new(components, vars, base)
    }

    pub fn components(&self) -> &[ParamPoly] {
        &self.components
    }

    pub fn vars(&self) -> &[Param] {
        &self.vars
    }

    pub fn base(&self) -> &ParamPoint {
        &self.base
    }

    pub fn dim_in(&self) -> usize {
        self.vars.len()
    }

    pub fn dim_out(&self) -> usize {
        self.components.len()
    }

    /// The full parameter point for coordinates `x`.
    pub fn point(&self, x: &[f64]) -> ParamPoint {
        assert_eq!(x.len(), self.vars.len(), "coordinate dimension");
        let mut p = self.base;
        for (v, xi) in self.vars.iter().zip(x) {
            p[v.index()] = *xi;
        }
        p
    }

    pub fn eval(&self, x: &[f64]) -> DVector<f64> {
        let p = self.point(x);
        DVector::from_iterator(self.dim_out(), self.components.iter().map(|f| f.eval(&p)))
    }

    /// `m × n` Jacobian.
    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let p = self.point(x);
        DMatrix::from_fn(self.dim_out(), self.dim_in(), |i, a| self.grad[i][a].eval(&p))
    }

    /// Hessian of each component.
    pub fn hessians(&self, x: &[f64]) -> Vec<DMatrix<f64>> {
        let p = self.point(x);
        let n = self.dim_in();
        self.hess.iter().map(|h| DMatrix::from_fn(n, n, |a, b| h[a][b].eval(&p))).collect()
    }

    /// `∇²F(x)(v, w)`.
    pub fn second_derivative(&self, x: &[f64], v: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.dim_out(), self.hessians(x).iter().map(|h| v.dot(&(h * w))))
    }

    /// Upper bound for `‖∇²F(x)‖ = sup_{|v|=|w|=1} |∇²F(x)(v, w)|`, namely
    /// `(Σᵢ ‖Hᵢ‖²)^{1/2}` with spectral norms of the component Hessians.
    pub fn hessian_norm_bound(&self, x: &[f64]) -> f64 {
        self.hessians(x)
            .iter()
            .map(|h| {
                let e = h.clone().symmetric_eigenvalues();
                e.iter().fold(0.0_f64, |m, v| m.max(v.abs())).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Upper bound for `‖∇³F(x)‖`: the Frobenius norm of the third-derivative
    /// tensor.
    pub fn third_norm_bound(&self, x: &[f64]) -> f64 {
        let p = self.point(x);
        self.third
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .map(|t| t.eval(&p).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Rank, singular values and kernel of a matrix.
#[derive(Clone, Debug)]
pub struct RankInfo {
    pub rank: usize,
    /// Descending, padded with zeros to the number of columns.
    pub singular_values: Vec<f64>,
    /// Orthonormal kernel basis.
    pub kernel: Vec<DVector<f64>>,
    /// Orthonormal basis of the complement of the column space (square and
    /// tall matrices).
    pub cokernel: Vec<DVector<f64>>,
}

/// Rank from the SVD with cutoff `σ > tol·σ_max`, kernel from the trailing
/// right singular vectors.
pub fn rank_and_kernel(j: &DMatrix<f64>, tol: f64) -> Result<RankInfo> {
    if !(tol > 0.0) {
        return invalid("rank tolerance must be positive");
    }
    let (m, n) = j.shape();
    let size = m.max(n);
    let mut padded = DMatrix::zeros(size, size);
    padded.view_mut((0, 0), (m, n)).copy_from(j);
    let svd = padded.svd(true, true);
    let u = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let smax = sigma.first().copied().unwrap_or(0.0);
    let rank = sigma.iter().filter(|&&s| s > tol * smax && s > 0.0).count();
    // right singular vectors live in the first n coordinates when m ≥ n
    let kernel = order[rank..]
        .iter()
        .map(|&i| vt.row(i).transpose().rows(0, n).into_owned())
        .filter(|v| v.norm() > 0.5)
        .map(|v| v.normalize())
        .take(n - rank.min(n))
        .collect();
    let cokernel = order[rank..]
        .iter()
        .map(|&i| u.column(i).rows(0, m).into_owned())
        .filter(|v| v.norm() > 0.5)
        .map(|v| v.normalize())
        .take(m - rank.min(m))
        .collect();
    Ok(RankInfo { rank, singular_values: sigma.into_iter().take(n).collect(), kernel, cokernel })
}

/// Fold diagnostics at a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub rank: usize,
    pub n: usize,
    /// Unit kernel vector when the kernel is one-dimensional.
    pub kernel_vector: Option<Vec<f64>>,
    /// Smallest singular value on the kernel complement.
    pub lambda: f64,
    /// `|P_{col ∇F(x₀)^⊥} ∇²F(x₀)(e, e)|`
    pub eta: f64,
    pub is_fold: bool,
}

/// Relative threshold on `η` below which the second-order condition is
/// considered to fail.
pub const ETA_TOL: f64 = 1e-9;

/// Checks `dim ker ∇F(x₀) = 1` and `∇²F(x₀)(e, e) ∉ col ∇F(x₀)`.
pub fn fold_condition(map: &PolyMap, x0: &[f64]) -> Result<FoldReport> {
    let n = map.dim_in();
    if map.dim_out() != n {
        return invalid(format!("fold analysis needs a square map, got {}x{n}", map.dim_out()));
    }
    let info = rank_and_kernel(&map.jacobian(x0), RANK_TOL)?;
    let lambda = if info.rank >= 1 && n >= 2 { info.singular_values[n - 2] } else { 0.0 };
    if info.rank + 1 != n || info.kernel.len() != 1 || info.cokernel.len() != 1 {
        return Ok(FoldReport { rank: info.rank, n, kernel_vector: None, lambda, eta: 0.0, is_fold: false });
    }
    let e = &info.kernel[0];
    let second = map.second_derivative(x0, e, e);
    let eta = info.cokernel[0].dot(&second).abs();
    let scale = info.singular_values[0] + second.norm();
    Ok(FoldReport {
        rank: info.rank,
        n,
        kernel_vector: Some(e.iter().copied().collect()),
        lambda,
        eta,
        is_fold: eta > ETA_TOL * scale,
    })
}

/// Neighborhood radius and constant of a local inverse estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityConstants {
    pub delta: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub gamma: Option<f64>,
    /// Sampled `sup_{B₁(x₀)} ‖∇²F‖` including the safety factor.
    pub hessian_sup: f64,
    /// Sampled `sup_{B₁(x₀)} ‖∇³F‖` including the safety factor.
    pub third_sup: Option<f64>,
}

/// Safety factor applied to sampled suprema.
pub const SUP_SAFETY: f64 = 2.0;

/// `k`-th point of the Halton sequence in base `b`.
fn radical_inverse(mut k: usize, b: usize) -> f64 {
    let (mut out, mut f) = (0.0, 1.0 / b as f64);
    while k > 0 {
        out += f * (k % b) as f64;
        k /= b;
        f /= b as f64;
    }
    out
}

const HALTON_BASES: [usize; 5] = [2, 3, 5, 7, 11];

/// `count` Halton points in the closed unit ball of `ℝⁿ` around `x0`,
/// starting with `x0` itself.
pub fn halton_ball(x0: &[f64], count: usize) -> Vec<Vec<f64>> {
    let n = x0.len();
    assert!(n <= HALTON_BASES.len(), "Halton sampling supports up to 5 dimensions");
    let mut out = vec![x0.to_vec()];
    let mut k = 1;
    while out.len() < count {
        let y: Vec<f64> = (0..n).map(|d| 2.0 * radical_inverse(k, HALTON_BASES[d]) - 1.0).collect();
        k += 1;
        if y.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            out.push(x0.iter().zip(&y).map(|(a, b)| a + b).collect());
        }
    }
    out
}

fn sampled_sup(samples: &[Vec<f64>], f: impl Fn(&[f64]) -> f64) -> f64 {
    SUP_SAFETY * samples.iter().map(|x| f(x)).fold(0.0, f64::max)
}

/// Constants for an invertible Jacobian: `C = 2‖∇F(x₀)⁻¹‖` and
/// `δ = min(1, 1/(‖∇F(x₀)⁻¹‖ sup‖∇²F‖))`.
pub fn lipschitz_constants(map: &PolyMap, x0: &[f64]) -> Result<StabilityConstants> {
    lipschitz_constants_with(map, x0, DEFAULT_SAMPLES)
}

pub fn lipschitz_constants_with(map: &PolyMap, x0: &[f64], samples: usize) -> Result<StabilityConstants> {
    let n = map.dim_in();
    if map.dim_out() != n {
        return invalid("Lipschitz constants need a square map");
    }
    let info = rank_and_kernel(&map.jacobian(x0), RANK_TOL)?;
    if info.rank < n {
        return Err(Error::RankDeficient { rank: info.rank, n });
    }
    let inv_norm = 1.0 / info.singular_values[n - 1];
    let pts = halton_ball(x0, samples);
    let m2 = sampled_sup(&pts, |x| map.hessian_norm_bound(x));
    let delta = if m2 > 0.0 { (1.0 / (inv_norm * m2)).min(1.0) } else { 1.0 };
    Ok(StabilityConstants { delta, c: 2.0 * inv_norm, gamma: None, hessian_sup: m2, third_sup: None })
}

/// Constants at a fold point: `γ = min(λ/(4 sup‖∇²F‖), 1)`,
/// `δ < min(γ/3, η / (4(sup‖∇²F‖·3/(2γ) + (4/3) sup‖∇³F‖)))` and
/// `C = max(8γ/λ, 8/η)`.
pub fn fold_constants(map: &PolyMap, x0: &[f64]) -> Result<StabilityConstants> {
    fold_constants_with(map, x0, DEFAULT_SAMPLES)
}

pub fn fold_constants_with(map: &PolyMap, x0: &[f64], samples: usize) -> Result<StabilityConstants> {
    let fold = fold_condition(map, x0)?;
    if !fold.is_fold {
        return Err(Error::NotAFold(format!("rank {} of {}, eta {:.3e}", fold.rank, fold.n, fold.eta)));
    }
    let pts = halton_ball(x0, samples);
    let m2 = sampled_sup(&pts, |x| map.hessian_norm_bound(x));
    let m3 = sampled_sup(&pts, |x| map.third_norm_bound(x));
    let (lambda, eta) = (fold.lambda, fold.eta);
    let gamma = if m2 > 0.0 { (lambda / (4.0 * m2)).min(1.0) } else { 1.0 };
    let denom = 4.0 * (m2 * 1.5 / gamma + 4.0 / 3.0 * m3);
    let second = if denom > 0.0 { eta / denom } else { f64::INFINITY };
    // strict inequalities in the derivation
    let delta = 0.999 * (gamma / 3.0).min(second).min(1.0);
    let c = (8.0 * gamma / lambda).max(8.0 / eta);
    Ok(StabilityConstants { delta, c, gamma: Some(gamma), hessian_sup: m2, third_sup: Some(m3) })
}

/// Outcome of sampling `|x − x₀|^p ≤ C|F(x) − F(x₀)|` on `B_δ(x₀)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyTest {
    pub samples: usize,
    pub violations: usize,
    pub pass_rate: f64,
    /// `max |x − x₀|^p / (C|F(x) − F(x₀)|)`; at most 1 when all samples pass.
    pub worst_ratio: f64,
}

/// Uniform samples in the open ball `B_δ(x₀)` from a seeded ChaCha8 stream.
pub fn uniform_ball(x0: &[f64], delta: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = x0.len();
    (0..count)
        .map(|_| {
            let dir: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            let u: f64 = rng.random();
            let r = delta * u.powf(1.0 / n as f64) * (1.0 - 1e-12);
            x0.iter().zip(&dir).map(|(a, d)| a + r * d / norm).collect()
        })
        .collect()
}

/// Checks `|x − x₀|^exponent ≤ C|F(x) − F(x₀)|` at `count` points of
/// `B_δ(x₀)`.
pub fn property_test(
    map: &PolyMap,
    x0: &[f64],
    constants: &StabilityConstants,
    exponent: i32,
    count: usize,
    seed: u64,
) -> PropertyTest {
    let f0 = map.eval(x0);
    let mut violations = 0;
    let mut worst = 0.0_f64;
    for x in uniform_ball(x0, constants.delta, count, seed) {
        let dist: f64 = x.iter().zip(x0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        if dist == 0.0 {
            continue;
        }
        let lhs = dist.powi(exponent);
        let rhs = constants.c * (map.eval(&x) - &f0).norm();
        let ratio = lhs / rhs;
        worst = worst.max(ratio);
        if !(ratio <= 1.0) {
            violations += 1;
        }
    }
    PropertyTest {
        samples: count,
        violations,
        pass_rate: (count - violations) as f64 / count as f64,
        worst_ratio: worst,
    }
}

/// JSON summary of one analyzed point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub label: String,
    pub vars: Vec<String>,
    pub point: Vec<f64>,
    pub rank: usize,
    pub eta: f64,
    pub lambda: f64,
    pub delta: Option<f64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub is_fold: bool,
    pub property_test_pass_rate: Option<f64>,
}

/// Rank/fold analysis at `x0`, constants from the applicable estimate, and a
/// property test of `samples` points. Points that are neither regular nor
/// folds are reported without constants.
pub fn analyze_point(label: &str, map: &PolyMap, x0: &[f64], samples: usize, seed: u64) -> Result<PointReport> {
    let fold = fold_condition(map, x0)?;
    let n = map.dim_in();
    let (constants, exponent) = if fold.rank == n {
        (Some(lipschitz_constants_with(map, x0, samples)?), 1)
    } else if fold.is_fold {
        (Some(fold_constants_with(map, x0, samples)?), 2)
    } else {
        (None, 0)
    };
    let pass = constants.as_ref().map(|c| property_test(map, x0, c, exponent, samples, seed).pass_rate);
    Ok(PointReport {
        label: label.to_string(),
        vars: map.vars().iter().map(|v| v.name().to_string()).collect(),
        point: x0.to_vec(),
        rank: fold.rank,
        eta: fold.eta,
        lambda: fold.lambda,
        delta: constants.as_ref().map(|c| c.delta),
        c: constants.as_ref().map(|c| c.c),
        is_fold: fold.is_fold,
        property_test_pass_rate: pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn v(p: Param) -> ParamPoly {
        ParamPoly::var(p)
    }

    fn normal_form() -> PolyMap {
        PolyMap::new(vec![v(Param::A), v(Param::B).pow(2).unwrap()], vec![Param::A, Param::B], [0.0; 5]).unwrap()
    }

    #[test]
    fn identity_rank() {
        let info = rank_and_kernel(&DMatrix::identity(3, 3), RANK_TOL).unwrap();
        assert_eq!(info.rank, 3);
        assert!(info.kernel.is_empty());
        assert!(rank_and_kernel(&DMatrix::identity(2, 2), 0.0).is_err());
    }

    #[test]
    fn wide_and_tall_kernels() {
        let j = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let info = rank_and_kernel(&j, RANK_TOL).unwrap();
        assert_eq!(info.rank, 2);
        assert_eq!(info.kernel.len(), 1);
        assert!((info.kernel[0][2].abs() - 1.0).abs() < 1e-14);
        let t = DMatrix::from_row_slice(3, 1, &[0.0, 2.0, 0.0]);
        let info = rank_and_kernel(&t, RANK_TOL).unwrap();
        assert_eq!((info.rank, info.kernel.len(), info.cokernel.len()), (1, 0, 2));
    }

    #[test]
    fn normal_form_fold() {
        let f = normal_form();
        let r = fold_condition(&f, &[0.0, 0.0]).unwrap();
        assert!(r.is_fold);
        assert_eq!(r.rank, 1);
        let e = r.kernel_vector.unwrap();
        assert!(e[0].abs() < 1e-15 && (e[1].abs() - 1.0).abs() < 1e-15);
        assert!((r.lambda - 1.0).abs() < 1e-15);
        assert!((r.eta - 2.0).abs() < 1e-14);
        let c = fold_constants(&f, &[0.0, 0.0]).unwrap();
        assert!((c.c - 4.0).abs() < 1e-12);
        let p = property_test(&f, &[0.0, 0.0], &c, 2, 10_000, 1);
        assert_eq!(p.violations, 0);
    }

    #[test]
    fn not_a_fold() {
        // F(x) = (x₁, x₁x₂): second derivative along e₂ vanishes
        let f = PolyMap::new(vec![v(Param::A), &v(Param::A) * &v(Param::B)], vec![Param::A, Param::B], [0.0; 5])
            .unwrap();
        let r = fold_condition(&f, &[0.0, 0.0]).unwrap();
        assert!(!r.is_fold);
        assert!(matches!(fold_constants(&f, &[0.0, 0.0]), Err(Error::NotAFold(_))));
        // F = 0 has a two-dimensional kernel
        let z = PolyMap::new(vec![ParamPoly::zero(), ParamPoly::zero()], vec![Param::A, Param::B], [0.0; 5]).unwrap();
        let r = fold_condition(&z, &[0.0, 0.0]).unwrap();
        assert_eq!(r.rank, 0);
        assert!(!r.is_fold && r.kernel_vector.is_none());
    }

    #[test]
    fn linear_maps() {
        let id = PolyMap::new(vec![v(Param::A), v(Param::B), v(Param::D)], vec![Param::A, Param::B, Param::D], [0.0; 5])
            .unwrap();
        let c = lipschitz_constants(&id, &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!((c.c, c.delta), (2.0, 1.0));
        let two = PolyMap::new(
            vec![v(Param::A).scaled(2.0), v(Param::B).scaled(2.0)],
            vec![Param::A, Param::B],
            [0.0; 5],
        )
        .unwrap();
        assert!((lipschitz_constants(&two, &[0.0, 0.0]).unwrap().c - 1.0).abs() < 1e-15);
        assert!(matches!(
            lipschitz_constants(&normal_form(), &[0.0, 0.0]),
            Err(Error::RankDeficient { rank: 1, n: 2 })
        ));
    }

    #[test]
    fn quadratic_lipschitz_property() {
        // F(x) = (x₁ + x₂², x₂ + x₁x₂)
        let f = PolyMap::new(
            vec![&v(Param::A) + &v(Param::B).pow(2).unwrap(), &v(Param::B) + &(&v(Param::A) * &v(Param::B))],
            vec![Param::A, Param::B],
            [0.0; 5],
        )
        .unwrap();
        let c = lipschitz_constants(&f, &[0.3, -0.2]).unwrap();
        assert!(c.delta > 0.0 && c.delta <= 1.0);
        assert_eq!(property_test(&f, &[0.3, -0.2], &c, 1, 10_000, 3).violations, 0);
    }

    #[test]
    fn hessian_bound_dominates_sampled_bilinear_values() {
        let f = PolyMap::casimir(&[3, 4, 5], Representation::Rep1, Param::C, 1.0).unwrap();
        let x = [0.6, 0.5, 0.2];
        let bound = f.hessian_norm_bound(&x);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let a = DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0)).normalize();
            let b = DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0)).normalize();
            assert!(f.second_derivative(&x, &a, &b).norm() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn halton_points_stay_in_ball() {
        let pts = halton_ball(&[1.0, 2.0, 3.0], 500);
        assert_eq!(pts.len(), 500);
        assert_eq!(pts[0], vec![1.0, 2.0, 3.0]);
        for p in &pts {
            let r: f64 = p.iter().zip([1.0, 2.0, 3.0]).map(|(a, b)| (a - b) * (a - b)).sum();
            assert!(r <= 1.0);
        }
    }

    #[test]
    fn degenerate_rep2_kernel() {
        let f = PolyMap::casimir(&[3, 4, 5], Representation::Rep2, Param::C, 1.0).unwrap();
        let info = rank_and_kernel(&f.jacobian(&[0.6, 0.0, 0.8]), RANK_TOL).unwrap();
        assert_eq!(info.rank, 2);
        assert!((info.kernel[0][1].abs() - 1.0).abs() < 1e-12);
        assert!(fold_condition(&f, &[0.6, 0.0, 0.8]).unwrap().is_fold);
    }

    #[test]
    fn zonal_fold_is_uniform_in_alpha() {
        let mut etas = Vec::new();
        for i in 0..64 {
            let alpha = 2.0 * PI * i as f64 / 64.0;
            let f = PolyMap::casimir(&[3, 4], Representation::Zonal { alpha }, Param::B, 1.0).unwrap();
            for a in [1.0, -1.0] {
                let r = fold_condition(&f, &[a, 0.0]).unwrap();
                assert_eq!(r.rank, 1);
                let e = r.kernel_vector.as_ref().unwrap();
                assert!((e[1].abs() - 1.0).abs() < 1e-12);
                assert!(r.is_fold);
                etas.push(r.eta);
            }
        }
        assert!(etas.iter().cloned().fold(f64::INFINITY, f64::min) > 1e-3);
    }
}
