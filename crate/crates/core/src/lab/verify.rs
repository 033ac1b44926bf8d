use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::experiment::perturb;
use super::reference as refs;
use crate::dynamics::{simulate, RHWave};
use crate::error::{Error, Result};
use crate::harmonics::{Grid, ShellSelector};
use crate::polysphere::{
    casimir_closed_form, determinant, jacobian, normalized_map, Param, ParamPoint, ParamPoly, Representation,
};
use crate::stability::{
    alpha_column_check, fold_condition, fold_constants, halton_ball, lipschitz_constants, property_test,
    rank_and_kernel, zprime_check, PolyMap, DEFAULT_SAMPLES, RANK_TOL,
};

/// Battery selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifySuite {
    Formulas,
    Jacobians,
    Folds,
    Zprime,
}

impl fmt::Display for VerifySuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerifySuite::Formulas => "formulas",
            VerifySuite::Jacobians => "jacobians",
            VerifySuite::Folds => "folds",
            VerifySuite::Zprime => "zprime",
        })
    }
}

impl FromStr for VerifySuite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "formulas" => Ok(VerifySuite::Formulas),
            "jacobians" => Ok(VerifySuite::Jacobians),
            "folds" => Ok(VerifySuite::Folds),
            "zprime" => Ok(VerifySuite::Zprime),
            other => Err(Error::Parse(format!("unknown suite '{other}'"))),
        }
    }
}

/// One hard check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suites: Vec<VerifySuite>,
    pub checks: Vec<Check>,
    /// Mismatches of transcribed closed forms that do not fail the suite.
    pub warnings: Vec<String>,
    pub passed: bool,
}

impl VerifyReport {
    fn new(suite: VerifySuite) -> Self {
        Self { suites: vec![suite], checks: Vec::new(), warnings: Vec::new(), passed: true }
    }

    /// `value ≤ tolerance`
    fn at_most(&mut self, name: &str, value: f64, tolerance: f64, detail: impl Into<String>) {
        self.push(name, value <= tolerance, value, tolerance, detail);
    }

    /// `value > tolerance`
    fn above(&mut self, name: &str, value: f64, tolerance: f64, detail: impl Into<String>) {
        self.push(name, value > tolerance, value, tolerance, detail);
    }

    fn flag(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.push(name, ok, if ok { 1.0 } else { 0.0 }, 1.0, detail);
    }

    fn push(&mut self, name: &str, passed: bool, value: f64, tolerance: f64, detail: impl Into<String>) {
        self.passed &= passed;
        self.checks.push(Check { name: name.to_string(), passed, value, tolerance, detail: detail.into() });
    }

    pub fn merge(mut self, other: VerifyReport) -> Self {
        self.suites.extend(other.suites);
        self.checks.extend(other.checks);
        self.warnings.extend(other.warnings);
        self.passed &= other.passed;
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Seed of the random points used by the suites.
pub const VERIFY_SEED: u64 = 0x005e_ed0f_ca51;

fn random_points(count: usize, seed: u64) -> Vec<ParamPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut p = [0.0; 5];
            p[0] = rng.random_range(-1.5..1.5);
            for v in &mut p[1..] {
                *v = rng.random_range(-1.0..1.0);
            }
            p
        })
        .collect()
}

/// `max |oracle − transcribed| / max(1, |oracle|)` over `points`.
fn max_rel_err(points: &[ParamPoint], oracle: impl Fn(&ParamPoint) -> f64, other: impl Fn(&ParamPoint) -> f64) -> f64 {
    points
        .iter()
        .map(|p| {
            let o = oracle(p);
            (o - other(p)).abs() / o.abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// Largest coefficient of `p` relative to that of `scale`.
fn rel_size(p: &ParamPoly, scale: &ParamPoly) -> f64 {
    p.max_abs_coeff() / scale.max_abs_coeff()
}

/// Runs one battery; `passed` is false iff a hard check fails.
pub fn verify_suite(which: VerifySuite) -> Result<VerifyReport> {
    match which {
        VerifySuite::Formulas => formulas(),
        VerifySuite::Jacobians => jacobians(),
        VerifySuite::Folds => folds(),
        VerifySuite::Zprime => zprime(),
    }
}

type Display = fn(&ParamPoint) -> f64;

fn formulas() -> Result<VerifyReport> {
    let mut r = VerifyReport::new(VerifySuite::Formulas);
    let pts = random_points(20, VERIFY_SEED);
    let tol = 1e-10;
    let cases: [(&str, Representation, usize, Display); 6] = [
        ("rep1_C3", Representation::Rep1, 3, refs::rep1_c3),
        ("rep1_C4", Representation::Rep1, 4, refs::rep1_c4),
        ("rep1_C5", Representation::Rep1, 5, refs::rep1_c5),
        ("rep2_C3", Representation::Rep2, 3, refs::rep2_c3),
        ("rep2_C4", Representation::Rep2, 4, refs::rep2_c4),
        ("rep2_C5", Representation::Rep2, 5, refs::rep2_c5),
    ];
    for (name, rep, k, display) in cases {
        let poly = casimir_closed_form(k, rep)?;
        let err = max_rel_err(&pts, |p| poly.eval(p), display);
        r.at_most(name, err, tol, format!("{rep} C{k} closed form vs exact integration at 20 points"));
    }
    let c4 = casimir_closed_form(4, Representation::Rep1)?;
    let err = max_rel_err(&pts, |p| c4.eval(p), refs::rep1_c4_as_transcribed);
    if err > tol {
        r.warnings.push(format!(
            "rep1 C4 as transcribed carries the Omega^4 term 4*pi*Omega^4; exact integration gives \
             4*pi*Omega^4/5 (max relative mismatch {err:.3e})"
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED + 1);
    let mut zerr: f64 = 0.0;
    for p in &pts {
        let alpha = rng.random_range(0.0..2.0 * PI);
        let rep = Representation::Zonal { alpha };
        let c3 = casimir_closed_form(3, rep)?.eval(p);
        let c4 = casimir_closed_form(4, rep)?.eval(p);
        zerr = zerr.max((c3 - refs::zonal_c3(p, alpha)).abs() / c3.abs().max(1.0));
        zerr = zerr.max((c4 - refs::zonal_c4(p)).abs() / c4.abs().max(1.0));
    }
    r.at_most("zonal_C3_C4", zerr, tol, "zonal-angle representation, random alpha");

    let zero_omega = |p: ParamPoly| p.substitute(Param::Omega, &ParamPoly::zero());
    let cubic = zero_omega(casimir_closed_form(3, Representation::Canonical)?);
    let err = max_rel_err(&pts, |p| cubic.eval(p), |p| refs::canonical_c3(p[1], p[2]));
    r.at_most("canonical_C3", err, tol, "C3 of A Y20 + B Y22");
    let one_minus_a2 = &ParamPoly::constant(1.0) - &ParamPoly::var(Param::A).pow(2)?;
    let f = cubic.substitute_square(Param::B, &one_minus_a2)?;
    let fp = f.partial(Param::A);
    let err_f = max_rel_err(&pts, |p| f.eval(p), |p| refs::canonical_f(p[1]));
    let err_fp = max_rel_err(&pts, |p| fp.eval(p), |p| refs::canonical_f_prime(p[1]));
    r.at_most("canonical_F", err_f, tol, "C3 on A^2 + B^2 = 1");
    r.at_most("canonical_F_prime", err_fp, tol, "derivative of the reduced cubic");
    // F' = c₂A² + c₀ has its roots at A² = −c₀/c₂
    let c2 = fp.coeff([0, 2, 0, 0, 0]);
    let c0 = fp.coeff([0; 5]);
    let only_even = fp.len() == 2 && c2 != 0.0;
    let root_sq = -c0 / c2;
    r.at_most(
        "F_prime_root",
        if only_even { (root_sq - 0.25).abs() } else { f64::INFINITY },
        1e-14,
        format!("F' vanishes only at A^2 = {root_sq}"),
    );
    Ok(r)
}

/// `det ∇_{A,B,D} G` for Casimirs `ks` in representation 1, `C` eliminated.
pub fn rep1_determinant(ks: &[usize]) -> Result<ParamPoly> {
    let map = normalized_map(ks, Representation::Rep1, Param::C)?;
    determinant(&jacobian(&map, &[Param::A, Param::B, Param::D]))
}

fn jacobians() -> Result<VerifyReport> {
    let mut r = VerifyReport::new(VerifySuite::Jacobians);
    let det = rep1_determinant(&[3, 4, 5])?;
    let pts = random_points(20, VERIFY_SEED + 2);
    let scale = pts.iter().map(|p| det.eval(p).abs()).fold(1.0, f64::max);
    let err = pts.iter().map(|p| (det.eval(p) - refs::det_rep1_c345(p)).abs()).fold(0.0, f64::max) / scale;
    r.at_most("det_rep1_C345_formula", err, 1e-10, "determinant closed form at 20 points");

    let at_b0 = det.substitute(Param::B, &ParamPoly::zero());
    r.at_most("det_vanishes_B0", rel_size(&at_b0, &det), 1e-9, "det restricted to B = 0");
    let omega_c = refs::critical_omega_sq().sqrt();
    let at_omega = det.substitute(Param::Omega, &ParamPoly::constant(omega_c));
    r.at_most("det_vanishes_critical_omega", rel_size(&at_omega, &det), 1e-9, "Omega^2 = 15/(44 pi)");
    let stray = det
        .terms()
        .filter(|(e, _)| e[Param::A.index()] != 0 || e[Param::D.index()] != 0 || e[Param::B.index()] != 3)
        .map(|(_, c)| c.abs())
        .fold(0.0, f64::max)
        / det.max_abs_coeff();
    r.at_most("det_over_B3_independent_of_A_D", stray, 1e-9, "every term is B^3 times a polynomial in Omega");

    // alternative Casimir triples at the critical rotation rate
    let mut alts = Vec::new();
    for k in [6, 7, 8, 9] {
        let d = rep1_determinant(&[3, 4, k])?.substitute(Param::Omega, &ParamPoly::constant(omega_c));
        let sample = random_points(20, VERIFY_SEED + 3);
        let s = sample.iter().map(|p| d.eval(p).abs()).fold(0.0, f64::max);
        let mismatch = sample
            .iter()
            .map(|p| (d.eval(p) - refs::det_alternative(k, p[1], p[2], p[4]).unwrap_or(f64::NAN)).abs())
            .fold(0.0, f64::max)
            / s;
        if !(mismatch <= 1e-8) {
            r.warnings.push(format!(
                "transcribed det for {{C3, C4, C{k}}} differs from the exact determinant (relative {mismatch:.3e})"
            ));
        }
        alts.push(d);
    }
    let ball = halton_ball(&[0.0, 0.0, 0.0], 20_000);
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for x in &ball {
        if x[1].abs() < 0.1 {
            continue;
        }
        count += 1;
        let p = [omega_c, x[0], x[1], 0.0, x[2]];
        let score = alts.iter().map(|d| d.eval(&p).abs() / d.max_abs_coeff()).fold(0.0, f64::max);
        worst = worst.min(score);
    }
    r.above(
        "alternative_dets_no_common_zero",
        worst,
        1e-8,
        format!("min over {count} points with |B| >= 0.1 of max_k |det_k| / scale"),
    );

    let g = PolyMap::casimir(&[3, 4, 5], Representation::Rep1, Param::C, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED + 4);
    let mut max_rank = 0;
    for _ in 0..20 {
        let t: f64 = rng.random_range(0.0..2.0 * PI);
        let rad: f64 = rng.random_range(0.1..1.0);
        let info = rank_and_kernel(&g.jacobian(&[rad * t.cos(), 0.0, rad * t.sin()]), RANK_TOL)?;
        max_rank = max_rank.max(info.rank);
    }
    r.flag("rep1_rank_at_B0", max_rank <= 2, format!("largest SVD rank on B = 0 is {max_rank}"));
    let info = rank_and_kernel(&g.jacobian(&[0.6, 0.8, 0.0]), RANK_TOL)?;
    r.flag("rep1_full_rank", info.rank == 3, format!("rank {} at (0.6, 0.8, 0)", info.rank));

    let g2 = PolyMap::casimir(&[3, 4, 5], Representation::Rep2, Param::C, 1.0)?;
    let info = rank_and_kernel(&g2.jacobian(&[0.6, 0.0, 0.8]), RANK_TOL)?;
    let kernel_b = info.kernel.len() == 1 && (info.kernel[0][1].abs() - 1.0).abs() < 1e-10;
    r.flag("rep2_degenerate_rank", info.rank == 2 && kernel_b, format!("rank {}, kernel along B", info.rank));

    let mut ok = true;
    for alpha in [0.0, 0.7, 2.0] {
        let z = PolyMap::casimir(&[3, 4], Representation::Zonal { alpha }, Param::B, 1.0)?;
        for a in [1.0, -1.0] {
            let info = rank_and_kernel(&z.jacobian(&[a, 0.0]), RANK_TOL)?;
            ok &= info.rank == 1 && info.kernel.len() == 1 && (info.kernel[0][1].abs() - 1.0).abs() < 1e-10;
        }
    }
    r.flag("zonal_rank_one", ok, "(A, D) = (+-1, 0), kernel along D");

    let mut worst: f64 = 0.0;
    for i in 0..64 {
        let beta = rng.random_range(-PI / 2.0..PI / 2.0);
        let omega = rng.random_range(-2.0..2.0);
        let gamma = if i % 2 == 0 { 0.0 } else { PI };
        let alpha = rng.random_range(0.0..2.0 * PI);
        for k in 3..=6 {
            worst = worst.max(alpha_column_check(omega, beta, gamma, alpha, &[k])?);
        }
    }
    r.at_most("alpha_column_vanishes", worst, 1e-8, "64 (beta, Omega) samples, sin(gamma) = 0, C3..C6");
    let generic = alpha_column_check(1.0, 0.3, PI / 4.0, 0.4, &[3, 4, 5])?;
    r.above("alpha_column_generic", generic, 1e-3, "beta = 0.3, gamma = pi/4, alpha = 0.4");
    Ok(r)
}

fn folds() -> Result<VerifyReport> {
    let mut r = VerifyReport::new(VerifySuite::Folds);
    let n = DEFAULT_SAMPLES;

    let g = PolyMap::casimir(&[3, 4, 5], Representation::Rep1, Param::C, 1.0)?;
    let x = [0.6, 0.8, 0.0];
    let c = lipschitz_constants(&g, &x)?;
    let p = property_test(&g, &x, &c, 1, n, VERIFY_SEED);
    r.flag(
        "lipschitz_rep1",
        p.violations == 0,
        format!("delta {:.3e}, C {:.3e}, {} of {n} samples violate", c.delta, c.c, p.violations),
    );

    let g2 = PolyMap::casimir(&[3, 4, 5], Representation::Rep2, Param::C, 1.0)?;
    let x = [0.6, 0.0, 0.8];
    let fold = fold_condition(&g2, &x)?;
    r.flag("fold_rep2", fold.is_fold, format!("eta {:.3e}, lambda {:.3e}", fold.eta, fold.lambda));
    if fold.is_fold {
        let c = fold_constants(&g2, &x)?;
        let p = property_test(&g2, &x, &c, 2, n, VERIFY_SEED + 1);
        r.flag(
            "fold_property_rep2",
            p.violations == 0,
            format!("delta {:.3e}, C {:.3e}, {} violations", c.delta, c.c, p.violations),
        );
    }

    let mut min_eta = f64::INFINITY;
    let mut all_fold = true;
    for i in 0..64 {
        let alpha = 2.0 * PI * i as f64 / 64.0;
        let z = PolyMap::casimir(&[3, 4], Representation::Zonal { alpha }, Param::B, 1.0)?;
        for a in [1.0, -1.0] {
            let f = fold_condition(&z, &[a, 0.0])?;
            all_fold &= f.is_fold;
            min_eta = min_eta.min(f.eta);
            if i % 16 == 0 {
                let c = fold_constants(&z, &[a, 0.0])?;
                let p = property_test(&z, &[a, 0.0], &c, 2, n, VERIFY_SEED + i as u64);
                r.flag(
                    &format!("fold_property_zonal_alpha{i}_A{a}"),
                    p.violations == 0,
                    format!("delta {:.3e}, C {:.3e}, {} violations", c.delta, c.c, p.violations),
                );
            }
        }
    }
    r.flag("zonal_fold_all_alpha", all_fold, "64 angles, A = +-1");
    r.above("zonal_eta_uniform", min_eta, 1e-3, "min eta over the 64 angles");

    // fold coverage away from the zonal case
    let omegas = [0.3, 1.0, refs::critical_omega_sq_degenerate().sqrt()];
    let triples: [&[usize]; 3] = [&[3, 4, 5], &[3, 4, 6], &[3, 4, 7]];
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED + 5);
    let mut uncovered = 0;
    let mut c345_at_critical = 0;
    for &omega in &omegas {
        let maps: Vec<PolyMap> = triples
            .iter()
            .map(|ks| PolyMap::casimir(ks, Representation::Rep2, Param::C, omega))
            .collect::<Result<_>>()?;
        for _ in 0..100 {
            let t: f64 = loop {
                let t = rng.random_range(0.0..2.0 * PI);
                if t.cos().abs() < 1.0 - 1e-6 {
                    break t;
                }
            };
            let x = [t.cos(), 0.0, t.sin()];
            let folds: Vec<bool> =
                maps.iter().map(|m| fold_condition(m, &x).map(|f| f.is_fold)).collect::<Result<_>>()?;
            if !folds.iter().any(|&f| f) {
                uncovered += 1;
            }
            if omega == omegas[2] && folds[0] {
                c345_at_critical += 1;
            }
        }
    }
    r.flag("fold_coverage", uncovered == 0, format!("{uncovered} of 300 points without a fold map"));
    if c345_at_critical > 0 {
        r.warnings.push(format!(
            "{{C3, C4, C5}} still gives a fold at {c345_at_critical} of 100 points with Omega^2 = 15/(176 pi)"
        ));
    }

    let nf = PolyMap::new(
        vec![ParamPoly::var(Param::A), ParamPoly::var(Param::B).pow(2)?],
        vec![Param::A, Param::B],
        [0.0; 5],
    )?;
    let c = fold_constants(&nf, &[0.0, 0.0])?;
    let p = property_test(&nf, &[0.0, 0.0], &c, 2, n, VERIFY_SEED);
    r.flag("fold_normal_form", p.violations == 0 && (c.c - 4.0).abs() < 1e-12, format!("C {}", c.c));
    Ok(r)
}

fn zprime() -> Result<VerifyReport> {
    let mut r = VerifyReport::new(VerifySuite::Zprime);
    let lmax = 16;
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED + 6);
    let mut c2: [f64; 5] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let n = c2.iter().map(|x| x * x).sum::<f64>().sqrt();
    c2.iter_mut().for_each(|x| *x /= n);
    let w = RHWave::degree2(1.0, c2);
    let eps = 0.1;
    let omega0 = perturb(&w.state(0.0, lmax), eps, ShellSelector::AtLeast(3), VERIFY_SEED)?;
    let grid = Grid::build(lmax, true)?;
    let traj = simulate(&omega0, 5.0, 1e-3, 50, &grid)?;
    let z = zprime_check(&traj, Some(eps))?;
    r.flag(
        "zprime_ratio_band",
        z.passes,
        format!("ratios in [{:.4}, {:.4}] over {} samples", z.min_ratio, z.max_ratio, z.samples),
    );
    r.flag("zprime_sqrt2_eps", z.within_sqrt2_eps == Some(true), format!("max norm {:.4e}", z.max_norm));
    Ok(r)
}
