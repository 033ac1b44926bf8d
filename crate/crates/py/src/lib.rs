//! Python bindings for `rhlab`.
//!
//! Reports cross the boundary as JSON text; fields and trajectories as plain
//! lists or CSV text in the same schemas the CLI writes.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rhlab::dynamics::{simulate, RHWave};
use rhlab::lab::{perturb, run_experiment as run, verify_suite, ExperimentConfig, VerifySuite};
use rhlab::polysphere::{casimir_closed_form, Param, Representation};
use rhlab::reduction::canonical_zonal_form;
use rhlab::stability::{analyze_point as analyze, fit_exponent as fit, PolyMap};
use rhlab::{Grid, ShellSelector};

fn py_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn param(name: &str) -> PyResult<Param> {
    match name {
        "Omega" => Ok(Param::Omega),
        "A" => Ok(Param::A),
        "B" => Ok(Param::B),
        "C" => Ok(Param::C),
        "D" => Ok(Param::D),
        other => Err(py_err(format!("unknown parameter '{other}'"))),
    }
}

/// `C_k` of a low-mode representation at `[Omega, A, B, C, D]`.
#[pyfunction]
fn casimir(k: usize, rep: &str, point: [f64; 5]) -> PyResult<f64> {
    let rep: Representation = rep.parse().map_err(py_err)?;
    Ok(casimir_closed_form(k, rep).map_err(py_err)?.eval(&point))
}

/// `C_k` of a low-mode representation as a polynomial in `Omega, A..D`.
#[pyfunction]
fn casimir_polynomial(k: usize, rep: &str) -> PyResult<String> {
    let rep: Representation = rep.parse().map_err(py_err)?;
    Ok(casimir_closed_form(k, rep).map_err(py_err)?.pruned(1e-14).to_string())
}

/// `(A, B)` with `omega(Rx) = A Y20 + B Y22`.
#[pyfunction]
fn canonical_form(shell2: [f64; 5]) -> (f64, f64) {
    let c = canonical_zonal_form(&shell2);
    (c.a, c.b)
}

/// Coefficients of the degree-2 wave at time `t`, indexed `l^2 - 1 + (m + l)`.
#[pyfunction]
fn rh_state(omega_rot: f64, shell2: [f64; 5], t: f64, lmax: usize) -> Vec<f64> {
    RHWave::degree2(omega_rot, shell2).state(t, lmax).coeffs().to_vec()
}

/// Integrates a degree-2 wave, perturbed by `eps` on `shells` when given,
/// and returns `trajectory.csv` text.
#[pyfunction]
#[pyo3(signature = (omega_rot, shell2, t_end, dt, lmax, sample_every, eps=None, shells=">=1", seed=0))]
#[allow(clippy::too_many_arguments)]
fn simulate_rh(
    py: Python<'_>,
    omega_rot: f64,
    shell2: [f64; 5],
    t_end: f64,
    dt: f64,
    lmax: usize,
    sample_every: usize,
    eps: Option<f64>,
    shells: &str,
    seed: u64,
) -> PyResult<String> {
    let shells: ShellSelector = shells.parse().map_err(py_err)?;
    py.detach(|| {
        let base = RHWave::degree2(omega_rot, shell2).state(0.0, lmax);
        let omega0 = match eps {
            Some(e) => perturb(&base, e, shells, seed)?,
            None => base,
        };
        let grid = Grid::build(lmax, true)?;
        Ok(simulate(&omega0, t_end, dt, sample_every, &grid)?.to_csv_string())
    })
    .map_err(|e: rhlab::Error| py_err(e))
}

/// Runs an experiment from `key = value` configuration text and returns
/// `report.json` text.
#[pyfunction]
#[pyo3(signature = (config, write=false))]
fn run_experiment(py: Python<'_>, config: &str, write: bool) -> PyResult<String> {
    let cfg = ExperimentConfig::parse(config).map_err(py_err)?;
    let report = py.detach(|| run(&cfg, write)).map_err(py_err)?;
    serde_json::to_string(&report).map_err(py_err)
}

/// One of `formulas`, `jacobians`, `folds`, `zprime`; JSON report.
#[pyfunction]
fn verify(py: Python<'_>, suite: &str) -> PyResult<String> {
    let suite: VerifySuite = suite.parse().map_err(py_err)?;
    let report = py.detach(|| verify_suite(suite)).map_err(py_err)?;
    serde_json::to_string(&report).map_err(py_err)
}

/// `(slope, intercept, residual)` of `log dist` against `log eps`.
#[pyfunction]
fn fit_exponent(eps: Vec<f64>, dist: Vec<f64>) -> PyResult<(f64, f64, f64)> {
    let f = fit(&eps, &dist).map_err(py_err)?;
    Ok((f.slope, f.intercept, f.residual))
}

/// Rank, fold data and inverse-function constants of the Casimir map `ks`
/// at `x0`; JSON report.
#[pyfunction]
#[pyo3(signature = (ks, rep, eliminated, omega, x0, samples=10_000, seed=0))]
fn analyze_point(
    py: Python<'_>,
    ks: Vec<usize>,
    rep: &str,
    eliminated: &str,
    omega: f64,
    x0: Vec<f64>,
    samples: usize,
    seed: u64,
) -> PyResult<String> {
    let rep: Representation = rep.parse().map_err(py_err)?;
    let map = PolyMap::casimir(&ks, rep, param(eliminated)?, omega).map_err(py_err)?;
    let report = py.detach(|| analyze("python", &map, &x0, samples, seed)).map_err(py_err)?;
    serde_json::to_string(&report).map_err(py_err)
}

#[pymodule]
pub fn rhlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(casimir, m)?)?;
    m.add_function(wrap_pyfunction!(casimir_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_form, m)?)?;
    m.add_function(wrap_pyfunction!(rh_state, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_rh, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(fit_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_point, m)?)?;
    Ok(())
}
