//! Jacobians and determinants of polynomial maps.

use super::{Param, ParamPoint, ParamPoly};
use crate::error::{invalid, Result};

/// Row-major matrix of polynomials.
pub type PolyMatrix = Vec<Vec<ParamPoly>>;

/// `J[i][j] = ∂ map[i] / ∂ vars[j]`.
pub fn jacobian(map: &[ParamPoly], vars: &[Param]) -> PolyMatrix {
    map.iter().map(|f| vars.iter().map(|&v| f.partial(v)).collect()).collect()
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &PolyMatrix) -> Result<ParamPoly> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return invalid("determinant of a non-square matrix");
    }
    if n == 0 {
        return Ok(ParamPoly::constant(1.0));
    }
    Ok(cofactor(m, &(0..n).collect::<Vec<_>>(), 0))
}

fn cofactor(m: &PolyMatrix, cols: &[usize], row: usize) -> ParamPoly {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut out = ParamPoly::zero();
    for (i, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = &m[row][c] * &cofactor(m, &rest, row + 1);
        out = if i % 2 == 0 { &out + &term } else { &out - &term };
    }
    out
}

/// Numeric value of a polynomial matrix.
pub fn eval_matrix(m: &PolyMatrix, point: &ParamPoint) -> Vec<Vec<f64>> {
    m.iter().map(|row| row.iter().map(|p| p.eval(point)).collect()).collect()
}
