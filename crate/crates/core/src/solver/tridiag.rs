//! Thomas elimination for tridiagonal systems.

use crate::error::{Error, Result};

/// Solves `A x = rhs` where row `k` of `A` is
/// `lower[k] x[k-1] + diag[k] x[k] + upper[k] x[k+1]`.
///
/// All four slices have the same length; `lower[0]` and `upper[n-1]` are
/// ignored. No pivoting is done, so the matrix should be diagonally dominant.
pub fn tridiagonal_solve(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>> {
    solve(lower, diag, upper, rhs, false)
}

/// As [`tridiagonal_solve`], but any pivot that is not strictly positive is an
/// error. The viscous operator is an M-matrix, so this catches loss of
/// ellipticity rather than just exact singularity.
pub(crate) fn tridiagonal_solve_positive(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>> {
    solve(lower, diag, upper, rhs, true)
}

fn solve(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
    positive: bool,
) -> Result<Vec<f64>> {
    let n = diag.len();
    for len in [lower.len(), upper.len(), rhs.len()] {
        if len != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: len,
            });
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let bad = |p: f64| !p.is_finite() || p == 0.0 || (positive && p < 0.0);

    let mut c = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut pivot = diag[0];
    if bad(pivot) {
        return Err(Error::Pivot { row: 0, pivot });
    }
    c[0] = upper[0] / pivot;
    x[0] = rhs[0] / pivot;
    for k in 1..n {
        pivot = diag[k] - lower[k] * c[k - 1];
        if bad(pivot) {
            return Err(Error::Pivot { row: k, pivot });
        }
        c[k] = if k + 1 < n { upper[k] / pivot } else { 0.0 };
        x[k] = (rhs[k] - lower[k] * x[k - 1]) / pivot;
    }
    for k in (0..n - 1).rev() {
        x[k] -= c[k] * x[k + 1];
    }
    Ok(x)
}
