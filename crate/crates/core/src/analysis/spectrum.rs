use nalgebra::{Complex, DMatrix, Schur};
use serde::Serialize;

use crate::error::{Error, Result};

/// Central-difference Jacobian of `field` at `point`.
pub fn numeric_jacobian(field: impl Fn(&[f64]) -> Result<Vec<f64>>, point: &[f64], h: f64) -> Result<DMatrix<f64>> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Numerical(format!("step must be positive, got {h}")));
    }
    let n = point.len();
    let f0 = field(point)?;
    let m = f0.len();
    let mut jac = DMatrix::zeros(m, n);
    let mut x = point.to_vec();
    for k in 0..n {
        x[k] = point[k] + h;
        let fp = field(&x)?;
        x[k] = point[k] - h;
        let fm = field(&x)?;
        x[k] = point[k];
        if fp.len() != m || fm.len() != m {
            return Err(Error::Numerical("field changed output dimension".into()));
        }
        for i in 0..m {
            let d = (fp[i] - fm[i]) / (2.0 * h);
            if !d.is_finite() {
                return Err(Error::Numerical(format!("non-finite field value along coordinate {k}")));
            }
            jac[(i, k)] = d;
        }
    }
    Ok(jac)
}

/// Eigenvalues of a dense square matrix.
///
/// Matrices symmetric to within `1e-9` of their scale (finite-difference
/// Jacobians of gradient-like fields) are symmetrized and solved with the
/// symmetric eigensolver. Otherwise a real Schur decomposition is used with a
/// capped QR iteration whose tolerance is relaxed step by step, since noisy
/// clustered spectra can stall it at machine precision.
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    if !a.is_square() {
        return Err(Error::Numerical(format!("eigenvalues of a {}x{} matrix", a.nrows(), a.ncols())));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    let scale = a.abs().max().max(f64::MIN_POSITIVE);
    let at = a.transpose();
    if (a - &at).abs().max() <= 1e-9 * scale {
        let sym = (a + at) * 0.5;
        return Ok(sym.symmetric_eigenvalues().iter().map(|&x| Complex::new(x, 0.0)).collect());
    }
    for eps in [f64::EPSILON, 1e-14, 1e-13, 1e-12] {
        if let Some(schur) = Schur::try_new(a.clone(), eps * scale, 10_000) {
            return Ok(schur.complex_eigenvalues().iter().copied().collect());
        }
    }
    Err(Error::Numerical("Schur iteration did not converge".into()))
}

/// Analytic eigenvalues paired against numeric ones.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    /// Sorted ascending.
    pub analytic: Vec<f64>,
    /// `(re, im)`, reordered to line up with `analytic`.
    pub numeric: Vec<(f64, f64)>,
    pub max_error: f64,
    pub max_imag: f64,
    pub matched: bool,
}

/// Pairs each analytic value (ascending) with the nearest unused numeric
/// eigenvalue (numeric sorted by real part) and reports the worst distance.
pub fn compare_spectra(analytic: &[f64], numeric: &[Complex<f64>], tol: f64) -> SpectrumReport {
    let mut a = analytic.to_vec();
    a.sort_by(f64::total_cmp);
    let mut pool = numeric.to_vec();
    pool.sort_by(|x, y| x.re.total_cmp(&y.re));
    let mut used = vec![false; pool.len()];
    let mut paired = Vec::with_capacity(a.len());
    let mut max_error: f64 = 0.0;
    for &v in &a {
        let best = pool
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .min_by(|(_, x), (_, y)| (*x - v).norm().total_cmp(&(*y - v).norm()));
        match best {
            Some((k, z)) => {
                used[k] = true;
                max_error = max_error.max((z - v).norm());
                paired.push((z.re, z.im));
            }
            None => max_error = f64::INFINITY,
        }
    }
    let max_imag = numeric.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let matched = a.len() == numeric.len() && max_error < tol && max_imag < tol;
    SpectrumReport { analytic: a, numeric: paired, max_error, max_imag, matched }
}
