use nalgebra::DMatrix;

use crate::error::{Error, Result};

const STRUCTURE_TOL: f64 = 1e-12;

/// The exchange matrix `J`: ones on the counterdiagonal.
pub fn exchange_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i + j == n - 1 { 1.0 } else { 0.0 })
}

/// All-ones `E_n`.
pub fn ones_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_element(n, n, 1.0)
}

/// `Λ_n = E_n - J`.
pub fn lambda_matrix(n: usize) -> Result<DMatrix<f64>> {
    if n < 2 {
        return Err(Error::State(format!("Lambda_n needs n >= 2, got {n}")));
    }
    Ok(ones_matrix(n) - exchange_matrix(n))
}

/// `{n - 1} ∪ {(-1)^i : i = 2..n}`, sorted ascending.
pub fn lambda_spectrum_analytic(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::State(format!("Lambda_n needs n >= 2, got {n}")));
    }
    let mut v: Vec<f64> =
        std::iter::once((n - 1) as f64).chain((2..=n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })).collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// `A = J Aᵀ J` within `1e-12`.
pub fn is_persymmetric(a: &DMatrix<f64>) -> bool {
    if !a.is_square() {
        return false;
    }
    let j = exchange_matrix(a.nrows());
    (a - &j * a.transpose() * &j).abs().max() <= STRUCTURE_TOL
}

/// `AJ = JA` within `1e-12`.
pub fn commutes_with_exchange(a: &DMatrix<f64>) -> bool {
    if !a.is_square() {
        return false;
    }
    let j = exchange_matrix(a.nrows());
    (a * &j - &j * a).abs().max() <= STRUCTURE_TOL
}
