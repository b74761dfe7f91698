use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::numeric_jacobian;
use crate::control::{rpy_closed_loop_field, GainFunction};
use crate::ensemble::reference_tetrahedron_angles;
use crate::error::Result;
use crate::sphere::RpyAngles;
use crate::xi::xi_s_field;

/// Finite-difference step used for every linearization here.
pub const FD_STEP: f64 = 1e-5;

fn theta_star() -> f64 {
    (-1.0f64 / 3.0).acos()
}

/// Eigenvalues of the RPY linearization at the reference tetrahedron, in terms
/// of `f(θ*)` and `f'(θ*)`, `θ* = arccos(-1/3)`. Sorted ascending.
pub fn zeta_spectrum_analytic(gain: &GainFunction) -> Vec<f64> {
    let f = gain.eval(theta_star());
    let fp = gain.deriv(theta_star());
    let s2 = 2f64.sqrt();
    let l12 = 2.0 * s2 * fp;
    let l345 = 4.0 * s2 / 3.0 * fp - 8.0 / 3.0 * f;
    let mut v = vec![l12, l12, l345, l345, l345, 0.0, 0.0, 0.0];
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenvalues of the shape subsystem at `ξ_s = (-1/3)×6`, in terms of
/// `F(-1/3)` and `F'(-1/3)`. Sorted ascending.
pub fn xi_s_spectrum_analytic(gain: &GainFunction) -> Vec<f64> {
    let c = -1.0 / 3.0;
    let f = gain.of_cosine(c);
    let fp = gain.of_cosine_deriv(c);
    let pair = -8.0 / 3.0 * fp;
    let triple = -8.0 / 3.0 * f - 16.0 / 9.0 * fp;
    let mut v = vec![-8.0 * f, pair, pair, triple, triple, triple];
    v.sort_by(f64::total_cmp);
    v
}

/// `ζ = (φ₁, ψ₁, …, φ₄, ψ₄)` for the given angles.
fn zeta_of(angles: &[RpyAngles]) -> Vec<f64> {
    angles.iter().flat_map(|a| [a.phi, a.psi]).collect()
}

fn rpy_field_zeta(gain: &GainFunction) -> impl Fn(&[f64]) -> Result<Vec<f64>> + '_ {
    move |z: &[f64]| {
        let angles: Vec<RpyAngles> = z.chunks(2).map(|c| RpyAngles { phi: c[0], psi: c[1] }).collect();
        Ok(rpy_closed_loop_field(&angles, gain)?.into_iter().flat_map(|(dpsi, dphi)| [dphi, dpsi]).collect())
    }
}

/// 8×8 finite-difference Jacobian of the RPY closed loop (complete graph) at
/// the reference tetrahedron, coordinates ordered `(φ₁, ψ₁, …, φ₄, ψ₄)`.
pub fn rpy_reference_jacobian(gain: &GainFunction) -> Result<DMatrix<f64>> {
    numeric_jacobian(rpy_field_zeta(gain), &zeta_of(&reference_tetrahedron_angles()), FD_STEP)
}

/// 6×6 finite-difference Jacobian of the shape field at `(-1/3)×6`.
pub fn xi_s_jacobian(gain: &GainFunction) -> Result<DMatrix<f64>> {
    let field = |x: &[f64]| Ok(xi_s_field(&[x[0], x[1], x[2], x[3], x[4], x[5]], gain).to_vec());
    numeric_jacobian(field, &[-1.0 / 3.0; 6], FD_STEP)
}

/// Equatorial cross `ψᵢ = -π + iπ/2`, `φᵢ = 0`.
fn cross_angles() -> Vec<RpyAngles> {
    (1..=4).map(|i| RpyAngles { psi: -PI + i as f64 * PI / 2.0, phi: 0.0 }).collect()
}

/// 4×4 Jacobian of `(φ̇ᵢ)` with respect to `(φⱼ)` at the equatorial cross, azimuths held fixed.
pub fn cross_out_of_plane_jacobian(gain: &GainFunction) -> Result<DMatrix<f64>> {
    let base = cross_angles();
    let field = |phi: &[f64]| {
        let angles: Vec<RpyAngles> = base.iter().zip(phi).map(|(a, &p)| RpyAngles { psi: a.psi, phi: p }).collect();
        Ok(rpy_closed_loop_field(&angles, gain)?.into_iter().map(|(_, dphi)| dphi).collect())
    };
    numeric_jacobian(field, &[0.0; 4], FD_STEP)
}

/// 4×4 Jacobian of `(ψ̇ᵢ)` with respect to `(ψⱼ)` at the equatorial cross, elevations held at zero.
pub fn cross_in_plane_jacobian(gain: &GainFunction) -> Result<DMatrix<f64>> {
    let base = cross_angles();
    let psi0: Vec<f64> = base.iter().map(|a| a.psi).collect();
    let field = |psi: &[f64]| {
        let angles: Vec<RpyAngles> = psi.iter().map(|&p| RpyAngles { psi: p, phi: 0.0 }).collect();
        Ok(rpy_closed_loop_field(&angles, gain)?.into_iter().map(|(dpsi, _)| dpsi).collect())
    };
    numeric_jacobian(field, &psi0, FD_STEP)
}
