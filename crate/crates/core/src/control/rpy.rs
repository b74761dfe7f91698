//! The closed loop written in RPY coordinates, for the complete unweighted graph:
//!
//! ```text
//! cos φᵢ ψ̇ᵢ = Σⱼ f(θᵢⱼ) sin(ψᵢ - ψⱼ) cos φⱼ
//!       φ̇ᵢ = Σⱼ f(θᵢⱼ) [sin φᵢ cos φⱼ cos(ψⱼ - ψᵢ) - cos φᵢ sin φⱼ]
//! cos θᵢⱼ = cos φᵢ cos φⱼ cos(ψᵢ - ψⱼ) + sin φᵢ sin φⱼ
//! ```
//!
//! Used as an independent cross-check of the Cartesian field and for
//! linearization; not used for integration.

use super::GainFunction;
use crate::error::{Error, Result};
use crate::sphere::{RpyAngles, Vec3};

/// `|cos φ|` below which the chart is treated as singular.
pub const CHART_SINGULAR_TOL: f64 = 1e-9;

/// Returns `(ψ̇ᵢ, φ̇ᵢ)` for every agent.
///
/// Angles are used as given, so `ψ` may lie outside `[-π, π)` (useful when
/// differencing across the branch cut).
pub fn rpy_closed_loop_field(angles: &[RpyAngles], gain: &GainFunction) -> Result<Vec<(f64, f64)>> {
    let n = angles.len();
    let trig: Vec<(f64, f64, f64)> = angles
        .iter()
        .map(|a| {
            let (sf, cf) = a.phi.sin_cos();
            (a.psi, sf, cf)
        })
        .collect();
    for (i, t) in trig.iter().enumerate() {
        if t.2.abs() < CHART_SINGULAR_TOL {
            return Err(Error::SingularChart { agent: i + 1, cos_phi: t.2 });
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (psi_i, sf_i, cf_i) = trig[i];
        let mut psi_rate = 0.0;
        let mut phi_rate = 0.0;
        for (j, &(psi_j, sf_j, cf_j)) in trig.iter().enumerate() {
            if j == i {
                continue;
            }
            let cos_theta = cf_i * cf_j * (psi_i - psi_j).cos() + sf_i * sf_j;
            let theta = cos_theta.clamp(-1.0, 1.0).acos();
            let f = gain.eval(theta);
            psi_rate += f * (psi_i - psi_j).sin() * cf_j;
            phi_rate += f * (sf_i * cf_j * (psi_j - psi_i).cos() - cf_i * sf_j);
        }
        out.push((psi_rate / cf_i, phi_rate));
    }
    Ok(out)
}

/// Chart velocity `(ψ̇, φ̇)` of a Cartesian tangent vector `v` at `angles`.
/// Requires `cos φ` away from zero.
pub fn rpy_chart_velocity(angles: &RpyAngles, v: &Vec3) -> (f64, f64) {
    let (sp, cp) = angles.psi.sin_cos();
    let (sf, cf) = angles.phi.sin_cos();
    let e_psi = Vec3::new(-sp, cp, 0.0);
    let e_phi = Vec3::new(-cp * sf, -sp * sf, cf);
    (v.dot(&e_psi) / cf, v.dot(&e_phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{affine_cosine_gain, closed_loop_field, exponential_gain};
    use crate::ensemble::{reference_tetrahedron_angles, AttitudeEnsemble};
    use crate::sphere::rpy_extract;
    use crate::topology::complete_graph;
    use approx::assert_abs_diff_eq;

    #[test]
    fn reference_point_is_stationary() {
        let angles = reference_tetrahedron_angles();
        for gain in [affine_cosine_gain(1.0).unwrap(), exponential_gain()] {
            for (dpsi, dphi) in rpy_closed_loop_field(&angles, &gain).unwrap() {
                assert!(dpsi.abs() < 1e-14 && dphi.abs() < 1e-14, "{dpsi} {dphi}");
            }
        }
    }

    #[test]
    fn pole_is_singular() {
        let mut angles = reference_tetrahedron_angles().to_vec();
        angles[2] = RpyAngles { psi: 0.3, phi: std::f64::consts::FRAC_PI_2 };
        let err = rpy_closed_loop_field(&angles, &exponential_gain()).unwrap_err();
        assert!(matches!(err, Error::SingularChart { agent: 3, .. }));
    }

    #[test]
    fn agrees_with_cartesian_pushforward() {
        let topo = complete_graph(4).unwrap();
        let gain = affine_cosine_gain(0.7).unwrap();
        for seed in 0..200 {
            let state = AttitudeEnsemble::random(4, seed).unwrap();
            let angles: Vec<_> = state.gammas().iter().map(rpy_extract).collect();
            if angles.iter().any(|a| a.phi.cos() < 1e-3) {
                continue;
            }
            let rpy = rpy_closed_loop_field(&angles, &gain).unwrap();
            let cart = closed_loop_field(&state, &topo, &gain).unwrap();
            for ((a, v), (dpsi, dphi)) in angles.iter().zip(&cart).zip(&rpy) {
                let (sp, cp) = a.psi.sin_cos();
                let (sf, cf) = a.phi.sin_cos();
                let e_psi = Vec3::new(-sp, cp, 0.0);
                let e_phi = Vec3::new(-cp * sf, -sp * sf, cf);
                let (u, w) = rpy_chart_velocity(a, v);
                assert_abs_diff_eq!(u, *dpsi, epsilon = 1e-10);
                assert_abs_diff_eq!(w, *dphi, epsilon = 1e-10);
                let rebuilt = e_psi * (dpsi * cf) + e_phi * *dphi;
                assert_abs_diff_eq!(rebuilt, *v, epsilon = 1e-10);
            }
        }
    }
}
