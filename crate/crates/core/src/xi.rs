//! Shape/placement coordinates for four agents.
//!
//! `ξ_s` holds the six pairwise cosines `(c12, c13, c14, c23, c24, c34)` and
//! `ξ_c = (φ₁, ψ₁, γ)` places the shape rigidly: `(φ₁, ψ₁)` are the RPY angles
//! of `Γ₁` and `γ` is the roll of `Γ₂` about `Γ₁`. The shape obeys a closed
//! subsystem `ξ̇_s = h(ξ_s) F̂(ξ_s)` with `F = f ∘ arccos`.

use nalgebra::{Matrix6, Vector6};

use crate::control::GainFunction;
use crate::ensemble::AttitudeEnsemble;
use crate::error::{Error, Result};
use crate::sphere::{placement_rotation, rpy_extract, UnitVec3, Vec3};

/// Below this `|Γ₁ × Γ₂|` the roll angle is set to zero.
const ROLL_SINGULAR_TOL: f64 = 1e-12;
/// Smallest `sin θ₁₂` accepted by [`reconstruct`].
const RECONSTRUCT_MIN_SIN: f64 = 1e-9;
/// Tolerance on the realizability and cosine constraints in [`reconstruct`].
const RECONSTRUCT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiCoordinates {
    pub xi_s: [f64; 6],
    pub phi1: f64,
    pub psi1: f64,
    pub gamma: f64,
}

/// `Φ(Γ)` for a four-agent ensemble.
pub fn phi_transform(state: &AttitudeEnsemble) -> Result<XiCoordinates> {
    if state.n() != 4 {
        return Err(Error::State(format!("xi coordinates need 4 agents, got {}", state.n())));
    }
    let c = state.pair_cosines();
    let xi_s = std::array::from_fn(|k| c[k].clamp(-1.0, 1.0));
    let g1 = state.agent(1);
    let g2 = state.agent(2);
    let a1 = rpy_extract(g1);
    let a2 = rpy_extract(g2);
    // Γ₂ = ±Γ₁ leaves the roll undefined
    let gamma = if g1.cross(g2).norm() < ROLL_SINGULAR_TOL {
        0.0
    } else {
        let dpsi = a2.psi - a1.psi;
        let gy = a2.phi.cos() * dpsi.sin();
        let gx = a1.phi.sin() * a2.phi.cos() * dpsi.cos() - a1.phi.cos() * a2.phi.sin();
        gy.atan2(gx)
    };
    Ok(XiCoordinates { xi_s, phi1: a1.phi, psi1: a1.psi, gamma })
}

/// Builds an ensemble with the given coordinates. `reflection` picks the sign
/// of the normalized third agent's `y` component, which equals
/// `sign det[Γ₁, Γ₂, Γ₃]` of the result.
pub fn reconstruct(xi: &XiCoordinates, reflection: i8) -> Result<AttitudeEnsemble> {
    if reflection != 1 && reflection != -1 {
        return Err(Error::State(format!("reflection must be +1 or -1, got {reflection}")));
    }
    let r = f64::from(reflection);
    let [c12, c13, c14, c23, c24, c34] = xi.xi_s;
    if xi.xi_s.iter().any(|c| !c.is_finite() || c.abs() > 1.0 + 1e-12) {
        return Err(Error::Unrealizable(format!("cosines {:?} outside [-1, 1]", xi.xi_s)));
    }
    let residual = gram_identity_residual(&xi.xi_s);
    if residual.abs() > RECONSTRUCT_TOL {
        return Err(Error::Unrealizable(format!("Gram identity residual {residual:e}")));
    }
    let s12 = (1.0 - c12 * c12).max(0.0).sqrt();
    if s12 < RECONSTRUCT_MIN_SIN {
        return Err(Error::Unrealizable("agents 1 and 2 coincide or are antipodal".into()));
    }

    let x3 = (c23 - c12 * c13) / s12;
    let rem3 = 1.0 - c13 * c13 - x3 * x3;
    if rem3 < -RECONSTRUCT_TOL {
        return Err(Error::Unrealizable(format!("agent 3 off the sphere by {rem3:e}")));
    }
    let y3 = r * rem3.max(0.0).sqrt();
    let x4 = (c24 - c12 * c14) / s12;
    let y4 = if y3.abs() > RECONSTRUCT_MIN_SIN {
        (c34 - x3 * x4 - c13 * c14) / y3
    } else {
        // agents 1, 2, 3 coplanar: the reflection branch moves to agent 4
        r * (1.0 - c14 * c14 - x4 * x4).max(0.0).sqrt()
    };
    let normalized =
        [Vec3::new(0.0, 0.0, 1.0), Vec3::new(s12, 0.0, c12), Vec3::new(x3, y3, c13), Vec3::new(x4, y4, c14)];

    for (k, v) in normalized.iter().enumerate() {
        let e = (v.norm() - 1.0).abs();
        if e > RECONSTRUCT_TOL {
            return Err(Error::Unrealizable(format!("agent {} has norm error {e:e}", k + 1)));
        }
    }
    let mut k = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            let e = (normalized[i].dot(&normalized[j]) - xi.xi_s[k]).abs();
            if e > RECONSTRUCT_TOL {
                return Err(Error::Unrealizable(format!("cosine c{}{} inconsistent by {e:e}", i + 1, j + 1)));
            }
            k += 1;
        }
    }

    let q = placement_rotation(xi.psi1, xi.phi1, xi.gamma);
    let gammas = normalized.iter().map(|v| UnitVec3::normalize(q * v)).collect::<Result<Vec<_>>>()?;
    AttitudeEnsemble::new(gammas)
}

/// The symmetric 6×6 matrix `h(ξ_s)` with `ξ̇_s = h(ξ_s) F̂(ξ_s)`.
#[rustfmt::skip]
pub fn h_matrix(xi_s: &[f64; 6]) -> Matrix6<f64> {
    let [x1, x2, x3, x4, x5, x6] = *xi_s;
    Matrix6::new(
        2.0 * x1 * x1 - 2.0, x1 * x2 - x4,        x1 * x3 - x5,        x1 * x4 - x2,        x1 * x5 - x3,        0.0,
        x1 * x2 - x4,        2.0 * x2 * x2 - 2.0, x2 * x3 - x6,        x2 * x4 - x1,        0.0,                 x2 * x6 - x3,
        x1 * x3 - x5,        x2 * x3 - x6,        2.0 * x3 * x3 - 2.0, 0.0,                 x3 * x5 - x1,        x3 * x6 - x2,
        x1 * x4 - x2,        x2 * x4 - x1,        0.0,                 2.0 * x4 * x4 - 2.0, x4 * x5 - x6,        x4 * x6 - x5,
        x1 * x5 - x3,        0.0,                 x3 * x5 - x1,        x4 * x5 - x6,        2.0 * x5 * x5 - 2.0, x5 * x6 - x4,
        0.0,                 x2 * x6 - x3,        x3 * x6 - x2,        x4 * x6 - x5,        x5 * x6 - x4,        2.0 * x6 * x6 - 2.0,
    )
}

/// `h(ξ_s) F̂(ξ_s)`; depends on the shape only.
pub fn xi_s_field(xi_s: &[f64; 6], gain: &GainFunction) -> [f64; 6] {
    let f = Vector6::from_fn(|k, _| gain.of_cosine(xi_s[k].clamp(-1.0, 1.0)));
    let out = h_matrix(xi_s) * f;
    std::array::from_fn(|k| out[k])
}

/// Left side of the four-point Gram identity minus one; zero for cosines of
/// any four unit vectors in R³.
pub fn gram_identity_residual(xi_s: &[f64; 6]) -> f64 {
    let [c12, c13, c14, c23, c24, c34] = *xi_s;
    let squares: f64 = xi_s.iter().map(|c| c * c).sum();
    let cross_squares = c14 * c14 * c23 * c23 + c13 * c13 * c24 * c24 + c12 * c12 * c34 * c34;
    let triples = c12 * c13 * c23 + c23 * c24 * c34 + c13 * c14 * c34 + c12 * c14 * c24;
    let quads = c13 * c14 * c23 * c24 + c12 * c13 * c24 * c34 + c12 * c14 * c23 * c34;
    squares - cross_squares - 2.0 * triples + 2.0 * quads - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{affine_cosine_gain, closed_loop_field, exponential_gain};
    use crate::sphere::{frame_rotation_1, sample_rotation_with, wrap_angle};
    use crate::topology::complete_graph;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn tetrahedron_shape() {
        let xi = phi_transform(&AttitudeEnsemble::reference_tetrahedron()).unwrap();
        for c in xi.xi_s {
            assert_abs_diff_eq!(c, -1.0 / 3.0, epsilon = 1e-15);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let q = sample_rotation_with(&mut rng);
            let xi = phi_transform(&AttitudeEnsemble::reference_tetrahedron().rotated(&q)).unwrap();
            for c in xi.xi_s {
                assert_abs_diff_eq!(c, -1.0 / 3.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn coincident_pair_has_zero_roll() {
        let g = UnitVec3::from_xyz(0.6, 0.0, 0.8).unwrap();
        let s = AttitudeEnsemble::new(vec![g, g, UnitVec3::e2(), -UnitVec3::e2()]).unwrap();
        assert_eq!(phi_transform(&s).unwrap().gamma, 0.0);
        let s = AttitudeEnsemble::new(vec![g, -g, UnitVec3::e2(), -UnitVec3::e2()]).unwrap();
        assert_eq!(phi_transform(&s).unwrap().gamma, 0.0);
    }

    #[test]
    fn forward_construction_is_inverted() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut checked = 0;
        while checked < 500 {
            let phi: f64 = rng.random_range(-1.4..1.4);
            let psi: f64 = rng.random_range(-3.0..3.0);
            let g0: f64 = rng.random_range(-3.0..3.0);
            let theta: f64 = rng.random_range(0.1..3.0);
            let q = placement_rotation(psi, phi, g0);
            let s = AttitudeEnsemble::from_vectors([
                q * Vec3::z(),
                q * Vec3::new(theta.sin(), 0.0, theta.cos()),
                q * Vec3::x(),
                q * Vec3::y(),
            ])
            .unwrap();
            let xi = phi_transform(&s).unwrap();
            assert_abs_diff_eq!(xi.phi1, phi, epsilon = 1e-10);
            assert_abs_diff_eq!(wrap_angle(xi.psi1 - psi), 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!(wrap_angle(xi.gamma - g0), 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!(xi.xi_s[0], theta.cos(), epsilon = 1e-12);
            checked += 1;
        }
    }

    #[test]
    fn roll_is_unchanged_by_spin_about_the_pole_before_placement() {
        // z-rotations applied before R₂ shift γ; those applied after shift ψ₁ only
        let base = placement_rotation(0.4, 0.3, 1.1);
        let s = AttitudeEnsemble::random(4, 5).unwrap();
        let xi_a = phi_transform(&s.rotated(&base)).unwrap();
        let xi_b = phi_transform(&s.rotated(&(frame_rotation_1(0.7) * base))).unwrap();
        assert_abs_diff_eq!(wrap_angle(xi_a.gamma - xi_b.gamma), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_angle(xi_b.psi1 - xi_a.psi1 - 0.7), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn reconstruct_reference_example() {
        let xi = XiCoordinates { xi_s: [-1.0 / 3.0; 6], phi1: FRAC_PI_2, psi1: 0.0, gamma: 0.0 };
        let s = reconstruct(&xi, 1).unwrap();
        assert!(crate::simulator::formation_error(&s) < 1e-14);
        assert_abs_diff_eq!(*s.agent(1).as_vec(), Vec3::z(), epsilon = 1e-15);
        assert_eq!(s.chirality(), 1);
        let m = reconstruct(&xi, -1).unwrap();
        assert_eq!(m.chirality(), -1);
        let (a, b) = (phi_transform(&s).unwrap(), phi_transform(&m).unwrap());
        for k in 0..6 {
            assert_abs_diff_eq!(a.xi_s[k], b.xi_s[k], epsilon = 1e-14);
        }
    }

    #[test]
    fn reconstruct_round_trip() {
        let mut tested = 0;
        for seed in 0..2000 {
            let s = AttitudeEnsemble::random(4, seed).unwrap();
            let xi = phi_transform(&s).unwrap();
            let s12 = (1.0 - xi.xi_s[0].powi(2)).sqrt();
            let det = s.agent(1).dot(&s.agent(2).cross(s.agent(3)));
            if s12 < 0.1 || det.abs() < 0.05 || xi.phi1.cos() < 0.05 {
                continue;
            }
            let back = reconstruct(&xi, s.chirality()).unwrap();
            assert!(back.max_distance(&s) < 1e-9, "seed {seed}: {}", back.max_distance(&s));
            let xi2 = phi_transform(&back).unwrap();
            for k in 0..6 {
                assert_abs_diff_eq!(xi2.xi_s[k], xi.xi_s[k], epsilon = 1e-9);
            }
            assert_abs_diff_eq!(xi2.phi1, xi.phi1, epsilon = 1e-9);
            assert_abs_diff_eq!(wrap_angle(xi2.psi1 - xi.psi1), 0.0, epsilon = 1e-9);
            assert_abs_diff_eq!(wrap_angle(xi2.gamma - xi.gamma), 0.0, epsilon = 1e-9);
            tested += 1;
        }
        assert!(tested > 1000);
    }

    #[test]
    fn reconstruct_rejects_bad_input() {
        let xi = XiCoordinates { xi_s: [-1.0; 6], phi1: 0.0, psi1: 0.0, gamma: 0.0 };
        assert!(matches!(reconstruct(&xi, 1), Err(Error::Unrealizable(_))));
        let xi = XiCoordinates { xi_s: [1.0; 6], phi1: 0.0, psi1: 0.0, gamma: 0.0 };
        assert!(reconstruct(&xi, 1).is_err());
        let mut xi = phi_transform(&AttitudeEnsemble::random(4, 1).unwrap()).unwrap();
        assert!(reconstruct(&xi, 0).is_err());
        xi.xi_s[5] += 0.01;
        assert!(reconstruct(&xi, 1).is_err());
    }

    #[test]
    fn gram_identity_values() {
        assert_abs_diff_eq!(gram_identity_residual(&[-1.0 / 3.0; 6]), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gram_identity_residual(&[-1.0; 6]), 16.0, epsilon = 1e-15);
        for seed in 0..1000 {
            let xi = phi_transform(&AttitudeEnsemble::random(4, seed).unwrap()).unwrap();
            assert!(gram_identity_residual(&xi.xi_s).abs() < 1e-12);
        }
    }

    #[test]
    fn shape_field_fixed_points() {
        for gain in [affine_cosine_gain(1.0).unwrap(), exponential_gain()] {
            for v in xi_s_field(&[-1.0 / 3.0; 6], &gain) {
                assert!(v.abs() < 1e-15);
            }
            for v in xi_s_field(&[1.0; 6], &gain) {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn h_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x: [f64; 6] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let h = h_matrix(&x);
            assert_eq!(h, h.transpose());
        }
    }

    fn cosine_rates(s: &AttitudeEnsemble, gain: &GainFunction) -> [f64; 6] {
        let v = closed_loop_field(s, &complete_graph(4).unwrap(), gain).unwrap();
        let g = s.gammas();
        let mut out = [0.0; 6];
        let mut k = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                out[k] = v[i].dot(&g[j]) + g[i].dot(&v[j]);
                k += 1;
            }
        }
        out
    }

    #[test]
    fn shape_field_matches_chain_rule() {
        for gain in [affine_cosine_gain(1.0).unwrap(), affine_cosine_gain(2.5).unwrap(), exponential_gain()] {
            for seed in 0..300 {
                let s = AttitudeEnsemble::random(4, seed).unwrap();
                let xi = phi_transform(&s).unwrap();
                let lhs = cosine_rates(&s, &gain);
                let rhs = xi_s_field(&xi.xi_s, &gain);
                for k in 0..6 {
                    assert_abs_diff_eq!(lhs[k], rhs[k], epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn shape_rates_ignore_placement() {
        let gain = exponential_gain();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for seed in 0..50 {
            let s = AttitudeEnsemble::random(4, seed).unwrap();
            let q = sample_rotation_with(&mut rng);
            let t = s.rotated(&q);
            let (a, b) = (phi_transform(&s).unwrap(), phi_transform(&t).unwrap());
            assert!((a.gamma - b.gamma).abs() + (a.psi1 - b.psi1).abs() > 0.0);
            let (ra, rb) = (cosine_rates(&s, &gain), cosine_rates(&t, &gain));
            for k in 0..6 {
                assert_abs_diff_eq!(ra[k], rb[k], epsilon = 1e-10);
            }
        }
    }
}
