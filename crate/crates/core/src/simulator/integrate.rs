use serde::{Deserialize, Serialize};

use crate::control::{angular_velocities_unchecked, GainFunction};
use crate::ensemble::AttitudeEnsemble;
use crate::error::{Error, Result};
use crate::sphere::{exp_so3, UnitVec3, Vec3};
use crate::topology::WeightedTopology;

/// Exponential-map integrators on `(S²)ⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    /// `Γᵢ ← exp(dt ω̂ᵢ(Γ)) Γᵢ`.
    GeometricEuler,
    /// Classical four-stage weights applied to angular velocities frozen at
    /// exponentially updated intermediate states.
    #[default]
    GeometricRk4,
}

/// `exp(ŵᵢ) Γᵢ` for every agent.
fn flow(state: &AttitudeEnsemble, omegas: &[Vec3], scale: f64) -> AttitudeEnsemble {
    let gammas = state
        .gammas()
        .iter()
        .zip(omegas)
        .map(|(g, w)| UnitVec3::new_unchecked(exp_so3(&(w * scale)) * g.as_vec()))
        .collect();
    AttitudeEnsemble::from_unit_unchecked(gammas)
}

pub(crate) fn step_unchecked(
    state: &AttitudeEnsemble,
    topo: &WeightedTopology,
    gain: &GainFunction,
    dt: f64,
    method: Integrator,
) -> AttitudeEnsemble {
    match method {
        Integrator::GeometricEuler => {
            let k1 = angular_velocities_unchecked(state, topo, gain);
            flow(state, &k1, dt)
        }
        Integrator::GeometricRk4 => {
            let k1 = angular_velocities_unchecked(state, topo, gain);
            let k2 = angular_velocities_unchecked(&flow(state, &k1, 0.5 * dt), topo, gain);
            let k3 = angular_velocities_unchecked(&flow(state, &k2, 0.5 * dt), topo, gain);
            let k4 = angular_velocities_unchecked(&flow(state, &k3, dt), topo, gain);
            let combined: Vec<Vec3> =
                (0..state.n()).map(|i| (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0).collect();
            flow(state, &combined, dt)
        }
    }
}

/// Advances the closed loop by one step of size `dt`.
pub fn integrate_step(
    state: &AttitudeEnsemble,
    topo: &WeightedTopology,
    gain: &GainFunction,
    dt: f64,
    method: Integrator,
) -> Result<AttitudeEnsemble> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    if state.n() != topo.n() {
        return Err(Error::State(format!("state has {} agents but topology has {} nodes", state.n(), topo.n())));
    }
    Ok(step_unchecked(state, topo, gain, dt, method))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{affine_cosine_gain, closed_loop_field, exponential_gain};
    use crate::topology::complete_graph;

    #[test]
    fn equilibrium_is_fixed() {
        let topo = complete_graph(4).unwrap();
        let gain = affine_cosine_gain(1.0).unwrap();
        let state = AttitudeEnsemble::reference_tetrahedron();
        for m in [Integrator::GeometricEuler, Integrator::GeometricRk4] {
            let next = integrate_step(&state, &topo, &gain, 1e-2, m).unwrap();
            assert!(next.max_distance(&state) < 1e-14);
        }
    }

    #[test]
    fn euler_difference_quotient_converges_linearly() {
        let topo = complete_graph(4).unwrap();
        let gain = exponential_gain();
        let state = AttitudeEnsemble::random(4, 5).unwrap();
        let field = closed_loop_field(&state, &topo, &gain).unwrap();
        let errs: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&dt| {
                let next = integrate_step(&state, &topo, &gain, dt, Integrator::GeometricEuler).unwrap();
                next.gammas()
                    .iter()
                    .zip(state.gammas())
                    .zip(&field)
                    .map(|((a, b), v)| ((a.as_vec() - b.as_vec()) / dt - v).norm())
                    .fold(0.0, f64::max)
            })
            .collect();
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((ratio - 10.0).abs() < 1.0, "errors {errs:?}");
        }
    }

    #[test]
    fn rk4_is_higher_order_than_euler() {
        let topo = complete_graph(4).unwrap();
        let gain = affine_cosine_gain(1.0).unwrap();
        let state = AttitudeEnsemble::random(4, 8).unwrap();
        let run = |dt: f64, m: Integrator| {
            let mut s = state.clone();
            let steps = (0.5 / dt).round() as usize;
            for _ in 0..steps {
                s = integrate_step(&s, &topo, &gain, dt, m).unwrap();
            }
            s
        };
        let reference = run(1e-4, Integrator::GeometricRk4);
        let e_euler = run(1e-2, Integrator::GeometricEuler).max_distance(&reference);
        let e_rk4 = run(1e-2, Integrator::GeometricRk4).max_distance(&reference);
        assert!(e_rk4 < 1e-3 * e_euler, "euler {e_euler} rk4 {e_rk4}");
    }

    #[test]
    fn rejects_bad_step() {
        let topo = complete_graph(4).unwrap();
        let gain = exponential_gain();
        let state = AttitudeEnsemble::random(4, 1).unwrap();
        assert!(integrate_step(&state, &topo, &gain, 0.0, Integrator::GeometricEuler).is_err());
        assert!(integrate_step(&state, &topo, &gain, -1.0, Integrator::GeometricRk4).is_err());
    }

    #[test]
    fn norm_preserved_over_many_steps() {
        let topo = crate::topology::rotating_tetrahedron_graph(1, 1).unwrap();
        let gain = affine_cosine_gain(1.0).unwrap();
        let mut s = AttitudeEnsemble::random(4, 2).unwrap();
        for _ in 0..1_000_000 {
            s = step_unchecked(&s, &topo, &gain, 1e-3, Integrator::GeometricEuler);
        }
        for g in s.gammas() {
            assert!((g.norm() - 1.0).abs() < 1e-12, "{}", g.norm());
        }
    }
}
