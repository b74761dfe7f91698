//! Intrinsic formation control laws and closed-loop vector fields.
//!
//! Agent `i` applies the angular velocity
//! `ωᵢ = -Σⱼ W(i,j) f(θᵢⱼ) Γᵢ × Γⱼ`, summed over its neighbors. With unit
//! weights this is the uniform law; with the rotating-tetrahedron weights it
//! produces a spinning formation. The closed loop is `Γ̇ᵢ = ωᵢ × Γᵢ`.

pub mod gain;
mod rpy;

pub use gain::{affine_cosine_gain, exponential_gain, GainFamily, GainFunction, GainSpec};
pub use rpy::{rpy_chart_velocity, rpy_closed_loop_field, CHART_SINGULAR_TOL};

use crate::ensemble::AttitudeEnsemble;
use crate::error::{Error, Result};
use crate::sphere::Vec3;
use crate::topology::WeightedTopology;

fn check_sizes(state: &AttitudeEnsemble, topo: &WeightedTopology) -> Result<()> {
    if state.n() != topo.n() {
        return Err(Error::State(format!("state has {} agents but topology has {} nodes", state.n(), topo.n())));
    }
    Ok(())
}

/// Angular velocity of agent `i` (one-based label).
pub fn control_velocity(
    i: usize,
    state: &AttitudeEnsemble,
    topo: &WeightedTopology,
    gain: &GainFunction,
) -> Result<Vec3> {
    check_sizes(state, topo)?;
    if i == 0 || i > state.n() {
        return Err(Error::State(format!("agent {i} outside 1..={}", state.n())));
    }
    Ok(agent_velocity(i - 1, state, topo, gain))
}

#[inline]
fn agent_velocity(i: usize, state: &AttitudeEnsemble, topo: &WeightedTopology, gain: &GainFunction) -> Vec3 {
    let g = state.gammas();
    let gi = g[i].as_vec();
    let mut sum = Vec3::zeros();
    for (j, gj) in g.iter().enumerate() {
        if j == i {
            continue;
        }
        let Some(w) = topo.weight_idx(i, j) else { continue };
        if w == 0.0 {
            continue;
        }
        let f = gain.of_cosine(gi.dot(gj));
        sum += gi.cross(gj) * (w * f);
    }
    -sum
}

/// Angular velocities of all agents.
pub fn angular_velocities(state: &AttitudeEnsemble, topo: &WeightedTopology, gain: &GainFunction) -> Result<Vec<Vec3>> {
    check_sizes(state, topo)?;
    Ok(angular_velocities_unchecked(state, topo, gain))
}

/// Same as [`agent_velocity`] for every agent, evaluating the gain once per unordered pair.
pub(crate) fn angular_velocities_unchecked(
    state: &AttitudeEnsemble,
    topo: &WeightedTopology,
    gain: &GainFunction,
) -> Vec<Vec3> {
    let g = state.gammas();
    let n = g.len();
    let mut out = vec![Vec3::zeros(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let wij = topo.weight_idx(i, j).unwrap_or(0.0);
            let wji = topo.weight_idx(j, i).unwrap_or(0.0);
            if wij == 0.0 && wji == 0.0 {
                continue;
            }
            let f = gain.of_cosine(g[i].dot(&g[j]));
            let cross = g[i].cross(&g[j]) * f;
            // Γⱼ × Γᵢ = -(Γᵢ × Γⱼ)
            out[i] -= cross * wij;
            out[j] += cross * wji;
        }
    }
    out
}

/// `Γ̇ᵢ = ωᵢ × Γᵢ` for every agent; each entry is tangent to its `Γᵢ`.
pub fn closed_loop_field(state: &AttitudeEnsemble, topo: &WeightedTopology, gain: &GainFunction) -> Result<Vec<Vec3>> {
    let omegas = angular_velocities(state, topo, gain)?;
    Ok(omegas.iter().zip(state.gammas()).map(|(w, g)| w.cross(g)).collect())
}

/// Largest `‖Γ̇ᵢ‖` over agents.
pub fn max_field_norm(state: &AttitudeEnsemble, topo: &WeightedTopology, gain: &GainFunction) -> Result<f64> {
    Ok(closed_loop_field(state, topo, gain)?.iter().map(|v| v.norm()).fold(0.0, f64::max))
}
