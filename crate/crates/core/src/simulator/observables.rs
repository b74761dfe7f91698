use std::f64::consts::PI;

use crate::control::{GainFamily, GainFunction};
use crate::ensemble::AttitudeEnsemble;
use crate::error::{Error, Result};
use crate::quadrature;
use crate::sphere::{geodesic_distance, orthogonal_to, UnitVec3};
use crate::topology::WeightedTopology;

use super::Trajectory;

/// Pairwise cosine of the regular tetrahedron.
pub const TETRAHEDRON_COSINE: f64 = -1.0 / 3.0;

/// Threshold on [`formation_error`] for declaring a formation converged.
pub const CONVERGENCE_TOL: f64 = 1e-6;

/// How long the formation error must stay below [`CONVERGENCE_TOL`].
pub const CONVERGENCE_HOLD: f64 = 1.0;

const QUAD_TOL: f64 = 1e-15;

/// `∫_θ^π f(x) sin x dx`.
pub fn pair_potential(cos_theta: f64, gain: &GainFunction) -> f64 {
    let c = cos_theta.clamp(-1.0, 1.0);
    match gain.family() {
        // (a/2)(1 + cos θ)²
        GainFamily::AffineCosine { a } => 0.5 * a * (1.0 + c) * (1.0 + c),
        _ => quadrature::integrate(|x| gain.eval(x) * x.sin(), c.acos(), PI, QUAD_TOL),
    }
}

/// Lyapunov value summed once over every unordered pair of agents.
pub fn lyapunov_value(state: &AttitudeEnsemble, gain: &GainFunction) -> f64 {
    state.pair_cosines().into_iter().map(|c| pair_potential(c, gain)).sum()
}

/// Lyapunov value summed once over unordered pairs joined by an edge of `topo`.
pub fn lyapunov_value_on(state: &AttitudeEnsemble, topo: &WeightedTopology, gain: &GainFunction) -> f64 {
    let g = state.gammas();
    topo.connected_pairs().into_iter().map(|(i, j)| pair_potential(g[i].dot(&g[j]), gain)).sum()
}

/// `max |Γᵢᵀ Γⱼ + 1/3|` over pairs.
pub fn formation_error(state: &AttitudeEnsemble) -> f64 {
    cosine_formation_error(&state.pair_cosines())
}

pub fn cosine_formation_error(cosines: &[f64]) -> f64 {
    cosines.iter().map(|c| (c - TETRAHEDRON_COSINE).abs()).fold(0.0, f64::max)
}

/// Time from which the formation error stays below `tol` through the end of
/// the trajectory, provided that final stretch lasts at least `hold`.
pub fn converged_at(traj: &Trajectory, tol: f64, hold: f64) -> Option<f64> {
    let errs: Vec<f64> = traj.samples.iter().map(|s| cosine_formation_error(&s.cosines)).collect();
    let last = traj.len().checked_sub(1)?;
    if errs[last] >= tol {
        return None;
    }
    let mut start = last;
    while start > 0 && errs[start - 1] < tol {
        start -= 1;
    }
    (traj.times[last] - traj.times[start] >= hold).then_some(traj.times[start])
}

/// Result of fitting a spin rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationEstimate {
    /// Signed angular rate about the axis agent, right-hand rule (rad per time unit).
    pub rate: f64,
    /// `2π / |rate|`.
    pub period: f64,
    /// RMS residual of the linear fit (rad).
    pub residual_rms: f64,
    pub samples: usize,
}

/// Indices of samples in the trailing `window` time units.
fn window_indices(traj: &Trajectory, window: f64) -> Result<std::ops::Range<usize>> {
    if traj.is_empty() {
        return Err(Error::NotConverged("empty trajectory".into()));
    }
    let t_end = *traj.times.last().unwrap();
    let t_start = t_end - window;
    if traj.times[0] > t_start + 1e-12 {
        return Err(Error::NotConverged(format!(
            "trajectory spans {} time units, window needs {window}",
            t_end - traj.times[0]
        )));
    }
    let first = traj.times.partition_point(|&t| t < t_start - 1e-12);
    Ok(first..traj.len())
}

fn check_window_converged(traj: &Trajectory, range: &std::ops::Range<usize>) -> Result<()> {
    for k in range.clone() {
        let e = cosine_formation_error(&traj.samples[k].cosines);
        if e >= CONVERGENCE_TOL {
            return Err(Error::NotConverged(format!(
                "formation error {e:e} at t = {} exceeds {CONVERGENCE_TOL:e}",
                traj.times[k]
            )));
        }
    }
    Ok(())
}

/// Least-squares spin rate of `agent` about the axis through `axis_agent`,
/// fitted over the trailing `window` time units (one-based labels).
pub fn rotation_rate_estimate(
    traj: &Trajectory,
    agent: usize,
    axis_agent: usize,
    window: f64,
) -> Result<RotationEstimate> {
    let n = traj.states.first().map(|s| s.n()).unwrap_or(0);
    if agent == 0 || axis_agent == 0 || agent > n || axis_agent > n {
        return Err(Error::State(format!("agents {agent}, {axis_agent} outside 1..={n}")));
    }
    if agent == axis_agent {
        return Err(Error::State("agent coincides with the rotation axis".into()));
    }
    let range = window_indices(traj, window)?;
    if range.len() < 3 {
        return Err(Error::NotConverged(format!("only {} samples in the window", range.len())));
    }
    check_window_converged(traj, &range)?;

    let axis = *traj.states[range.start].agent(axis_agent);
    let u = orthogonal_to(&axis);
    let v = UnitVec3::new_unchecked(axis.cross(&u));

    let mut ts = Vec::with_capacity(range.len());
    let mut angles = Vec::with_capacity(range.len());
    let mut prev: Option<f64> = None;
    let mut offset = 0.0;
    for k in range {
        let g = traj.states[k].agent(agent);
        let raw = g.dot(&v).atan2(g.dot(&u));
        if let Some(p) = prev {
            let mut d = raw - p;
            while d > PI {
                d -= 2.0 * PI;
                offset -= 2.0 * PI;
            }
            while d < -PI {
                d += 2.0 * PI;
                offset += 2.0 * PI;
            }
        }
        prev = Some(raw);
        ts.push(traj.times[k]);
        angles.push(raw + offset);
    }

    let (slope, intercept) = linear_fit(&ts, &angles);
    let residual_rms = (ts.iter().zip(&angles).map(|(t, a)| (a - (slope * t + intercept)).powi(2)).sum::<f64>()
        / ts.len() as f64)
        .sqrt();
    Ok(RotationEstimate {
        rate: slope,
        period: if slope == 0.0 { f64::INFINITY } else { 2.0 * PI / slope.abs() },
        residual_rms,
        samples: ts.len(),
    })
}

/// Largest geodesic displacement of `agent` from its position at the start of
/// the trailing `window`.
pub fn agent_drift(traj: &Trajectory, agent: usize, window: f64) -> Result<f64> {
    let range = window_indices(traj, window)?;
    let n = traj.states[0].n();
    if agent == 0 || agent > n {
        return Err(Error::State(format!("agent {agent} outside 1..={n}")));
    }
    let start = *traj.states[range.start].agent(agent);
    Ok(range.map(|k| geodesic_distance(&start, traj.states[k].agent(agent))).fold(0.0, f64::max))
}

/// Ordinary least squares `y ≈ slope * x + intercept`, centered for stability.
fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Largest per-step increase of the recorded Lyapunov value,
/// `max (V(t_{m+1}) - V(t_m)) / (steps between samples)`.
pub fn max_lyapunov_increase_per_step(traj: &Trajectory) -> f64 {
    traj.samples
        .windows(2)
        .zip(traj.step_index.windows(2))
        .map(|(s, k)| (s[1].lyapunov - s[0].lyapunov) / (k[1] - k[0]).max(1) as f64)
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{affine_cosine_gain, exponential_gain};
    use crate::sphere::Vec3;
    use approx::assert_abs_diff_eq;

    #[test]
    fn affine_potential_at_tetrahedron() {
        let g = affine_cosine_gain(1.0).unwrap();
        let t = AttitudeEnsemble::reference_tetrahedron();
        assert_abs_diff_eq!(lyapunov_value(&t, &g), 4.0 / 3.0, epsilon = 1e-14);
        // per pair: 1/2 - 5/18 from the antiderivative −cos²x/2 − cos x
        let anti = |x: f64| -x.cos().powi(2) / 2.0 - x.cos();
        let theta = (-1.0f64 / 3.0).acos();
        assert_abs_diff_eq!(pair_potential(-1.0 / 3.0, &g), anti(PI) - anti(theta), epsilon = 1e-15);
        assert_abs_diff_eq!(anti(PI) - anti(theta), 0.5 - 5.0 / 18.0, epsilon = 1e-15);
    }

    #[test]
    fn potential_vanishes_for_antipodal_pairs() {
        for g in [affine_cosine_gain(2.0).unwrap(), exponential_gain()] {
            assert_abs_diff_eq!(pair_potential(-1.0, &g), 0.0, epsilon = 1e-16);
        }
    }

    #[test]
    fn exponential_quadrature_matches_closed_form() {
        let g = exponential_gain();
        let anti = |x: f64| -(-x).exp() * (x.sin() + x.cos()) / 2.0;
        for k in 0..=50 {
            let c = -1.0 + 2.0 * k as f64 / 50.0;
            let theta = c.acos();
            assert_abs_diff_eq!(pair_potential(c, &g), anti(PI) - anti(theta), epsilon = 1e-14);
        }
    }

    #[test]
    fn potential_is_nonnegative() {
        let g = exponential_gain();
        let a = affine_cosine_gain(1.0).unwrap();
        for seed in 0..10_000 {
            let s = AttitudeEnsemble::random(4, seed).unwrap();
            assert!(lyapunov_value(&s, &g) >= 0.0);
            assert!(lyapunov_value(&s, &a) >= 0.0);
        }
    }

    #[test]
    fn formation_error_examples() {
        assert!(formation_error(&AttitudeEnsemble::reference_tetrahedron()) < 1e-15);
        let same = AttitudeEnsemble::from_vectors([Vec3::x(); 4]).unwrap();
        assert_abs_diff_eq!(formation_error(&same), 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(formation_error(&AttitudeEnsemble::cross_formation()), 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn linear_fit_recovers_line() {
        let x: Vec<f64> = (0..20).map(|k| 100.0 + k as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|t| 0.25 * t - 3.0).collect();
        let (m, b) = linear_fit(&x, &y);
        assert_abs_diff_eq!(m, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(b, -3.0, epsilon = 1e-9);
    }
}
