use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::simulator::{
    agent_drift, converged_at, cosine_formation_error, rotation_rate_estimate, SimConfig, Trajectory, CONVERGENCE_HOLD,
    CONVERGENCE_TOL,
};
use crate::topology::TopologySpec;

/// Trailing window, in time units, over which spin rate and axis drift are measured.
pub const ROTATION_WINDOW: f64 = 20.0;

/// `sha256("blob <len>\0" ++ bytes)`, hex encoded: git's object hashing with SHA-256.
pub fn git_blob_sha256(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    hex::encode(h.finalize())
}

/// Hash of the compact JSON serialization, so formatting of the source file does not matter.
pub fn config_hash(config: &SimConfig) -> String {
    let bytes = serde_json::to_vec(config).expect("SimConfig serializes");
    git_blob_sha256(&bytes)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationSummary {
    pub agent: usize,
    pub axis_agent: usize,
    pub rate: f64,
    pub period: f64,
    pub residual_rms: f64,
    /// Geodesic drift of the axis agent over the window.
    pub axis_drift: f64,
}

/// Metrics derived from the recorded samples only, so they can be recomputed from
/// the trajectory CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub samples: usize,
    pub final_time: f64,
    pub final_formation_error: f64,
    pub final_lyapunov: f64,
    pub final_max_field: f64,
    pub converged: bool,
    /// Start of the final stretch below tolerance, if it lasts at least the hold time.
    pub converged_at: Option<f64>,
    /// Present for the rotating topology once the formation has settled.
    pub rotation: Option<RotationSummary>,
}

pub fn summarize(traj: &Trajectory, topology: &TopologySpec) -> RunSummary {
    let last = traj.samples.last();
    let final_formation_error = last.map_or(f64::NAN, |s| cosine_formation_error(&s.cosines));
    let rotation = match *topology {
        TopologySpec::RotatingTetrahedron { k, .. } => rotation_summary(traj, k),
        TopologySpec::Complete { .. } => None,
    };
    RunSummary {
        samples: traj.len(),
        final_time: traj.times.last().copied().unwrap_or(0.0),
        final_formation_error,
        final_lyapunov: last.map_or(f64::NAN, |s| s.lyapunov),
        final_max_field: last.map_or(f64::NAN, |s| s.max_field),
        converged: final_formation_error < CONVERGENCE_TOL,
        converged_at: converged_at(traj, CONVERGENCE_TOL, CONVERGENCE_HOLD),
        rotation,
    }
}

fn rotation_summary(traj: &Trajectory, k: usize) -> Option<RotationSummary> {
    let agent = (1..=4).find(|&i| i != k)?;
    let est = rotation_rate_estimate(traj, agent, k, ROTATION_WINDOW).ok()?;
    let axis_drift = agent_drift(traj, k, ROTATION_WINDOW).ok()?;
    Some(RotationSummary {
        agent,
        axis_agent: k,
        rate: est.rate,
        period: est.period,
        residual_rms: est.residual_rms,
        axis_drift,
    })
}

/// Written next to the CSV files by `simulate`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub config: SimConfig,
    pub config_hash: String,
    pub trajectory: String,
    pub xi_trace: Option<String>,
    pub summary: RunSummary,
    pub wall_time_s: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blob_hash_matches_git_format() {
        // printf 'hello\n' | git hash-object --object-format=sha256 --stdin
        assert_eq!(git_blob_sha256(b"hello\n"), "2cf8d83d9ee29543b34a87727421fdecb7e3f3a183d337639025de576db9ebb4");
        assert_eq!(git_blob_sha256(b"").len(), 64);
    }
}
