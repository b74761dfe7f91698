//! Fixed-step simulation of the closed loop and the observables recorded along it.

pub mod csv;
mod integrate;
pub mod observables;

pub use integrate::{integrate_step, Integrator};
pub use observables::{
    agent_drift, converged_at, cosine_formation_error, formation_error, lyapunov_value, lyapunov_value_on,
    max_lyapunov_increase_per_step, pair_potential, rotation_rate_estimate, RotationEstimate, CONVERGENCE_HOLD,
    CONVERGENCE_TOL, TETRAHEDRON_COSINE,
};

use serde::{Deserialize, Serialize};

use crate::control::{max_field_norm, GainFunction, GainSpec};
use crate::ensemble::{AttitudeEnsemble, ENSEMBLE_UNIT_TOL};
use crate::error::{Error, Result};
use crate::sphere::Vec3;
use crate::topology::{TopologySpec, WeightedTopology};

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_HORIZON: f64 = 200.0;
pub const DEFAULT_STRIDE: usize = 100;

/// Where a run starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// i.i.d. uniform samples on S², one per topology node.
    Random { seed: u64 },
    /// Explicit unit vectors, one per agent.
    Explicit(Vec<[f64; 3]>),
}

/// A complete description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub initial: InitialState,
    pub topology: TopologySpec,
    pub gain: GainSpec,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(rename = "T", alias = "horizon", default = "default_horizon")]
    pub horizon: f64,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default = "default_stride")]
    pub stride: usize,
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

fn default_horizon() -> f64 {
    DEFAULT_HORIZON
}

fn default_stride() -> usize {
    DEFAULT_STRIDE
}

impl SimConfig {
    /// Defaults from a topology, a gain and a random seed.
    pub fn seeded(topology: TopologySpec, gain: GainSpec, seed: u64) -> Self {
        Self {
            initial: InitialState::Random { seed },
            topology,
            gain,
            dt: DEFAULT_DT,
            horizon: DEFAULT_HORIZON,
            integrator: Integrator::default(),
            stride: DEFAULT_STRIDE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::Config(format!("T must be positive, got {}", self.horizon)));
        }
        if self.stride == 0 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        if self.steps() == 0 {
            return Err(Error::Config(format!("T = {} is shorter than dt = {}", self.horizon, self.dt)));
        }
        let topo = self.topology.build()?;
        self.gain.build()?;
        let state = self.initial_state()?;
        if state.n() != topo.n() {
            return Err(Error::Config(format!(
                "initial state has {} agents but topology has {} nodes",
                state.n(),
                topo.n()
            )));
        }
        Ok(())
    }

    /// Number of integration steps, `round(T / dt)`.
    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    pub fn initial_state(&self) -> Result<AttitudeEnsemble> {
        match &self.initial {
            InitialState::Random { seed } => {
                let n = match self.topology {
                    TopologySpec::Complete { n } => n,
                    TopologySpec::RotatingTetrahedron { .. } => 4,
                };
                AttitudeEnsemble::random(n, *seed)
            }
            InitialState::Explicit(vs) => {
                AttitudeEnsemble::from_vectors(vs.iter().map(|v| Vec3::new(v[0], v[1], v[2])))
            }
        }
    }

    /// Copy with the random seed replaced; explicit initial states are kept.
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut c = self.clone();
        if let InitialState::Random { .. } = c.initial {
            c.initial = InitialState::Random { seed };
        }
        c
    }
}

/// Observables recorded with every sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// `Γᵢᵀ Γⱼ` in lexicographic pair order.
    pub cosines: Vec<f64>,
    /// Lyapunov value over the connected pairs of the topology.
    pub lyapunov: f64,
    pub max_field: f64,
}

/// Recorded samples of a run; all vectors have equal length.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub step_index: Vec<usize>,
    pub states: Vec<AttitudeEnsemble>,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&AttitudeEnsemble> {
        self.states.last()
    }

    fn record(&mut self, step: usize, dt: f64, state: &AttitudeEnsemble, topo: &WeightedTopology, gain: &GainFunction) {
        self.times.push(step as f64 * dt);
        self.step_index.push(step);
        self.samples.push(Sample {
            cosines: state.pair_cosines(),
            lyapunov: lyapunov_value_on(state, topo, gain),
            max_field: max_field_norm(state, topo, gain).unwrap_or(f64::NAN),
        });
        self.states.push(state.clone());
    }
}

/// Runs `config` from its own initial state.
pub fn simulate(config: &SimConfig) -> Result<Trajectory> {
    config.validate()?;
    simulate_from(config, config.initial_state()?)
}

/// Runs `config` from `initial`, ignoring the config's initial-state field.
pub fn simulate_from(config: &SimConfig, initial: AttitudeEnsemble) -> Result<Trajectory> {
    let topo = config.topology.build()?;
    let gain = config.gain.build()?;
    simulate_with(&initial, &topo, &gain, config.dt, config.steps(), config.stride, config.integrator)
}

/// Integrates `steps` steps of size `dt`, recording step 0, every `stride`-th
/// step, and the last step.
pub fn simulate_with(
    initial: &AttitudeEnsemble,
    topo: &WeightedTopology,
    gain: &GainFunction,
    dt: f64,
    steps: usize,
    stride: usize,
    method: Integrator,
) -> Result<Trajectory> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    if stride == 0 {
        return Err(Error::Config("stride must be at least 1".into()));
    }
    if initial.n() != topo.n() {
        return Err(Error::State(format!("state has {} agents but topology has {} nodes", initial.n(), topo.n())));
    }
    initial.validate()?;

    let mut traj = Trajectory::default();
    let mut state = initial.clone();
    traj.record(0, dt, &state, topo, gain);
    for step in 1..=steps {
        state = integrate::step_unchecked(&state, topo, gain, dt, method);
        if !state.is_finite() {
            return Err(Error::NonFinite { time: step as f64 * dt, step });
        }
        if let Some(bad) = state.gammas().iter().position(|g| (g.norm() - 1.0).abs() > ENSEMBLE_UNIT_TOL) {
            return Err(Error::Numerical(format!(
                "agent {} left the sphere at step {step} (norm {})",
                bad + 1,
                state.gammas()[bad].norm()
            )));
        }
        if step % stride == 0 || step == steps {
            traj.record(step, dt, &state, topo, gain);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(seed: u64) -> SimConfig {
        SimConfig::seeded(TopologySpec::Complete { n: 4 }, GainSpec::AffineCosine { a: 1.0 }, seed)
    }

    #[test]
    fn validation() {
        let mut c = config(1);
        assert!(c.validate().is_ok());
        c.dt = 0.0;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        c.dt = -1e-3;
        assert!(c.validate().is_err());
        let mut c = config(1);
        c.stride = 0;
        assert!(c.validate().is_err());
        let mut c = config(1);
        c.horizon = 0.0;
        assert!(c.validate().is_err());
        let mut c = config(1);
        c.initial = InitialState::Explicit(vec![[1.0, 0.0, 0.0]; 3]);
        assert!(c.validate().is_err());
    }

    #[test]
    fn records_stride_and_last_step() {
        let mut c = config(3);
        c.horizon = 1.05;
        c.dt = 0.01;
        c.stride = 10;
        let t = simulate(&c).unwrap();
        assert_eq!(t.step_index, vec![0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 105]);
        assert_eq!(t.states.len(), t.len());
        assert_eq!(t.samples.len(), t.len());
        assert!(t.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn deterministic() {
        let mut c = config(7);
        c.horizon = 5.0;
        assert_eq!(simulate(&c).unwrap(), simulate(&c).unwrap());
    }

    #[test]
    fn tetrahedron_is_constant() {
        let mut c = config(0);
        c.horizon = 10.0;
        let t = simulate_from(&c, AttitudeEnsemble::reference_tetrahedron()).unwrap();
        let start = &t.states[0];
        for s in &t.states {
            assert!(s.max_distance(start) < 1e-13);
        }
    }

    #[test]
    fn lyapunov_decreases_on_short_run() {
        let mut c = config(11);
        c.horizon = 20.0;
        c.stride = 1;
        let t = simulate(&c).unwrap();
        assert!(max_lyapunov_increase_per_step(&t) <= 1e-9);
        assert!(t.samples.last().unwrap().lyapunov < t.samples[0].lyapunov);
    }

    #[test]
    fn config_json_round_trip() {
        let text = r#"{"initial": {"random": {"seed": 4}}, "topology": {"kind": "complete", "n": 4},
                       "gain": "affine_cosine a=1", "dt": 0.001, "T": 200, "integrator": "geometric_euler", "stride": 50}"#;
        let c: SimConfig = serde_json::from_str(text).unwrap();
        assert_eq!(c.integrator, Integrator::GeometricEuler);
        assert_eq!(c.horizon, 200.0);
        let back: SimConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        let minimal: SimConfig = serde_json::from_str(
            r#"{"initial": {"random": {"seed": 1}}, "topology": {"kind": "complete", "n": 4}, "gain": "exponential"}"#,
        )
        .unwrap();
        assert_eq!(minimal.dt, DEFAULT_DT);
        assert_eq!(minimal.integrator, Integrator::GeometricRk4);
    }
}
