//! Intrinsic formation control of four reduced attitudes on the unit sphere.
//!
//! Agents interact through a gain on their pairwise geodesic distance and
//! settle on a regular tetrahedron: stationary under the complete graph, or
//! spinning about one agent under a weighted cyclic graph.

pub mod analysis;
pub mod cli;
pub mod control;
pub mod ensemble;
pub mod error;
pub mod quadrature;
pub mod simulator;
pub mod sphere;
pub mod topology;
pub mod xi;

pub use control::{affine_cosine_gain, closed_loop_field, control_velocity, exponential_gain, GainFunction, GainSpec};
pub use ensemble::AttitudeEnsemble;
pub use error::{Error, Result};
pub use simulator::{simulate, SimConfig, Trajectory};
pub use sphere::{RpyAngles, UnitVec3, Vec3};
pub use topology::{complete_graph, rotating_tetrahedron_graph, TopologySpec, WeightedTopology};
