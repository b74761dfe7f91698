use nalgebra::DMatrix;
use serde::Serialize;

use crate::control::{max_field_norm, GainFunction};
use crate::ensemble::AttitudeEnsemble;
use crate::error::{Error, Result};
use crate::simulator::formation_error;
use crate::topology::WeightedTopology;

const FIELD_TOL: f64 = 1e-8;
const FORMATION_TOL: f64 = 1e-6;
const CROSS_TOL: f64 = 1e-6;
const PLANAR_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumTag {
    Tetrahedron,
    CrossCoplanar,
    CoplanarGeneric,
    NotEquilibrium,
    /// Stationary, but neither tetrahedral nor coplanar within tolerance.
    Unclassified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumClass {
    pub tag: EquilibriumTag,
    pub field_norm: f64,
    pub formation_error: f64,
    pub coplanarity: f64,
}

/// Smallest singular value of the `n × 3` matrix with rows `Γᵢ`; zero iff all
/// agents lie on one great circle.
pub fn coplanarity(state: &AttitudeEnsemble) -> f64 {
    let m = DMatrix::from_fn(state.n(), 3, |i, j| state.gammas()[i][j]);
    m.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Tests, in order: stationary, tetrahedral, cross, coplanar.
pub fn classify_equilibrium(
    state: &AttitudeEnsemble,
    topo: &WeightedTopology,
    gain: &GainFunction,
) -> Result<EquilibriumClass> {
    if state.n() != 4 {
        return Err(Error::State(format!("classification needs 4 agents, got {}", state.n())));
    }
    let field_norm = max_field_norm(state, topo, gain)?;
    let formation_error = formation_error(state);
    let coplanarity = coplanarity(state);
    let tag = if field_norm > FIELD_TOL {
        EquilibriumTag::NotEquilibrium
    } else if formation_error < FORMATION_TOL {
        EquilibriumTag::Tetrahedron
    } else if state.pair_cosines().iter().all(|c| c.abs() < CROSS_TOL || (c + 1.0).abs() < CROSS_TOL) {
        EquilibriumTag::CrossCoplanar
    } else if coplanarity < PLANAR_TOL {
        EquilibriumTag::CoplanarGeneric
    } else {
        EquilibriumTag::Unclassified
    };
    Ok(EquilibriumClass { tag, field_norm, formation_error, coplanarity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{affine_cosine_gain, exponential_gain};
    use crate::sphere::Vec3;
    use crate::topology::complete_graph;

    #[test]
    fn examples() {
        let topo = complete_graph(4).unwrap();
        let g = affine_cosine_gain(1.0).unwrap();
        let t = classify_equilibrium(&AttitudeEnsemble::reference_tetrahedron(), &topo, &g).unwrap();
        assert_eq!(t.tag, EquilibriumTag::Tetrahedron);
        let c = classify_equilibrium(&AttitudeEnsemble::cross_formation(), &topo, &g).unwrap();
        assert_eq!(c.tag, EquilibriumTag::CrossCoplanar);
        assert!(c.coplanarity < 1e-15);
        for seed in 0..20 {
            let r = classify_equilibrium(&AttitudeEnsemble::random(4, seed).unwrap(), &topo, &g).unwrap();
            assert_eq!(r.tag, EquilibriumTag::NotEquilibrium);
        }
    }

    #[test]
    fn degenerate_coplanar_equilibria() {
        let topo = complete_graph(4).unwrap();
        let x = Vec3::x();
        for g in [affine_cosine_gain(1.0).unwrap(), exponential_gain()] {
            for s in [[x, x, x, -x], [x, x, -x, -x]] {
                let r = classify_equilibrium(&AttitudeEnsemble::from_vectors(s).unwrap(), &topo, &g).unwrap();
                assert_eq!(r.tag, EquilibriumTag::CoplanarGeneric);
            }
        }
        let r = classify_equilibrium(&AttitudeEnsemble::cross_formation(), &topo, &exponential_gain()).unwrap();
        assert_eq!(r.tag, EquilibriumTag::CrossCoplanar);
    }
}
