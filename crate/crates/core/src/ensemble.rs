use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sphere::{rpy_embed, sample_uniform_sphere_with, Mat3, RpyAngles, UnitVec3, Vec3};

/// Norm tolerance for ensemble members, re-checked after every integration step.
pub const ENSEMBLE_UNIT_TOL: f64 = 1e-9;

/// Ordered reduced attitudes of `n` agents.
#[derive(Debug, Clone, PartialEq)]
pub struct AttitudeEnsemble {
    gammas: Vec<UnitVec3>,
}

impl AttitudeEnsemble {
    pub fn new(gammas: Vec<UnitVec3>) -> Result<Self> {
        if gammas.len() < 2 {
            return Err(Error::State(format!("need at least 2 agents, got {}", gammas.len())));
        }
        let e = Self { gammas };
        e.validate()?;
        Ok(e)
    }

    /// Builds an ensemble from raw vectors, each of which must already be unit length.
    pub fn from_vectors(vs: impl IntoIterator<Item = Vec3>) -> Result<Self> {
        Self::new(vs.into_iter().map(UnitVec3::new_unchecked).collect())
    }

    /// Normalizes each vector before building the ensemble.
    pub fn from_directions(vs: impl IntoIterator<Item = Vec3>) -> Result<Self> {
        Self::new(vs.into_iter().map(UnitVec3::normalize).collect::<Result<_>>()?)
    }

    pub(crate) fn from_unit_unchecked(gammas: Vec<UnitVec3>) -> Self {
        Self { gammas }
    }

    /// `n` independent uniform samples on S² from a generator seeded with `seed`.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::new((0..n).map(|_| sample_uniform_sphere_with(&mut rng)).collect())
    }

    /// The regular tetrahedron with `ψᵢ = π/4 + (i-1)π/2`, `φᵢ = (-1)^(i-1) arcsin(√3/3)`.
    pub fn reference_tetrahedron() -> Self {
        Self::from_unit_unchecked(reference_tetrahedron_angles().iter().map(rpy_embed).collect())
    }

    /// The coplanar cross `(e1, e2, -e1, -e2)`.
    pub fn cross_formation() -> Self {
        Self::from_unit_unchecked(vec![UnitVec3::e1(), UnitVec3::e2(), -UnitVec3::e1(), -UnitVec3::e2()])
    }

    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gammas.iter().enumerate() {
            let norm = g.norm();
            if !norm.is_finite() || (norm - 1.0).abs() > ENSEMBLE_UNIT_TOL {
                return Err(Error::State(format!("agent {} has norm {norm}", i + 1)));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[UnitVec3] {
        &self.gammas
    }

    /// Agent by one-based label.
    pub fn agent(&self, label: usize) -> &UnitVec3 {
        &self.gammas[label - 1]
    }

    pub fn is_finite(&self) -> bool {
        self.gammas.iter().all(|g| g.iter().all(|c| c.is_finite()))
    }

    /// Applies `q` to every agent.
    pub fn rotated(&self, q: &Mat3) -> Self {
        Self::from_unit_unchecked(self.gammas.iter().map(|g| g.rotated(q)).collect())
    }

    /// `Γᵢᵀ Γⱼ` for `i < j`, lexicographic: `(1,2), (1,3), …, (n-1,n)`.
    pub fn pair_cosines(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(self.gammas[i].dot(&self.gammas[j]));
            }
        }
        out
    }

    /// Largest distance between corresponding agents.
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.gammas.iter().zip(&other.gammas).map(|(a, b)| (a.as_vec() - b.as_vec()).norm()).fold(0.0, f64::max)
    }

    /// Moves every agent a geodesic distance `scale` in an independent uniformly
    /// random tangent direction.
    pub fn perturbed(&self, scale: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gammas = self
            .gammas
            .iter()
            .map(|g| {
                let dir = crate::sphere::orthogonal_to(g);
                let phase: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                let tangent = crate::sphere::rodrigues_exp(g, phase) * dir.as_vec();
                let axis = UnitVec3::new_unchecked(g.cross(&tangent));
                g.rotated(&crate::sphere::rodrigues_exp(&axis, scale))
            })
            .collect();
        Self::from_unit_unchecked(gammas)
    }

    /// Sign of `det[Γ₁, Γ₂, Γ₃]`: `+1`, `-1`, or `0` when coplanar within `1e-14`.
    pub fn chirality(&self) -> i8 {
        let t = self.gammas[0].dot(&self.gammas[1].cross(&self.gammas[2]));
        if t > 1e-14 {
            1
        } else if t < -1e-14 {
            -1
        } else {
            0
        }
    }
}

/// RPY angles of [`AttitudeEnsemble::reference_tetrahedron`].
pub fn reference_tetrahedron_angles() -> [RpyAngles; 4] {
    use std::f64::consts::PI;
    let phi0 = (3f64.sqrt() / 3.0).asin();
    std::array::from_fn(|k| {
        let psi = PI / 4.0 + k as f64 * PI / 2.0;
        let phi = if k % 2 == 0 { phi0 } else { -phi0 };
        RpyAngles::new(psi, phi).expect("reference angles are in range")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn perturbation_moves_each_agent_by_scale() {
        let c = AttitudeEnsemble::cross_formation();
        let p = c.perturbed(1e-4, 3);
        for (a, b) in c.gammas().iter().zip(p.gammas()) {
            assert_abs_diff_eq!(crate::sphere::geodesic_distance(a, b), 1e-4, epsilon = 1e-15);
            assert!((b.norm() - 1.0).abs() < 1e-15);
        }
        assert_eq!(p, c.perturbed(1e-4, 3));
        assert_ne!(p, c.perturbed(1e-4, 4));
    }

    #[test]
    fn reference_tetrahedron_is_regular() {
        let t = AttitudeEnsemble::reference_tetrahedron();
        for c in t.pair_cosines() {
            assert_abs_diff_eq!(c, -1.0 / 3.0, epsilon = 1e-15);
        }
        let s = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(*t.agent(1).as_vec(), Vec3::new(s, s, s), epsilon = 1e-15);
    }

    #[test]
    fn validation() {
        assert!(AttitudeEnsemble::from_vectors([Vec3::x(), Vec3::new(0.0, 1.1, 0.0)]).is_err());
        assert!(AttitudeEnsemble::from_vectors([Vec3::x()]).is_err());
        assert!(AttitudeEnsemble::from_directions([Vec3::x(), Vec3::new(0.0, 3.0, 0.0)]).is_ok());
        assert!(AttitudeEnsemble::random(4, 3).unwrap().validate().is_ok());
        assert_eq!(AttitudeEnsemble::random(4, 3), AttitudeEnsemble::random(4, 3));
    }

    #[test]
    fn chirality_flips_under_reflection() {
        let t = AttitudeEnsemble::reference_tetrahedron();
        let mirror = Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
        assert_eq!(t.chirality(), -t.rotated(&mirror).chirality());
        assert_eq!(AttitudeEnsemble::cross_formation().chirality(), 0);
    }
}
