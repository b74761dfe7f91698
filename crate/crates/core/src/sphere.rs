//! Geometry on the 2-sphere and SO(3).
//!
//! Reduced attitudes are unit vectors in R³. This module holds the hat map,
//! the Rodrigues exponential, geodesic distance and rotation axis between two
//! points, the roll-pitch-yaw (RPY) chart, and the three elementary frame
//! rotations used to place a normalized formation in the inertial frame.

use std::f64::consts::PI;
use std::ops::Deref;

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Norm tolerance accepted by [`UnitVec3::new`].
pub const UNIT_TOL: f64 = 1e-12;

/// A point on the 2-sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVec3(Vec3);

impl UnitVec3 {
    /// Wraps `v`, rejecting it unless `‖v‖ = 1` within [`UNIT_TOL`].
    pub fn new(v: Vec3) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(v))
    }

    /// Normalizes `v`. Fails for zero or non-finite input.
    pub fn normalize(v: Vec3) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(v / norm))
    }

    /// Wraps `v` without checking its norm.
    pub fn new_unchecked(v: Vec3) -> Self {
        Self(v)
    }

    pub fn from_xyz(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(Vec3::new(x, y, z))
    }

    pub fn e1() -> Self {
        Self(Vec3::x())
    }

    pub fn e2() -> Self {
        Self(Vec3::y())
    }

    pub fn e3() -> Self {
        Self(Vec3::z())
    }

    pub fn as_vec(&self) -> &Vec3 {
        &self.0
    }

    pub fn into_inner(self) -> Vec3 {
        self.0
    }

    /// Applies a rotation matrix. The result is not re-normalized.
    pub fn rotated(&self, r: &Mat3) -> Self {
        Self(r * self.0)
    }
}

impl Deref for UnitVec3 {
    type Target = Vec3;

    fn deref(&self) -> &Vec3 {
        &self.0
    }
}

impl std::ops::Neg for UnitVec3 {
    type Output = UnitVec3;

    fn neg(self) -> UnitVec3 {
        UnitVec3(-self.0)
    }
}

/// Roll-pitch-yaw coordinates of a reduced attitude.
///
/// `psi` is the azimuth in `[-π, π)`, `phi` the elevation in `[-π/2, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RpyAngles {
    pub psi: f64,
    pub phi: f64,
}

impl RpyAngles {
    /// Builds angles, wrapping `psi` into `[-π, π)` and validating `phi`.
    pub fn new(psi: f64, phi: f64) -> Result<Self> {
        if !psi.is_finite() || !phi.is_finite() {
            return Err(Error::AngleRange(format!("non-finite angles ({psi}, {phi})")));
        }
        if phi.abs() > PI / 2.0 + 1e-15 {
            return Err(Error::AngleRange(format!("phi = {phi} outside [-pi/2, pi/2]")));
        }
        Ok(Self { psi: wrap_angle(psi), phi: phi.clamp(-PI / 2.0, PI / 2.0) })
    }
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if y >= PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// The hat map: `hat(v) * w == v × w`.
#[rustfmt::skip]
pub fn hat(v: &Vec3) -> Mat3 {
    Mat3::new(
        0.0,  -v.z,   v.y,
        v.z,   0.0,  -v.x,
       -v.y,   v.x,   0.0,
    )
}

/// Rotation by `angle` about `axis` (right-hand rule), via Rodrigues' formula.
pub fn rodrigues_exp(axis: &UnitVec3, angle: f64) -> Mat3 {
    let k = hat(axis);
    Mat3::identity() + k * angle.sin() + k * k * (1.0 - angle.cos())
}

/// `exp(hat(w))` for a rotation vector `w`, with series coefficients near zero.
pub fn exp_so3(w: &Vec3) -> Mat3 {
    let theta2 = w.norm_squared();
    let (a, b) = if theta2 < 1e-8 {
        // sin(t)/t and (1 - cos t)/t² to O(t⁶)
        (1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0, 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0)
    } else {
        let theta = theta2.sqrt();
        // half-angle form avoids cancellation in 1 - cos θ
        let h = (0.5 * theta).sin();
        (theta.sin() / theta, 2.0 * h * h / theta2)
    };
    let k = hat(w);
    Mat3::identity() + k * a + k * k * b
}

/// Great-circle distance in `[0, π]`, `arccos(aᵀb)`.
///
/// Evaluated as `atan2(|a × b|, aᵀb)`, which keeps full relative accuracy for
/// nearly coincident or antipodal pairs where `acos` loses half the digits.
pub fn geodesic_distance(a: &UnitVec3, b: &UnitVec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Unit rotation axis taking `a` to `b` along the shorter great circle.
///
/// When `a` and `b` are parallel or antipodal the axis is not unique; the
/// normalized projection of `e3` onto the plane orthogonal to `a` is returned,
/// or `e1` when `a = ±e3`.
pub fn rotation_axis(a: &UnitVec3, b: &UnitVec3) -> UnitVec3 {
    let c = a.cross(b);
    let n = c.norm();
    if n > 1e-12 {
        return UnitVec3(c / n);
    }
    orthogonal_to(a)
}

/// Deterministic unit vector orthogonal to `a`.
pub fn orthogonal_to(a: &UnitVec3) -> UnitVec3 {
    let e3 = Vec3::z();
    let proj = e3 - a.as_vec() * a.dot(&e3);
    let n = proj.norm();
    if n > 1e-12 {
        UnitVec3(proj / n)
    } else {
        UnitVec3::e1()
    }
}

/// `(cos ψ cos φ, sin ψ cos φ, sin φ)`.
pub fn rpy_embed(angles: &RpyAngles) -> UnitVec3 {
    let (sp, cp) = angles.psi.sin_cos();
    let (sf, cf) = angles.phi.sin_cos();
    UnitVec3(Vec3::new(cp * cf, sp * cf, sf))
}

/// Inverse of [`rpy_embed`]. At the poles (`cos φ < 1e-12`) `ψ = 0`.
pub fn rpy_extract(g: &UnitVec3) -> RpyAngles {
    let rho = g.x.hypot(g.y);
    // atan2 form of arcsin(z), better conditioned near the poles
    let phi = g.z.atan2(rho);
    let psi = if rho < 1e-12 { 0.0 } else { wrap_angle(g.y.atan2(g.x)) };
    RpyAngles { psi, phi }
}

/// Rotation about Z through `gamma`.
#[rustfmt::skip]
pub fn frame_rotation_1(gamma: f64) -> Mat3 {
    let (s, c) = gamma.sin_cos();
    Mat3::new(
        c,  -s,  0.0,
        s,   c,  0.0,
        0.0, 0.0, 1.0,
    )
}

/// Rotation about Y through `π/2 - phi`: takes the pole to elevation `phi`.
#[rustfmt::skip]
pub fn frame_rotation_2(phi: f64) -> Mat3 {
    let (s, c) = phi.sin_cos();
    Mat3::new(
        s,   0.0, c,
        0.0, 1.0, 0.0,
       -c,   0.0, s,
    )
}

/// Rotation about Z through `psi`.
pub fn frame_rotation_3(psi: f64) -> Mat3 {
    frame_rotation_1(psi)
}

/// `R₃(ψ) R₂(φ) R₁(γ)`.
pub fn placement_rotation(psi: f64, phi: f64, gamma: f64) -> Mat3 {
    frame_rotation_3(psi) * frame_rotation_2(phi) * frame_rotation_1(gamma)
}

/// True when `RᵀR = I` and `det R = 1` within `tol`.
pub fn is_rotation(r: &Mat3, tol: f64) -> bool {
    let ortho = (r.transpose() * r - Mat3::identity()).abs().max();
    ortho <= tol && (r.determinant() - 1.0).abs() <= tol
}

/// Uniform sample on S² from a dedicated generator seeded with `seed`.
pub fn sample_uniform_sphere(seed: u64) -> UnitVec3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_uniform_sphere_with(&mut rng)
}

/// Uniform sample on S²: a normalized vector of independent standard normals.
pub fn sample_uniform_sphere_with<R: Rng + ?Sized>(rng: &mut R) -> UnitVec3 {
    loop {
        let v = Vec3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal));
        let n = v.norm();
        if n > 1e-8 {
            return UnitVec3(v / n);
        }
    }
}

/// Uniformly random rotation matrix (axis uniform on S², angle density `∝ sin²(θ/2)`
/// realized through a normalized random quaternion).
pub fn sample_rotation_with<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    loop {
        let q: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n < 1e-8 {
            continue;
        }
        let [w, x, y, z] = q.map(|c| c / n);
        #[rustfmt::skip]
        let r = Mat3::new(
            1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z),       2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),       1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),       2.0 * (y * z + w * x),       1.0 - 2.0 * (x * x + y * y),
        );
        return r;
    }
}
