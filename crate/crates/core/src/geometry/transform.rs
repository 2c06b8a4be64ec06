use nalgebra::{Matrix3, Rotation3, Unit};
use rand::Rng;

use super::{TriangleMesh, Vector3};
use crate::error::{invalid, Result};

/// Twist about an axis through the origin followed by a rigid motion.
///
/// A point `p` is first rotated about `twist_axis` by `twist_rate · (p · axis)`
/// radians, then mapped to `rotation · p + translation`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RigidTwist {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3,
    pub twist_axis: Vector3,
    pub twist_rate: f64,
}

impl RigidTwist {
    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
            twist_axis: Vector3::z(),
            twist_rate: 0.0,
        }
    }

    /// Uniformly random rotation and twist axis, twist rate drawn from `±max_rate`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_rate: f64) -> Self {
        let rotation = random_rotation(rng);
        let twist_axis = random_rotation(rng) * Vector3::z();
        let twist_rate = if max_rate > 0.0 {
            rng.random_range(-max_rate..=max_rate)
        } else {
            0.0
        };
        Self {
            rotation: *rotation.matrix(),
            translation: Vector3::zeros(),
            twist_axis,
            twist_rate,
        }
    }

    pub fn with_translation(mut self, translation: Vector3) -> Self {
        self.translation = translation;
        self
    }

    fn validate(&self) -> Result<Unit<Vector3>> {
        let r = &self.rotation;
        let orthogonality = (r.transpose() * r - Matrix3::identity()).abs().max();
        if !(orthogonality < 1e-9) || !(r.determinant() > 0.0) {
            return Err(invalid("rotation is not a proper orthonormal matrix"));
        }
        if !self.twist_rate.is_finite() || !self.translation.iter().all(|v| v.is_finite()) {
            return Err(invalid("twist rate and translation must be finite"));
        }
        Unit::try_new(self.twist_axis, 1e-12).ok_or_else(|| invalid("twist axis must be non-zero"))
    }
}

/// Shoemake's uniform quaternion.
fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Rotation3<f64> {
    use std::f64::consts::TAU;
    let (u1, u2, u3): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let q = nalgebra::Quaternion::new(
        b * (TAU * u3).cos(),
        a * (TAU * u2).sin(),
        a * (TAU * u2).cos(),
        b * (TAU * u3).sin(),
    );
    nalgebra::UnitQuaternion::from_quaternion(q).to_rotation_matrix()
}

/// Moves vertices only; connectivity and therefore χ, β0 and genus are untouched.
pub fn apply_rigid_twist(mesh: &TriangleMesh, transform: &RigidTwist) -> Result<TriangleMesh> {
    let axis = transform.validate()?;
    if *transform == RigidTwist::identity() {
        return Ok(mesh.clone());
    }
    let vertices = mesh
        .vertices
        .iter()
        .map(|p| {
            let angle = transform.twist_rate * p.coords.dot(&axis);
            let twisted = Rotation3::from_axis_angle(&axis, angle) * p;
            transform.rotation * twisted + transform.translation
        })
        .collect();
    Ok(TriangleMesh {
        vertices,
        triangles: mesh.triangles.clone(),
    })
}
