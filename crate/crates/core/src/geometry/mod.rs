//! Shape primitives, implicit fields, mesh deformation, surface sampling and
//! the topological measurements used to certify generated meshes.

mod cloud;
mod field;
pub mod io;
mod marching;
mod mesh;
mod primitives;
mod topology;
mod transform;

pub use cloud::{normalize_unit_sphere, sample_surface, PointCloud};
pub use field::{softmin_combine, sphere_sdf, torus_sdf, Aabb, ScalarField};
pub use marching::{marching_cubes, GridSpec};
pub use mesh::TriangleMesh;
pub use primitives::{cone_mesh, superellipsoid_mesh, supertoroid_mesh};
pub use topology::{
    connected_components, euler_characteristic, is_manifold, split_components, MeshTopology,
};
pub use transform::{apply_rigid_twist, RigidTwist};

pub type Point3 = nalgebra::Point3<f64>;
pub type Vector3 = nalgebra::Vector3<f64>;
