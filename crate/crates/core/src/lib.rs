//! Computational-topology toolkit: procedural generation of labelled manifold
//! meshes, Vietoris–Rips persistence of point clouds, diagram distances and
//! vectorizations, and the set-prediction losses and forward decoder used to
//! predict persistence diagrams from point-cloud encoder features.

pub mod assignment;
pub mod decoder;
pub mod donut;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod persistence;
pub mod rng;
pub mod set_prediction;
pub mod vectorize;

pub use error::{Error, Result};
