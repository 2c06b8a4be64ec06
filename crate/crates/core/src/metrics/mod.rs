//! Distances between persistence diagrams and between point clouds, and
//! persistence images.

mod clouds;
mod diagrams;
mod image;

pub use clouds::{chamfer, hausdorff};
pub use diagrams::{bottleneck, bottleneck_pairs, wasserstein2, wasserstein2_pairs};
pub use image::{persistence_image, pie, ImageParams, PersistenceImage};
