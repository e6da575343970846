//! Points, patterns, isometries, and density estimation in `R^d`.

mod density;
mod discretized;
mod isometry;
mod pattern;
mod point;

pub use density::{
    upper_density_1d, upper_density_nd, Density1d, DensityNd, IntervalUnion,
};
pub use discretized::DiscretizedSet;
pub use isometry::Isometry;
pub use pattern::{normalize, orient_first_to_axis, smallest_angle, Pattern};
pub use point::{angle_between, Point};

use thiserror::Error;

/// Errors raised by geometric constructors and operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("pattern points must be pairwise distinct")]
    DuplicatePoints,
    #[error("pattern needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("three pattern points are collinear")]
    CollinearTriple,
    #[error("matrix is not orthogonal within tolerance")]
    NotOrthogonal,
    #[error("radius list must be non-empty")]
    EmptyRadiusList,
    #[error("radius list must be positive and strictly increasing")]
    BadRadiusList,
    #[error("radius {0} exceeds the set's bounding radius {1}")]
    RadiusExceedsBound(f64, f64),
    #[error("grid pitch and thickness must be positive and finite")]
    BadDiscretization,
}
