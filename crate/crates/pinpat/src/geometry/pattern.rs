//! Finite point patterns and their angular data.

use super::{angle_between, GeometryError, Isometry, Point};
use crate::config::TOL;

/// A finite pattern of `k ≥ 2` pairwise-distinct points in `R^d`.
///
/// `normalized` records whether the first point is the origin and the
/// minimum pairwise distance is 1 (both within
/// [`crate::config::Tolerances::normalization`]); the flag is recomputed on
/// construction, so applying an isometry keeps it honest.
#[derive(Clone, Debug, PartialEq)]
pub struct Pattern {
    points: Vec<Point>,
    dim: usize,
    normalized: bool,
}

impl Pattern {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.len() < 2 {
            return Err(GeometryError::TooFewPoints {
                needed: 2,
                got: points.len(),
            });
        }
        let dim = points[0].dim();
        for p in &points {
            if p.dim() != dim {
                return Err(GeometryError::DimensionMismatch(p.dim(), dim));
            }
        }
        let mut min_dist = f64::INFINITY;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let d = points[i].dist(&points[j]);
                if d == 0.0 {
                    return Err(GeometryError::DuplicatePoints);
                }
                min_dist = min_dist.min(d);
            }
        }
        let normalized =
            points[0].norm() <= TOL.normalization && (min_dist - 1.0).abs() <= TOL.normalization;
        Ok(Pattern {
            points,
            dim,
            normalized,
        })
    }

    /// Equilateral triangle `{0, e1, (1/2, √3/2)}` in the plane.
    pub fn equilateral_triangle() -> Pattern {
        Pattern::new(vec![
            Point::planar(0.0, 0.0),
            Point::planar(1.0, 0.0),
            Point::planar(0.5, 3f64.sqrt() / 2.0),
        ])
        .expect("static pattern")
    }

    /// Two-point pattern `{0, e1}` in dimension `dim`.
    pub fn segment(dim: usize) -> Pattern {
        Pattern::new(vec![Point::origin(dim), Point::unit(dim, 0)]).expect("static pattern")
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points `k`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn min_pairwise_distance(&self) -> f64 {
        let mut min_dist = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                min_dist = min_dist.min(self.points[i].dist(&self.points[j]));
            }
        }
        min_dist
    }
}

/// Translates the first point to the origin and rescales so the minimum
/// pairwise distance is 1. Idempotent; the result is similar to the input
/// (translation and uniform scaling only; any rotation is left to
/// [`orient_first_to_axis`]).
pub fn normalize(v: &Pattern) -> Result<Pattern, GeometryError> {
    let base = v.points[0].clone();
    let shifted: Vec<Point> = v.points.iter().map(|p| p.sub(&base)).collect();
    let tmp = Pattern::new(shifted)?;
    let min_dist = tmp.min_pairwise_distance();
    if min_dist == 0.0 || !min_dist.is_finite() {
        return Err(GeometryError::DuplicatePoints);
    }
    let scaled: Vec<Point> = tmp.points.iter().map(|p| p.scale(1.0 / min_dist)).collect();
    Pattern::new(scaled)
}

/// Optional orientation step: rotates a pattern whose first point is the
/// origin so that its second point lands on the positive `e1` ray.
pub fn orient_first_to_axis(v: &Pattern) -> Result<Pattern, GeometryError> {
    let dir = v.points[1].sub(&v.points[0]);
    let o = Isometry::aligning_to_first_axis(&dir)?;
    o.apply_pattern(v)
}

/// Minimum over all vertex triples of the angle at the middle vertex, in
/// `(0, π)`.
///
/// Requires `k ≥ 3`. Any triple whose angle is within
/// [`crate::config::Tolerances::collinearity`] of `0` or `π` makes the
/// pattern degenerate and is rejected.
pub fn smallest_angle(v: &Pattern) -> Result<f64, GeometryError> {
    let k = v.len();
    if k < 3 {
        return Err(GeometryError::TooFewPoints { needed: 3, got: k });
    }
    let mut min_angle = f64::INFINITY;
    for j in 0..k {
        for i in 0..k {
            if i == j {
                continue;
            }
            for l in i + 1..k {
                if l == j {
                    continue;
                }
                let a = v.points[i].sub(&v.points[j]);
                let b = v.points[l].sub(&v.points[j]);
                let angle = angle_between(&a, &b)?;
                if angle <= TOL.collinearity || angle >= std::f64::consts::PI - TOL.collinearity {
                    return Err(GeometryError::CollinearTriple);
                }
                min_angle = min_angle.min(angle);
            }
        }
    }
    Ok(min_angle)
}
