//! Points of `R^d` (d ≥ 2) and a cancellation-safe angle.

use super::GeometryError;

/// A point (or vector) of `R^d`, `d ≥ 2`, with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.len() < 2 {
            return Err(GeometryError::BadDimension(coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(Point { coords })
    }

    /// Internal constructor for coordinates already known to be valid.
    pub(crate) fn from_vec(coords: Vec<f64>) -> Self {
        debug_assert!(coords.len() >= 2 && coords.iter().all(|c| c.is_finite()));
        Point { coords }
    }

    pub fn origin(dim: usize) -> Self {
        Point::from_vec(vec![0.0; dim.max(2)])
    }

    /// Standard basis vector `e_axis` (zero-based axis index).
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut c = vec![0.0; dim.max(2)];
        c[axis] = 1.0;
        Point::from_vec(c)
    }

    pub fn planar(x: f64, y: f64) -> Self {
        Point::from_vec(vec![x, y])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0.0)
    }

    pub fn add(&self, o: &Point) -> Point {
        debug_assert_eq!(self.dim(), o.dim());
        Point::from_vec(
            self.coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, o: &Point) -> Point {
        debug_assert_eq!(self.dim(), o.dim());
        Point::from_vec(
            self.coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Point {
        Point::from_vec(self.coords.iter().map(|a| a * s).collect())
    }

    pub fn dot(&self, o: &Point) -> f64 {
        debug_assert_eq!(self.dim(), o.dim());
        self.coords.iter().zip(&o.coords).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, o: &Point) -> f64 {
        self.sub(o).norm()
    }
}

/// Angle between two nonzero vectors, in `[0, π]`.
///
/// Evaluated as `atan2(‖orthogonal component‖, projection)` on the unit
/// normalizations. Unlike `acos` of the raw dot product, this keeps full
/// absolute accuracy for nearly parallel and nearly opposite inputs: the
/// orthogonal component of a near-parallel pair is a small vector obtained
/// by subtraction, so its norm carries the angle at ~1e-16 absolute error.
pub fn angle_between(u: &Point, v: &Point) -> Result<f64, GeometryError> {
    if u.dim() != v.dim() {
        return Err(GeometryError::DimensionMismatch(u.dim(), v.dim()));
    }
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return Err(GeometryError::ZeroVector);
    }
    let uh = u.scale(1.0 / nu);
    let vh = v.scale(1.0 / nv);
    let proj = uh.dot(&vh);
    let orth = vh.sub(&uh.scale(proj));
    Ok(orth.norm().atan2(proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn rejects_bad_points() {
        assert_eq!(
            Point::new(vec![1.0]).unwrap_err(),
            GeometryError::BadDimension(1)
        );
        assert_eq!(
            Point::new(vec![1.0, f64::NAN]).unwrap_err(),
            GeometryError::NonFinite
        );
    }

    #[test]
    fn right_angle_is_exact() {
        let e1 = Point::unit(2, 0);
        let e2 = Point::unit(2, 1);
        assert_eq!(angle_between(&e1, &e2).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn tiny_angle_keeps_absolute_accuracy() {
        let u = Point::planar(1.0, 0.0);
        let v = Point::planar(1.0, 1e-12);
        let a = angle_between(&u, &v).unwrap();
        // exact value is atan(1e-12) = 1e-12 to well below 1e-15
        assert!((a - 1e-12).abs() < 1e-15, "got {a}");
    }

    #[test]
    fn opposite_vectors_give_pi() {
        let u = Point::planar(3.0, -4.0);
        let v = u.scale(-2.5);
        let a = angle_between(&u, &v).unwrap();
        assert!((a - PI).abs() < 1e-12, "got {a}");
    }

    #[test]
    fn near_pi_keeps_accuracy() {
        // v is u rotated by π − 1e-9
        let eps = 1e-9f64;
        let v = Point::planar(-(PI - eps).cos().abs(), (PI - eps).sin());
        let u = Point::planar(1.0, 0.0);
        let a = angle_between(&u, &v).unwrap();
        assert!((a - (PI - eps)).abs() < 1e-12, "got {a}");
    }

    #[test]
    fn zero_vector_rejected() {
        let u = Point::planar(0.0, 0.0);
        let v = Point::planar(1.0, 0.0);
        assert_eq!(angle_between(&u, &v).unwrap_err(), GeometryError::ZeroVector);
    }

    #[test]
    fn invariant_under_scaling() {
        let u = Point::planar(0.3, 0.7);
        let v = Point::planar(-0.2, 0.9);
        let a = angle_between(&u, &v).unwrap();
        let b = angle_between(&u.scale(17.0), &v.scale(0.003)).unwrap();
        assert!((a - b).abs() < 1e-14);
    }
}
