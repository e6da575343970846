//! Orthogonal maps of `R^d`, stored as dense row-major matrices.

use rand::Rng;

use super::{GeometryError, Pattern, Point};
use crate::config::TOL;

/// An element of `O(d)`: orthogonal within [`crate::config::Tolerances::orthogonality`].
///
/// Reflections are allowed; no determinant sign is enforced anywhere.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    dim: usize,
    /// Row-major `dim × dim` entries.
    m: Vec<f64>,
}

impl Isometry {
    /// Builds from row-major entries, checking `QᵀQ = I` entrywise.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self, GeometryError> {
        if dim < 2 {
            return Err(GeometryError::BadDimension(dim));
        }
        if entries.len() != dim * dim {
            return Err(GeometryError::DimensionMismatch(entries.len(), dim * dim));
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let iso = Isometry { dim, m: entries };
        for i in 0..dim {
            for j in i..dim {
                let mut dot = 0.0;
                for r in 0..dim {
                    dot += iso.m[r * dim + i] * iso.m[r * dim + j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot - target).abs() > TOL.orthogonality {
                    return Err(GeometryError::NotOrthogonal);
                }
            }
        }
        Ok(iso)
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = vec![0.0; dim * dim];
        for i in 0..dim {
            m[i * dim + i] = 1.0;
        }
        Isometry { dim, m }
    }

    /// Rotation by `angle` in the `(e1, e2)` coordinate plane, identity on
    /// the remaining axes.
    pub fn planar_rotation(dim: usize, angle: f64) -> Self {
        let mut iso = Isometry::identity(dim);
        let (s, c) = angle.sin_cos();
        iso.m[0] = c;
        iso.m[1] = -s;
        iso.m[dim] = s;
        iso.m[dim + 1] = c;
        iso
    }

    /// Orthogonal map sending `e1 ↦ a` and `e2 ↦ b` for an orthonormal pair
    /// `(a, b)`, completed deterministically on the remaining axes by
    /// Gram–Schmidt over the standard basis.
    pub fn from_first_two_columns(a: &Point, b: &Point) -> Result<Self, GeometryError> {
        let dim = a.dim();
        if b.dim() != dim {
            return Err(GeometryError::DimensionMismatch(dim, b.dim()));
        }
        let mut cols: Vec<Point> = vec![a.clone(), b.clone()];
        for axis in 0..dim {
            if cols.len() == dim {
                break;
            }
            let mut v = Point::unit(dim, axis);
            for c in &cols {
                v = v.sub(&c.scale(c.dot(&v)));
            }
            let n = v.norm();
            if n > 1e-8 {
                cols.push(v.scale(1.0 / n));
            }
        }
        if cols.len() != dim {
            return Err(GeometryError::NotOrthogonal);
        }
        let mut m = vec![0.0; dim * dim];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..dim {
                m[i * dim + j] = c.coords()[i];
            }
        }
        Isometry::new(dim, m)
    }

    /// Orthogonal map sending the direction of `u` to `+e1`, deterministic
    /// completion elsewhere.
    pub fn aligning_to_first_axis(u: &Point) -> Result<Self, GeometryError> {
        let n = u.norm();
        if n == 0.0 {
            return Err(GeometryError::ZeroVector);
        }
        let dim = u.dim();
        let uh = u.scale(1.0 / n);
        // columns of the inverse: first column = uh, completed; we want the
        // transpose so that the map sends uh to e1.
        let mut cols: Vec<Point> = vec![uh];
        for axis in 0..dim {
            if cols.len() == dim {
                break;
            }
            let mut v = Point::unit(dim, axis);
            for c in &cols {
                v = v.sub(&c.scale(c.dot(&v)));
            }
            let nn = v.norm();
            if nn > 1e-8 {
                cols.push(v.scale(1.0 / nn));
            }
        }
        if cols.len() != dim {
            return Err(GeometryError::NotOrthogonal);
        }
        let mut m = vec![0.0; dim * dim];
        for (i, c) in cols.iter().enumerate() {
            for j in 0..dim {
                m[i * dim + j] = c.coords()[j];
            }
        }
        Isometry::new(dim, m)
    }

    /// Haar-ish random orthogonal matrix: Gram–Schmidt of a Gaussian matrix.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Self {
        loop {
            let mut cols: Vec<Point> = Vec::with_capacity(dim);
            'outer: for _ in 0..dim {
                for _attempt in 0..8 {
                    let raw: Vec<f64> = (0..dim)
                        .map(|_| {
                            // Box–Muller normal deviate
                            let u1: f64 = rng.gen_range(1e-12..1.0);
                            let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                            (-2.0 * u1.ln()).sqrt() * u2.cos()
                        })
                        .collect();
                    let mut v = Point::from_vec(raw);
                    for c in &cols {
                        v = v.sub(&c.scale(c.dot(&v)));
                    }
                    let n = v.norm();
                    if n > 1e-6 {
                        cols.push(v.scale(1.0 / n));
                        continue 'outer;
                    }
                }
                break;
            }
            if cols.len() < dim {
                continue;
            }
            let mut m = vec![0.0; dim * dim];
            for (j, c) in cols.iter().enumerate() {
                for i in 0..dim {
                    m[i * dim + j] = c.coords()[i];
                }
            }
            if let Ok(iso) = Isometry::new(dim, m) {
                return iso;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.m
    }

    pub fn column(&self, j: usize) -> Point {
        Point::from_vec((0..self.dim).map(|i| self.m[i * self.dim + j]).collect())
    }

    /// Inverse (= transpose).
    pub fn inverse(&self) -> Isometry {
        let d = self.dim;
        let mut m = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                m[j * d + i] = self.m[i * d + j];
            }
        }
        Isometry { dim: d, m }
    }

    pub fn compose(&self, other: &Isometry) -> Result<Isometry, GeometryError> {
        if self.dim != other.dim {
            return Err(GeometryError::DimensionMismatch(self.dim, other.dim));
        }
        let d = self.dim;
        let mut m = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for k in 0..d {
                    s += self.m[i * d + k] * other.m[k * d + j];
                }
                m[i * d + j] = s;
            }
        }
        Ok(Isometry { dim: d, m })
    }

    pub fn apply(&self, p: &Point) -> Result<Point, GeometryError> {
        if p.dim() != self.dim {
            return Err(GeometryError::DimensionMismatch(p.dim(), self.dim));
        }
        let d = self.dim;
        let c = p.coords();
        let out: Vec<f64> = (0..d)
            .map(|i| (0..d).map(|j| self.m[i * d + j] * c[j]).sum())
            .collect();
        Ok(Point::from_vec(out))
    }

    /// Applies the map to every point of a pattern. Normalization survives:
    /// the origin is fixed and pairwise distances are preserved.
    pub fn apply_pattern(&self, v: &Pattern) -> Result<Pattern, GeometryError> {
        let pts = v
            .points()
            .iter()
            .map(|p| self.apply(p))
            .collect::<Result<Vec<_>, _>>()?;
        Pattern::new(pts)
    }
}
