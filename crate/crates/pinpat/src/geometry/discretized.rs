//! Point-cloud stand-ins for measurable sets, with a uniform bucket grid.

use std::collections::HashMap;

use super::{GeometryError, Point};

/// A finite point cloud representing a fattened set: `p` belongs to the set
/// when some stored point is within `thickness` of it.
///
/// `pitch` is the sampling pitch `h` of whatever produced the cloud;
/// `thickness` defaults to `h/2`. Membership and small-ball queries go
/// through a uniform bucket grid with cell edge `max(pitch, thickness)`,
/// which returns exactly the points in a queried ball (no false negatives:
/// every cell overlapping the ball is visited and candidates are distance
/// checked).
#[derive(Clone, Debug)]
pub struct DiscretizedSet {
    points: Vec<Point>,
    dim: usize,
    pitch: f64,
    thickness: f64,
    bounding_radius: f64,
    cell: f64,
    buckets: HashMap<Vec<i64>, Vec<u32>>,
}

impl DiscretizedSet {
    pub fn new(points: Vec<Point>, pitch: f64, thickness: f64) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::TooFewPoints { needed: 1, got: 0 });
        }
        if !(pitch > 0.0) || !pitch.is_finite() || !(thickness > 0.0) || !thickness.is_finite() {
            return Err(GeometryError::BadDiscretization);
        }
        let dim = points[0].dim();
        for p in &points {
            if p.dim() != dim {
                return Err(GeometryError::DimensionMismatch(p.dim(), dim));
            }
        }
        let bounding_radius = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
        let cell = pitch.max(thickness);
        let mut buckets: HashMap<Vec<i64>, Vec<u32>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets
                .entry(cell_key(p, cell))
                .or_default()
                .push(i as u32);
        }
        Ok(DiscretizedSet {
            points,
            dim,
            pitch,
            thickness,
            bounding_radius,
            cell,
            buckets,
        })
    }

    /// `thickness = pitch / 2`.
    pub fn with_default_thickness(points: Vec<Point>, pitch: f64) -> Result<Self, GeometryError> {
        DiscretizedSet::new(points, pitch, pitch / 2.0)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn bounding_radius(&self) -> f64 {
        self.bounding_radius
    }

    /// Set membership: some stored point lies within `thickness` of `p`.
    pub fn contains(&self, p: &Point) -> bool {
        self.has_point_within(p, self.thickness)
    }

    /// Whether any stored point lies within `radius` of `p`. Efficient for
    /// radii up to a few grid cells.
    pub fn has_point_within(&self, p: &Point, radius: f64) -> bool {
        let mut found = false;
        self.walk_cells(p, radius, |idx| {
            if self.points[idx as usize].dist(p) <= radius {
                found = true;
                return false;
            }
            true
        });
        found
    }

    /// Distance from `p` to the nearest stored point at distance ≤ `radius`,
    /// if any.
    pub fn nearest_within(&self, p: &Point, radius: f64) -> Option<(u32, f64)> {
        let mut best: Option<(u32, f64)> = None;
        self.walk_cells(p, radius, |idx| {
            let d = self.points[idx as usize].dist(p);
            if d <= radius && best.is_none_or(|(_, bd)| d < bd) {
                best = Some((idx, d));
            }
            true
        });
        best
    }

    /// Indices of exactly the stored points within `radius` of `center`.
    ///
    /// Adaptive: walks grid cells when the query box is small, otherwise
    /// falls back to a linear scan so that huge radii never enumerate empty
    /// cells.
    pub fn ball(&self, center: &Point, radius: f64) -> Vec<u32> {
        let span = (2.0 * radius / self.cell + 2.0).max(1.0);
        let cells_estimate = span.powi(self.dim as i32);
        let mut out = Vec::new();
        if cells_estimate.is_finite() && (cells_estimate as usize) < self.points.len() {
            self.walk_cells(center, radius, |idx| {
                if self.points[idx as usize].dist(center) <= radius {
                    out.push(idx);
                }
                true
            });
            out.sort_unstable();
        } else {
            for (i, p) in self.points.iter().enumerate() {
                if p.dist(center) <= radius {
                    out.push(i as u32);
                }
            }
        }
        out
    }

    /// Translation by `x` (same pitch and thickness).
    pub fn translate(&self, x: &Point) -> Result<DiscretizedSet, GeometryError> {
        if x.dim() != self.dim {
            return Err(GeometryError::DimensionMismatch(x.dim(), self.dim));
        }
        let pts = self.points.iter().map(|p| p.add(x)).collect();
        DiscretizedSet::new(pts, self.pitch, self.thickness)
    }

    /// Dilation by `lambda > 0`; pitch and thickness scale along.
    pub fn dilate(&self, lambda: f64) -> Result<DiscretizedSet, GeometryError> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(GeometryError::BadDiscretization);
        }
        let pts = self.points.iter().map(|p| p.scale(lambda)).collect();
        DiscretizedSet::new(pts, self.pitch * lambda, self.thickness * lambda)
    }

    /// Visits every point index stored in cells overlapping the ball
    /// `B(center, radius)`. The callback returns `false` to stop early.
    fn walk_cells<F: FnMut(u32) -> bool>(&self, center: &Point, radius: f64, mut f: F) {
        let c = center.coords();
        let lo: Vec<i64> = c.iter().map(|x| floor_cell(x - radius, self.cell)).collect();
        let hi: Vec<i64> = c.iter().map(|x| floor_cell(x + radius, self.cell)).collect();
        let mut key = lo.clone();
        'walk: loop {
            if let Some(bucket) = self.buckets.get(&key) {
                for &idx in bucket {
                    if !f(idx) {
                        return;
                    }
                }
            }
            // odometer increment over the cell box
            for axis in 0..self.dim {
                if key[axis] < hi[axis] {
                    key[axis] += 1;
                    for (a, k) in key.iter_mut().enumerate().take(axis) {
                        *k = lo[a];
                    }
                    continue 'walk;
                }
            }
            return;
        }
    }
}

fn floor_cell(x: f64, cell: f64) -> i64 {
    (x / cell).floor() as i64
}

fn cell_key(p: &Point, cell: f64) -> Vec<i64> {
    p.coords().iter().map(|&x| floor_cell(x, cell)).collect()
}
