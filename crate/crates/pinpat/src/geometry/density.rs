//! Upper-density estimates at finitely many scales.
//!
//! The 1-d path measures an explicit union of half-open intervals; the N-d
//! path counts cloud points in balls and weights them by the grid cell
//! volume. Ratios are normalized by `R` and `R^d` respectively (not by ball
//! volume), so a full planar disk reports a ratio near `π`.

use super::{DiscretizedSet, GeometryError};

/// A finite union of disjoint half-open intervals `[a, b)` on the line,
/// stored sorted. Touching intervals are merged on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalUnion {
    ivals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { ivals: Vec::new() }
    }

    /// Normalizes arbitrary `(lo, hi)` pairs: drops empty ones, sorts, and
    /// merges overlaps (`[a,b) ∪ [b,c) = [a,c)`).
    pub fn from_intervals(raw: &[(f64, f64)]) -> Self {
        let mut ivals: Vec<(f64, f64)> = raw
            .iter()
            .copied()
            .filter(|(lo, hi)| hi > lo && lo.is_finite() && hi.is_finite())
            .collect();
        ivals.sort_by(|a, b| a.partial_cmp(b).expect("finite endpoints"));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(ivals.len());
        for (lo, hi) in ivals {
            match merged.last_mut() {
                Some((_, end)) if lo <= *end => *end = end.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        IntervalUnion { ivals: merged }
    }

    /// Each point becomes `[x − thickness, x + thickness)`.
    pub fn from_points(points: &[f64], thickness: f64) -> Self {
        let raw: Vec<(f64, f64)> = points
            .iter()
            .map(|&x| (x - thickness, x + thickness))
            .collect();
        IntervalUnion::from_intervals(&raw)
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.ivals
    }

    pub fn is_empty(&self) -> bool {
        self.ivals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.ivals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    /// Lebesgue measure of the union clipped to `[lo, hi)`.
    pub fn measure_clipped(&self, lo: f64, hi: f64) -> f64 {
        self.ivals
            .iter()
            .map(|&(a, b)| (b.min(hi) - a.max(lo)).max(0.0))
            .sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        // binary search on interval starts
        let idx = self.ivals.partition_point(|&(lo, _)| lo <= x);
        idx > 0 && x < self.ivals[idx - 1].1
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut raw = self.ivals.clone();
        raw.extend_from_slice(&other.ivals);
        IntervalUnion::from_intervals(&raw)
    }
}

/// Density ratios of a 1-d set at increasing scales: `measure(S ∩ [0, R)) / R`.
#[derive(Clone, Debug, PartialEq)]
pub struct Density1d {
    pub radii: Vec<f64>,
    pub ratios: Vec<f64>,
    pub sup_ratio: f64,
}

/// Density ratios of an N-d cloud: `count(B(0, R)) · pitch^d / R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityNd {
    pub radii: Vec<f64>,
    pub ratios: Vec<f64>,
    pub sup_ratio: f64,
}

fn check_radii(radii: &[f64]) -> Result<(), GeometryError> {
    if radii.is_empty() {
        return Err(GeometryError::EmptyRadiusList);
    }
    let mut prev = 0.0;
    for &r in radii {
        if !(r > prev) || !r.is_finite() {
            return Err(GeometryError::BadRadiusList);
        }
        prev = r;
    }
    Ok(())
}

/// Density of a 1-d set at each scale in `radii` (positive, strictly
/// increasing).
pub fn upper_density_1d(s: &IntervalUnion, radii: &[f64]) -> Result<Density1d, GeometryError> {
    check_radii(radii)?;
    let ratios: Vec<f64> = radii
        .iter()
        .map(|&r| s.measure_clipped(0.0, r) / r)
        .collect();
    let sup_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(Density1d {
        radii: radii.to_vec(),
        ratios,
        sup_ratio,
    })
}

/// Density of a point cloud at each scale in `radii`; every radius must stay
/// within the cloud's bounding radius, where the count is meaningful.
pub fn upper_density_nd(a: &DiscretizedSet, radii: &[f64]) -> Result<DensityNd, GeometryError> {
    check_radii(radii)?;
    let bound = a.bounding_radius();
    for &r in radii {
        if r > bound {
            return Err(GeometryError::RadiusExceedsBound(r, bound));
        }
    }
    let hd = a.pitch().powi(a.dim() as i32);
    // one pass over the cloud: bucket norms into the radius list
    let mut counts = vec![0u64; radii.len()];
    for p in a.points() {
        let n = p.norm();
        let idx = radii.partition_point(|&r| r < n);
        if idx < radii.len() {
            counts[idx] += 1;
        }
    }
    let mut cumulative = 0u64;
    let mut ratios = Vec::with_capacity(radii.len());
    for (i, &r) in radii.iter().enumerate() {
        cumulative += counts[i];
        ratios.push(cumulative as f64 * hd / r.powi(a.dim() as i32));
    }
    let sup_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(DensityNd {
        radii: radii.to_vec(),
        ratios,
        sup_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    #[test]
    fn union_normalizes_and_merges() {
        let u = IntervalUnion::from_intervals(&[(2.0, 3.0), (0.0, 1.0), (0.5, 0.7), (3.0, 3.5)]);
        assert_eq!(u.intervals(), &[(0.0, 1.0), (2.0, 3.5)]);
        assert!((u.measure() - 2.5).abs() < 1e-15);
        assert!(u.contains(0.0));
        assert!(!u.contains(1.0));
        assert!(u.contains(3.49));
        assert!(!u.contains(3.5));
    }

    #[test]
    fn alternating_intervals_have_density_half() {
        let raw: Vec<(f64, f64)> = (0..50).map(|k| (2.0 * k as f64, 2.0 * k as f64 + 1.0)).collect();
        let s = IntervalUnion::from_intervals(&raw);
        let d = upper_density_1d(&s, &[100.0]).unwrap();
        assert!((d.ratios[0] - 0.5).abs() < 1e-12);
        assert_eq!(d.sup_ratio, d.ratios[0]);
    }

    #[test]
    fn point_set_with_thickness() {
        let s = IntervalUnion::from_points(&[1.0, 2.0, 10.0], 0.25);
        assert!((s.measure() - 1.5).abs() < 1e-15);
        let d = upper_density_1d(&s, &[4.0, 16.0]).unwrap();
        assert!((d.ratios[0] - 1.0 / 4.0).abs() < 1e-12);
        assert!((d.ratios[1] - 1.5 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn empty_radius_list_rejected() {
        let s = IntervalUnion::from_intervals(&[(0.0, 1.0)]);
        assert_eq!(
            upper_density_1d(&s, &[]).unwrap_err(),
            GeometryError::EmptyRadiusList
        );
        assert_eq!(
            upper_density_1d(&s, &[2.0, 1.0]).unwrap_err(),
            GeometryError::BadRadiusList
        );
    }

    #[test]
    fn grid_disk_density_near_pi() {
        let r = 1.0f64;
        let h = r / 200.0;
        let n = (r / h).ceil() as i64;
        let mut pts = Vec::new();
        for i in -n..=n {
            for j in -n..=n {
                let p = Point::planar(i as f64 * h, j as f64 * h);
                if p.norm() <= r {
                    pts.push(p);
                }
            }
        }
        let set = DiscretizedSet::with_default_thickness(pts, h).unwrap();
        let d = upper_density_nd(&set, &[r]).unwrap();
        assert!(
            (d.ratios[0] - std::f64::consts::PI).abs() / std::f64::consts::PI < 0.02,
            "ratio {}",
            d.ratios[0]
        );
    }

    #[test]
    fn radius_beyond_bound_rejected() {
        let set = DiscretizedSet::with_default_thickness(
            vec![Point::planar(1.0, 0.0), Point::planar(0.0, 0.5)],
            0.1,
        )
        .unwrap();
        assert!(matches!(
            upper_density_nd(&set, &[2.0]),
            Err(GeometryError::RadiusExceedsBound(_, _))
        ));
    }

    #[test]
    fn ratios_ignore_point_order() {
        let mut pts: Vec<Point> = (0..40)
            .map(|i| Point::planar((i as f64 * 0.37).sin() * 3.0, (i as f64 * 0.61).cos() * 3.0))
            .collect();
        let set1 = DiscretizedSet::with_default_thickness(pts.clone(), 0.2).unwrap();
        pts.reverse();
        let set2 = DiscretizedSet::with_default_thickness(pts, 0.2).unwrap();
        let radii = [1.0, 2.0, 3.5];
        let d1 = upper_density_nd(&set1, &radii).unwrap();
        let d2 = upper_density_nd(&set2, &radii).unwrap();
        assert_eq!(d1.ratios, d2.ratios);
    }
}
