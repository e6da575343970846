//! Decides whether a pattern occurs at a pin and scale inside a
//! discretized set, and aggregates the scales at which it does.
//!
//! A pattern `V` with its pin at the origin occurs at pin `x` and scale
//! `r` when some orthogonal map `O` puts every scaled point `x + rO(p)`
//! within the tolerance of a stored point. Two search paths exist: a
//! circle path for patterns whose non-pin points share a common norm
//! (reduce to an annulus around the pin and match angles), and a generic
//! path that seeds on distance-consistent candidate tuples and completes
//! the alignment by least squares.

mod align;
mod circle;
mod sphere;

pub use circle::match_equal_gap;
pub use sphere::{
    coarea_split, slice_sphere, sphere_measure_checks, CoareaSplit, SphereCheckReport, SphereSlice,
};

use crate::config::TOL;
use crate::geometry::{
    upper_density_1d, Density1d, DiscretizedSet, GeometryError, IntervalUnion, Isometry, Pattern,
    Point,
};
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DetectorError {
    #[error("the pin must lie in the set within the tolerance")]
    PinNotInSet,
    #[error("the pattern's first point must be the origin (the pin)")]
    PatternNotPinned,
    #[error("points do not share a 2-plane through the origin")]
    NotCoplanar,
    #[error("point families differ in cardinality or radius")]
    LengthMismatch,
    #[error("scale grid must be non-empty, finite, positive, strictly increasing")]
    BadScaleGrid,
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("scale must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("the circle path needs equal-norm non-pin points in the first coordinate plane")]
    PathUnavailable,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Which occurrence search to run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchPath {
    /// Circle path when the pattern supports it in the plane, generic
    /// otherwise.
    Auto,
    /// Force the circle path. In dimension 3 and up this searches the
    /// meridian circles produced by [`slice_sphere`] at a default
    /// resolution; that search is sound but only finds copies lying in a
    /// sliced plane.
    Circle,
    /// Circle path with an explicit slice resolution per angle axis.
    CircleSliced { per_axis: usize },
    /// Force the seeded alignment search.
    Generic,
}

/// Scales at which the pattern occurs at the pin, each with a witness map,
/// plus the density profile of the accepted scales over the scanned grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFactorSet {
    pub pin: Point,
    pub pattern: Pattern,
    /// Ascending accepted scales with their witnesses.
    pub scales: Vec<(f64, Isometry)>,
    /// The grid that was scanned.
    pub grid: Vec<f64>,
    pub tol: f64,
    /// Upper density of the accepted scales, intervals of half a grid step
    /// around each accepted scale, measured against the grid radii.
    pub density: Density1d,
}

impl ScalingFactorSet {
    pub fn accepted(&self) -> Vec<f64> {
        self.scales.iter().map(|(r, _)| *r).collect()
    }

    /// The accepted scales fattened by half a grid step, as a set of reals.
    pub fn interval_union(&self) -> IntervalUnion {
        IntervalUnion::from_points(&self.accepted(), grid_half_step(&self.grid))
    }
}

/// Distances from the pin to every set point, sorted and deduplicated
/// within a quarter of the grid pitch.
pub fn pinned_distance_set(a: &DiscretizedSet, x: &Point) -> Vec<f64> {
    let mut dists: Vec<f64> = a.points().iter().map(|p| p.dist(x)).collect();
    dists.sort_by(|p, q| p.partial_cmp(q).expect("distances are finite"));
    let merge = a.pitch() / 4.0;
    let mut out: Vec<f64> = Vec::with_capacity(dists.len());
    for d in dists {
        match out.last() {
            Some(&last) if d - last <= merge => {}
            _ => out.push(d),
        }
    }
    out
}

/// Set points indexed by distance from a fixed pin, for fast annulus
/// queries when one pin is probed at many scales.
pub(crate) struct PinView {
    pin: Point,
    dist: Vec<f64>,
    idx: Vec<u32>,
}

impl PinView {
    pub(crate) fn new(e: &DiscretizedSet, pin: &Point) -> Self {
        let mut pairs: Vec<(f64, u32)> = e
            .points()
            .iter()
            .enumerate()
            .map(|(i, p)| (p.dist(pin), i as u32))
            .collect();
        pairs.sort_by(|a, b| {
            a.0.partial_cmp(&b.0).expect("distances are finite").then(a.1.cmp(&b.1))
        });
        PinView {
            pin: pin.clone(),
            dist: pairs.iter().map(|p| p.0).collect(),
            idx: pairs.iter().map(|p| p.1).collect(),
        }
    }

    pub(crate) fn pin(&self) -> &Point {
        &self.pin
    }

    /// Indices of set points whose distance from the pin lies in [lo, hi].
    pub(crate) fn annulus(&self, lo: f64, hi: f64) -> &[u32] {
        let a = self.dist.partition_point(|&d| d < lo);
        let b = self.dist.partition_point(|&d| d <= hi);
        &self.idx[a..b]
    }
}

/// True for every returned witness: each pattern point lands within `tol`
/// of a stored point. Checked on every accept, never assumed.
pub(crate) fn verify_witness(
    e: &DiscretizedSet,
    x: &Point,
    v: &Pattern,
    r: f64,
    o: &Isometry,
    tol: f64,
) -> bool {
    v.points().iter().all(|p| {
        let Ok(image) = o.apply(p) else { return false };
        e.has_point_within(&x.add(&image.scale(r)), tol)
    })
}

fn validate_occurrence_inputs(
    e: &DiscretizedSet,
    x: &Point,
    v: &Pattern,
    r: f64,
    tol: f64,
) -> Result<(), DetectorError> {
    if e.dim() != x.dim() {
        return Err(GeometryError::DimensionMismatch(e.dim(), x.dim()).into());
    }
    if v.dim() != x.dim() {
        return Err(GeometryError::DimensionMismatch(v.dim(), x.dim()).into());
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(DetectorError::BadTolerance(tol));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(DetectorError::BadScale(r));
    }
    if v.points()[0].norm() > TOL.normalization {
        return Err(DetectorError::PatternNotPinned);
    }
    if !e.has_point_within(x, tol) {
        return Err(DetectorError::PinNotInSet);
    }
    Ok(())
}

/// Does `x + rO(V)` fit inside `E` within `tol` for some orthogonal `O`?
/// Returns a verified witness or `None`. Sound always; complete for copies
/// whose points sit within `tol/4` of stored points (circle path, and the
/// generic path for patterns of at most 17 points).
pub fn occurs_at(
    e: &DiscretizedSet,
    x: &Point,
    v: &Pattern,
    r: f64,
    tol: f64,
) -> Result<Option<Isometry>, DetectorError> {
    occurs_at_with(e, x, v, r, tol, SearchPath::Auto)
}

/// [`occurs_at`] with an explicit search path.
pub fn occurs_at_with(
    e: &DiscretizedSet,
    x: &Point,
    v: &Pattern,
    r: f64,
    tol: f64,
    path: SearchPath,
) -> Result<Option<Isometry>, DetectorError> {
    validate_occurrence_inputs(e, x, v, r, tol)?;
    let view = PinView::new(e, x);
    occurs_with_view(e, &view, v, r, tol, path)
}

/// Slice resolution making circle spacing at most the set thickness at the
/// given ring radius, capped to keep forced-path calls affordable.
fn default_slice_resolution(ring: f64, thickness: f64) -> usize {
    let wanted = (std::f64::consts::PI * ring / thickness).ceil();
    (wanted as usize).clamp(8, 512)
}

pub(crate) fn occurs_with_view(
    e: &DiscretizedSet,
    view: &PinView,
    v: &Pattern,
    r: f64,
    tol: f64,
    path: SearchPath,
) -> Result<Option<Isometry>, DetectorError> {
    match path {
        SearchPath::Auto => {
            if e.dim() == 2 && circle::circle_profile(v).is_some() {
                Ok(circle::occurs_planar(e, view, v, r, tol))
            } else {
                Ok(align::occurs_generic(e, view, v, r, tol))
            }
        }
        SearchPath::Circle => {
            let profile = circle::circle_profile(v).ok_or(DetectorError::PathUnavailable)?;
            if e.dim() == 2 {
                Ok(circle::occurs_planar(e, view, v, r, tol))
            } else {
                let per_axis = default_slice_resolution(r * profile.0, e.thickness());
                circle::occurs_sliced(e, view, v, r, tol, per_axis)
            }
        }
        SearchPath::CircleSliced { per_axis } => {
            circle::circle_profile(v).ok_or(DetectorError::PathUnavailable)?;
            if e.dim() == 2 {
                Ok(circle::occurs_planar(e, view, v, r, tol))
            } else {
                circle::occurs_sliced(e, view, v, r, tol, per_axis)
            }
        }
        SearchPath::Generic => Ok(align::occurs_generic(e, view, v, r, tol)),
    }
}

fn grid_half_step(grid: &[f64]) -> f64 {
    if grid.len() >= 2 {
        let mut step = f64::INFINITY;
        for w in grid.windows(2) {
            step = step.min(w[1] - w[0]);
        }
        step / 2.0
    } else {
        // degenerate single-point grid: fatten by half the scale itself
        grid.first().copied().unwrap_or(0.0) / 2.0
    }
}

fn validate_grid(grid: &[f64]) -> Result<(), DetectorError> {
    if grid.is_empty() {
        return Err(DetectorError::BadScaleGrid);
    }
    if grid.iter().any(|r| !r.is_finite() || *r <= 0.0) {
        return Err(DetectorError::BadScaleGrid);
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DetectorError::BadScaleGrid);
    }
    Ok(())
}

/// Scans the grid of scales at one pin, in parallel, and assembles the
/// accepted scales with witnesses plus their density profile. The result
/// is identical for any thread count: grid order decides everything.
pub fn pinned_scaling_set(
    e: &DiscretizedSet,
    x: &Point,
    v: &Pattern,
    r_grid: &[f64],
    tol: f64,
) -> Result<ScalingFactorSet, DetectorError> {
    pinned_scaling_set_with(e, x, v, r_grid, tol, SearchPath::Auto)
}

/// [`pinned_scaling_set`] with an explicit search path.
pub fn pinned_scaling_set_with(
    e: &DiscretizedSet,
    x: &Point,
    v: &Pattern,
    r_grid: &[f64],
    tol: f64,
    path: SearchPath,
) -> Result<ScalingFactorSet, DetectorError> {
    validate_grid(r_grid)?;
    validate_occurrence_inputs(e, x, v, r_grid[0], tol)?;
    let view = PinView::new(e, x);
    let outcomes: Vec<Option<(f64, Isometry)>> = r_grid
        .par_iter()
        .map(|&r| {
            occurs_with_view(e, &view, v, r, tol, path).map(|hit| hit.map(|o| (r, o)))
        })
        .collect::<Result<_, _>>()?;
    let scales: Vec<(f64, Isometry)> = outcomes.into_iter().flatten().collect();
    let accepted: Vec<f64> = scales.iter().map(|(r, _)| *r).collect();
    let union = IntervalUnion::from_points(&accepted, grid_half_step(r_grid));
    let density = upper_density_1d(&union, r_grid)?;
    Ok(ScalingFactorSet {
        pin: x.clone(),
        pattern: v.clone(),
        scales,
        grid: r_grid.to_vec(),
        tol,
        density,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::angle_between;
    use crate::seeding::stream_rng;
    use rand::Rng;

    fn pentagon_pattern() -> Pattern {
        let theta = std::f64::consts::TAU / 5.0;
        Pattern::new(vec![
            Point::origin(2),
            Point::planar(1.0, 0.0),
            Point::planar(theta.cos(), theta.sin()),
        ])
        .unwrap()
    }

    fn exact_copy_set(v: &Pattern, rot: f64) -> DiscretizedSet {
        let o = Isometry::planar_rotation(2, rot);
        let pts: Vec<Point> = v.points().iter().map(|p| o.apply(p).unwrap()).collect();
        DiscretizedSet::new(pts, 0.5, 1e-6).unwrap()
    }

    #[test]
    fn exact_pattern_is_found_with_identity_like_witness() {
        let v = pentagon_pattern();
        let e = exact_copy_set(&v, 0.0);
        let x = Point::origin(2);
        let o = occurs_at(&e, &x, &v, 1.0, 1e-5).unwrap().expect("copy present");
        assert!(verify_witness(&e, &x, &v, 1.0, &o, 1e-5));
    }

    #[test]
    fn rotated_copy_yields_rotated_witness() {
        let v = pentagon_pattern();
        let e = exact_copy_set(&v, 1.0);
        let x = Point::origin(2);
        let o = occurs_at(&e, &x, &v, 1.0, 1e-5).unwrap().expect("rotated copy present");
        assert!(verify_witness(&e, &x, &v, 1.0, &o, 1e-5));
        let image = o.apply(&v.points()[1]).unwrap();
        assert!((angle_between(&image, &Point::planar(1.0, 0.0)).unwrap() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn wrong_scale_is_rejected_by_both_paths() {
        let v = pentagon_pattern();
        let e = exact_copy_set(&v, 0.0);
        let x = Point::origin(2);
        for path in [SearchPath::Circle, SearchPath::Generic] {
            let hit = occurs_at_with(&e, &x, &v, 1.3, 1e-5, path).unwrap();
            assert!(hit.is_none(), "{path:?} accepted a wrong scale");
        }
    }

    #[test]
    fn pin_must_be_in_the_set() {
        let v = pentagon_pattern();
        let e = exact_copy_set(&v, 0.0);
        let far = Point::planar(9.0, 9.0);
        assert!(matches!(
            occurs_at(&e, &far, &v, 1.0, 1e-5),
            Err(DetectorError::PinNotInSet)
        ));
    }

    #[test]
    fn pattern_must_be_pinned_at_origin() {
        let off = Pattern::new(vec![Point::planar(0.5, 0.0), Point::planar(1.5, 0.0)]).unwrap();
        let e = DiscretizedSet::new(
            vec![Point::origin(2), Point::planar(1.0, 0.0)],
            0.5,
            1e-6,
        )
        .unwrap();
        assert!(matches!(
            occurs_at(&e, &Point::origin(2), &off, 1.0, 1e-3),
            Err(DetectorError::PatternNotPinned)
        ));
    }

    #[test]
    fn distance_set_basics() {
        let a = DiscretizedSet::new(vec![Point::origin(2), Point::planar(3.0, 4.0)], 0.5, 0.25)
            .unwrap();
        let d = pinned_distance_set(&a, &Point::origin(2));
        assert_eq!(d.len(), 2);
        assert_eq!(d[0], 0.0);
        assert!((d[1] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn distance_set_translation_invariant() {
        let mut rng = stream_rng(11, 0);
        let pts: Vec<Point> = (0..40)
            .map(|_| Point::planar(rng.gen::<f64>() * 4.0, rng.gen::<f64>() * 4.0))
            .collect();
        let a = DiscretizedSet::new(pts, 0.1, 0.05).unwrap();
        let x = Point::planar(0.3, -0.7);
        let shift = Point::planar(2.0, -1.0);
        let b = a.translate(&shift).unwrap();
        let da = pinned_distance_set(&a, &x);
        let db = pinned_distance_set(&b, &x.add(&shift));
        assert_eq!(da.len(), db.len());
        for (p, q) in da.iter().zip(&db) {
            assert!((p - q).abs() < 1e-10);
        }
    }

    #[test]
    fn distance_set_isometry_invariant() {
        let mut rng = stream_rng(12, 0);
        let pts: Vec<Point> = (0..40)
            .map(|_| Point::planar(rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0))
            .collect();
        let a = DiscretizedSet::new(pts.clone(), 0.1, 0.05).unwrap();
        let x = Point::planar(0.4, 0.9);
        let o = Isometry::random(&mut rng, 2);
        let moved = DiscretizedSet::new(pts.iter().map(|p| o.apply(p).unwrap()).collect(), 0.1, 0.05)
            .unwrap();
        let da = pinned_distance_set(&a, &x);
        let db = pinned_distance_set(&moved, &o.apply(&x).unwrap());
        assert_eq!(da.len(), db.len());
        for (p, q) in da.iter().zip(&db) {
            assert!((p - q).abs() < 1e-10);
        }
    }

    #[test]
    fn scaling_set_orders_scales_and_reports_density() {
        let v = pentagon_pattern();
        let e = exact_copy_set(&v, 0.0);
        let x = Point::origin(2);
        let grid: Vec<f64> = (1..=40).map(|i| 0.05 * i as f64).collect();
        let s = pinned_scaling_set(&e, &x, &v, &grid, 1e-4).unwrap();
        assert_eq!(s.scales.len(), 1);
        assert!((s.scales[0].0 - 1.0).abs() < 1e-12);
        assert!(s.density.sup_ratio > 0.0);
        assert_eq!(s.grid.len(), 40);
    }

    #[test]
    fn scaling_set_empty_when_only_the_pin_exists() {
        let v = pentagon_pattern();
        let e = DiscretizedSet::new(
            vec![Point::origin(2), Point::planar(5.0, 5.0)],
            0.5,
            1e-6,
        )
        .unwrap();
        let s = pinned_scaling_set(&e, &Point::origin(2), &v, &[0.5, 1.0, 1.5], 1e-4).unwrap();
        assert!(s.scales.is_empty());
        assert_eq!(s.density.sup_ratio, 0.0);
    }

    #[test]
    fn grid_validation() {
        let v = pentagon_pattern();
        let e = exact_copy_set(&v, 0.0);
        let x = Point::origin(2);
        for bad in [vec![], vec![1.0, 1.0], vec![2.0, 1.0], vec![-1.0, 1.0]] {
            assert!(matches!(
                pinned_scaling_set(&e, &x, &v, &bad, 1e-4),
                Err(DetectorError::BadScaleGrid)
            ));
        }
    }

    #[test]
    fn scale_equivariance_at_lambda_two() {
        let v = pentagon_pattern();
        let e = exact_copy_set(&v, 0.7);
        let x = Point::origin(2);
        let grid: Vec<f64> = (1..=30).map(|i| 0.1 * i as f64).collect();
        let s1 = pinned_scaling_set(&e, &x, &v, &grid, 1e-4).unwrap();
        let lambda = 2.0;
        let e2 = e.dilate(lambda).unwrap();
        let grid2: Vec<f64> = grid.iter().map(|r| r * lambda).collect();
        let s2 = pinned_scaling_set(&e2, &x.scale(lambda), &v, &grid2, 1e-4 * lambda).unwrap();
        let a1 = s1.accepted();
        let a2 = s2.accepted();
        assert_eq!(a1.len(), a2.len());
        for (r1, r2) in a1.iter().zip(&a2) {
            assert!((r2 - lambda * r1).abs() < 1e-9);
        }
    }

    #[test]
    fn annulus_view_matches_direct_distances() {
        let mut rng = stream_rng(5, 1);
        let pts: Vec<Point> = (0..200)
            .map(|_| Point::planar(rng.gen::<f64>() * 6.0 - 3.0, rng.gen::<f64>() * 6.0 - 3.0))
            .collect();
        let e = DiscretizedSet::new(pts, 0.2, 0.1).unwrap();
        let pin = Point::planar(0.1, 0.2);
        let view = PinView::new(&e, &pin);
        let (lo, hi) = (1.0, 2.0);
        let mut expect: Vec<u32> = e
            .points()
            .iter()
            .enumerate()
            .filter(|(_, p)| {
                let d = p.dist(&pin);
                (lo..=hi).contains(&d)
            })
            .map(|(i, _)| i as u32)
            .collect();
        let mut got = view.annulus(lo, hi).to_vec();
        expect.sort_unstable();
        got.sort_unstable();
        assert_eq!(got, expect);
    }
}
