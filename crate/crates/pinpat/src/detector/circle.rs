//! Circle search: when every non-pin pattern point sits at one common norm
//! in the first coordinate plane, a scaled copy pinned at `x` puts all of
//! them on one circle around the pin. Candidates come from the matching
//! annulus of the set; the search is over anchor assignments in angle
//! space, and every tentative witness is verified at full tolerance before
//! being returned.

use super::{verify_witness, DetectorError, PinView};
use crate::config::TOL;
use crate::detector::sphere::slice_sphere;
use crate::geometry::{DiscretizedSet, GeometryError, Isometry, Pattern, Point};

/// Common norm and planar angles of the non-pin points, when the pattern
/// qualifies for the circle path: equal norms, and (past dimension 2) all
/// mass in the first coordinate plane.
pub(crate) fn circle_profile(v: &Pattern) -> Option<(f64, Vec<f64>)> {
    let pts = &v.points()[1..];
    let rho = pts[0].norm();
    if rho <= TOL.normalization {
        return None;
    }
    let mut angles = Vec::with_capacity(pts.len());
    for p in pts {
        if (p.norm() - rho).abs() > TOL.normalization * rho.max(1.0) {
            return None;
        }
        let c = p.coords();
        if c[2..].iter().any(|&z| z.abs() > TOL.normalization * rho.max(1.0)) {
            return None;
        }
        angles.push(c[1].atan2(c[0]));
    }
    Some((rho, angles))
}

/// True when some angle in the sorted list lies within `tol` of `t`,
/// counting wraparound at ±π.
fn has_angle_near(sorted: &[f64], t: f64, tol: f64) -> bool {
    let t = wrap_angle(t);
    let i = sorted.partition_point(|&a| a < t);
    let near = |a: f64| {
        let mut d = (a - t).abs();
        if d > std::f64::consts::PI {
            d = std::f64::consts::TAU - d;
        }
        d <= tol
    };
    if i < sorted.len() && near(sorted[i]) {
        return true;
    }
    if i > 0 && near(sorted[i - 1]) {
        return true;
    }
    // wraparound neighbours
    (!sorted.is_empty()) && (near(sorted[0]) || near(sorted[sorted.len() - 1]))
}

fn wrap_angle(t: f64) -> f64 {
    let mut t = t.rem_euclid(std::f64::consts::TAU);
    if t >= std::f64::consts::PI {
        t -= std::f64::consts::TAU;
    }
    t
}

/// Planar reflection across the line through the origin at angle `gamma`.
fn planar_reflection(gamma: f64) -> Isometry {
    let (s, c) = (2.0 * gamma).sin_cos();
    Isometry::new(2, vec![c, s, s, -c]).expect("reflections are orthogonal")
}

/// Planar circle search. For each annulus candidate taken as the image of
/// the first non-pin point, the witness is fully determined (one rotation
/// and one reflection); a sorted-angle prefilter rejects hopeless anchors
/// cheaply and the survivor is verified at full tolerance. Complete for
/// copies within `tol/4`: the anchor drawn from the true copy shifts the
/// constructed witness by at most `tol/4` per point.
pub(crate) fn occurs_planar(
    e: &DiscretizedSet,
    view: &PinView,
    v: &Pattern,
    r: f64,
    tol: f64,
) -> Option<Isometry> {
    let (rho, psi) = circle_profile(v)?;
    let ring = r * rho;
    let cand = view.annulus((ring - tol).max(0.0), ring + tol);
    if cand.is_empty() {
        return None;
    }
    let x = view.pin().coords();
    let angles: Vec<f64> = cand
        .iter()
        .map(|&i| {
            let c = e.points()[i as usize].coords();
            (c[1] - x[1]).atan2(c[0] - x[0])
        })
        .collect();
    let mut sorted = angles.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("angles are finite"));
    let pre_tol = 1.5 * tol / ring + 1e-12;
    let xp = view.pin();
    for &a in &angles {
        // rotation branch: pattern angle psi[0] lands on the anchor angle
        let delta = a - psi[0];
        if psi
            .iter()
            .all(|&p| has_angle_near(&sorted, p + delta, pre_tol))
        {
            let o = Isometry::planar_rotation(2, delta);
            if verify_witness(e, xp, v, r, &o, tol) {
                return Some(o);
            }
        }
        // reflection branch: angles map to 2*gamma - psi
        let gamma = 0.5 * (a + psi[0]);
        if psi
            .iter()
            .all(|&p| has_angle_near(&sorted, 2.0 * gamma - p, pre_tol))
        {
            let o = planar_reflection(gamma);
            if verify_witness(e, xp, v, r, &o, tol) {
                return Some(o);
            }
        }
    }
    None
}

/// Circle search in dimension 3 and up, over the meridian circles of
/// [`slice_sphere`]: each slice's plane is scanned exactly like the planar
/// case, with the witness built from the slice basis. Sound (witnesses are
/// verified); finds copies lying in a sliced plane, which is a vanishing
/// slice of all planes, so `None` here is not a proof of absence.
pub(crate) fn occurs_sliced(
    e: &DiscretizedSet,
    view: &PinView,
    v: &Pattern,
    r: f64,
    tol: f64,
    per_axis: usize,
) -> Result<Option<Isometry>, DetectorError> {
    let (rho, psi) = circle_profile(v).ok_or(DetectorError::PathUnavailable)?;
    let ring = r * rho;
    let cand = view.annulus((ring - tol).max(0.0), ring + tol);
    if cand.is_empty() {
        return Ok(None);
    }
    let x = view.pin();
    let offsets: Vec<(Point, f64)> = cand
        .iter()
        .map(|&i| {
            let w = e.points()[i as usize].sub(x);
            let n = w.norm();
            (w, n)
        })
        .collect();
    for slice in slice_sphere(ring, e.dim(), per_axis)? {
        // in-plane angles of candidates close to this circle
        let mut sorted: Vec<f64> = Vec::new();
        for (w, n) in &offsets {
            let a = w.dot(&slice.u);
            let b = w.dot(&slice.v);
            let inplane = (a * a + b * b).sqrt();
            let off_sq = (n * n - a * a - b * b).max(0.0);
            let circle_dist_sq = (inplane - ring) * (inplane - ring) + off_sq;
            if circle_dist_sq <= tol * tol {
                sorted.push(b.atan2(a));
            }
        }
        if sorted.len() < psi.len() {
            continue;
        }
        sorted.sort_by(|p, q| p.partial_cmp(q).expect("angles are finite"));
        let pre_tol = 1.5 * tol / ring + 1e-12;
        let anchors = sorted.clone();
        for &a in &anchors {
            let delta = a - psi[0];
            if psi
                .iter()
                .all(|&p| has_angle_near(&sorted, p + delta, pre_tol))
            {
                let col1 = slice.u.scale(delta.cos()).add(&slice.v.scale(delta.sin()));
                let col2 = slice.u.scale(-delta.sin()).add(&slice.v.scale(delta.cos()));
                if let Ok(o) = Isometry::from_first_two_columns(&col1, &col2) {
                    if verify_witness(e, x, v, r, &o, tol) {
                        return Ok(Some(o));
                    }
                }
            }
            let two_gamma = a + psi[0];
            if psi
                .iter()
                .all(|&p| has_angle_near(&sorted, two_gamma - p, pre_tol))
            {
                let col1 = slice
                    .u
                    .scale(two_gamma.cos())
                    .add(&slice.v.scale(two_gamma.sin()));
                let col2 = slice
                    .u
                    .scale(two_gamma.sin())
                    .add(&slice.v.scale(-two_gamma.cos()));
                if let Ok(o) = Isometry::from_first_two_columns(&col1, &col2) {
                    if verify_witness(e, x, v, r, &o, tol) {
                        return Ok(Some(o));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Matches two equal-cardinality families of points on one circle about
/// the origin: if their consecutive angular gaps agree, the rotation by
/// the first angle difference, within their common plane, maps one family
/// to the other. Families must share the radius (within a relative 1e-9)
/// and a 2-plane through the origin, and be sorted by angle.
pub fn match_equal_gap(u: &[Point], w: &[Point]) -> Result<Option<Isometry>, DetectorError> {
    if u.is_empty() || u.len() != w.len() {
        return Err(DetectorError::LengthMismatch);
    }
    let dim = u[0].dim();
    for p in u.iter().chain(w.iter()) {
        if p.dim() != dim {
            return Err(DetectorError::Geometry(GeometryError::DimensionMismatch(
                p.dim(),
                dim,
            )));
        }
    }
    let ell = u[0].norm();
    if ell <= 0.0 {
        return Err(DetectorError::LengthMismatch);
    }
    for p in u.iter().chain(w.iter()) {
        if (p.norm() - ell).abs() > TOL.angle_gap * ell {
            return Err(DetectorError::LengthMismatch);
        }
    }
    // common plane basis from the joint family
    let mut basis: Vec<Point> = Vec::new();
    for p in u.iter().chain(w.iter()) {
        let mut q = p.clone();
        for b in &basis {
            q = q.sub(&b.scale(b.dot(&q)));
        }
        let n = q.norm();
        if n > 1e-7 * ell {
            if basis.len() == 2 {
                return Err(DetectorError::NotCoplanar);
            }
            basis.push(q.scale(1.0 / n));
        }
    }
    // rank one (all points on a line): complete with any orthogonal axis
    let mut axis = 0;
    while basis.len() < 2 {
        let mut q = Point::unit(dim, axis);
        for b in &basis {
            q = q.sub(&b.scale(b.dot(&q)));
        }
        let n = q.norm();
        if n > 0.5 {
            basis.push(q.scale(1.0 / n));
        }
        axis += 1;
    }
    let (b1, b2) = (&basis[0], &basis[1]);
    let ang = |p: &Point| p.dot(b2).atan2(p.dot(b1));
    let alpha: Vec<f64> = u.iter().map(&ang).collect();
    let beta: Vec<f64> = w.iter().map(&ang).collect();
    for i in 0..alpha.len() - 1 {
        let ga = (alpha[i + 1] - alpha[i]).rem_euclid(std::f64::consts::TAU);
        let gb = (beta[i + 1] - beta[i]).rem_euclid(std::f64::consts::TAU);
        let mut diff = (ga - gb).abs();
        diff = diff.min(std::f64::consts::TAU - diff);
        if diff > TOL.angle_gap {
            return Ok(None);
        }
    }
    let delta = beta[0] - alpha[0];
    // rotation by delta in span(b1, b2), identity on the complement:
    // I + (cos d - 1)(b1 b1^T + b2 b2^T) + sin d (b2 b1^T - b1 b2^T)
    let (s, c) = delta.sin_cos();
    let mut m = vec![0.0; dim * dim];
    for i in 0..dim {
        m[i * dim + i] = 1.0;
        for j in 0..dim {
            let c1 = b1.coords();
            let c2 = b2.coords();
            m[i * dim + j] += (c - 1.0) * (c1[i] * c1[j] + c2[i] * c2[j]);
            m[i * dim + j] += s * (c2[i] * c1[j] - c1[i] * c2[j]);
        }
    }
    let o = Isometry::new(dim, m)?;
    // gap agreement within 1e-9 per step keeps the pointwise image error
    // below (cardinality)·1e-9·radius; anything worse is a logic bug
    let worst = u
        .iter()
        .zip(w.iter())
        .map(|(p, q)| o.apply(p).expect("dims agree").dist(q))
        .fold(0.0f64, f64::max);
    assert!(
        worst <= (u.len() as f64) * TOL.angle_gap * ell + 1e-12 * ell,
        "rotation failed to map the family: error {worst}"
    );
    Ok(Some(o))
}
