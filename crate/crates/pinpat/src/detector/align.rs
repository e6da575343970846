//! Generic occurrence search: seed candidate set points for each pattern
//! point from the matching distance shell around the pin, grow
//! assignments depth-first under pairwise distance consistency, and
//! complete each full assignment to an orthogonal alignment by least
//! squares. Every tentative witness is verified at full tolerance.

use super::{verify_witness, PinView};
use crate::geometry::{DiscretizedSet, Isometry, Pattern, Point};
use nalgebra::DMatrix;

/// Orthogonal map best aligning `r·p_j` to `w_j = q_j − x` in the least
/// squares sense: the orthogonal factor `U Vᵀ` of the cross-covariance
/// `Σ w_j p_jᵀ`. The determinant sign is left free, so reflections come
/// out when they fit better.
fn procrustes(ws: &[Point], ps: &[&Point], dim: usize) -> Option<Isometry> {
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for (w, p) in ws.iter().zip(ps) {
        let wc = w.coords();
        let pc = p.coords();
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] += wc[i] * pc[j];
            }
        }
    }
    let svd = m.svd(true, true);
    let u = svd.u?;
    let vt = svd.v_t?;
    let o = u * vt;
    let mut entries = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            entries[i * dim + j] = o[(i, j)];
        }
    }
    Isometry::new(dim, entries).ok()
}

/// Maps the direction of `from` onto the direction of `to` (both nonzero),
/// with deterministic behaviour elsewhere.
fn direction_alignment(from: &Point, to: &Point) -> Option<Isometry> {
    let a = Isometry::aligning_to_first_axis(from).ok()?;
    let b = Isometry::aligning_to_first_axis(to).ok()?;
    b.inverse().compose(&a).ok()
}

struct Search<'a> {
    e: &'a DiscretizedSet,
    x: &'a Point,
    v: &'a Pattern,
    r: f64,
    tol: f64,
    /// Pattern slot order, smallest candidate shell first.
    order: Vec<usize>,
    shells: Vec<Vec<u32>>,
}

impl Search<'_> {
    /// Depth-first over assignments; `chosen` holds set-point indices for
    /// the already filled slots in `order[..depth]`.
    fn dfs(&self, depth: usize, chosen: &mut Vec<u32>) -> Option<Isometry> {
        let non_pin = &self.v.points()[1..];
        if depth == self.order.len() {
            let ws: Vec<Point> = chosen
                .iter()
                .map(|&c| self.e.points()[c as usize].sub(self.x))
                .collect();
            let ps: Vec<&Point> = self.order.iter().map(|&s| &non_pin[s]).collect();
            let o = procrustes(&ws, &ps, self.x.dim())?;
            if verify_witness(self.e, self.x, self.v, self.r, &o, self.tol) {
                return Some(o);
            }
            return None;
        }
        let slot = self.order[depth];
        for &c in &self.shells[slot] {
            let q = &self.e.points()[c as usize];
            // pairwise consistency with everything already assigned
            let consistent = (0..depth).all(|d| {
                let prev_slot = self.order[d];
                let prev_q = &self.e.points()[chosen[d] as usize];
                let want = self.r * non_pin[slot].dist(&non_pin[prev_slot]);
                (q.dist(prev_q) - want).abs() <= 2.0 * self.tol
            });
            if !consistent {
                continue;
            }
            chosen.push(c);
            if let Some(o) = self.dfs(depth + 1, chosen) {
                return Some(o);
            }
            chosen.pop();
        }
        None
    }
}

/// Seeded alignment search. Complete for copies whose points lie within
/// `tol/4` of stored points when the pattern has at most 17 points: the
/// true assignment passes every distance filter with room to spare, and
/// the least squares alignment of points perturbed by `tol/4` lands each
/// image within `√(k−1)·tol/4 ≤ tol` of its target.
pub(crate) fn occurs_generic(
    e: &DiscretizedSet,
    view: &PinView,
    v: &Pattern,
    r: f64,
    tol: f64,
) -> Option<Isometry> {
    let non_pin = &v.points()[1..];
    let x = view.pin();
    let mut shells: Vec<Vec<u32>> = Vec::with_capacity(non_pin.len());
    for p in non_pin {
        let ring = r * p.norm();
        let shell = view.annulus((ring - tol).max(0.0), ring + tol).to_vec();
        if shell.is_empty() {
            return None;
        }
        shells.push(shell);
    }
    if non_pin.len() == 1 {
        // a single non-pin point: any shell member fixes the alignment
        for &c in &shells[0] {
            let w = e.points()[c as usize].sub(x);
            if w.is_zero() {
                continue;
            }
            if let Some(o) = direction_alignment(&non_pin[0], &w) {
                if verify_witness(e, x, v, r, &o, tol) {
                    return Some(o);
                }
            }
        }
        return None;
    }
    let mut order: Vec<usize> = (0..non_pin.len()).collect();
    order.sort_by_key(|&s| shells[s].len());
    let search = Search { e, x, v, r, tol, order, shells };
    search.dfs(0, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::{occurs_at_with, SearchPath};
    use crate::geometry::angle_between;
    use crate::seeding::stream_rng;
    use rand::Rng;

    fn scalene() -> Pattern {
        Pattern::new(vec![
            Point::origin(2),
            Point::planar(1.0, 0.0),
            Point::planar(0.3, 1.4),
        ])
        .unwrap()
    }

    #[test]
    fn finds_rotated_scalene_copy() {
        let v = scalene();
        let rot = Isometry::planar_rotation(2, 0.9);
        let r = 1.7;
        let pts: Vec<Point> = v.points().iter().map(|p| rot.apply(p).unwrap().scale(r)).collect();
        let e = DiscretizedSet::new(pts, 0.5, 1e-6).unwrap();
        let x = Point::origin(2);
        let o = occurs_at_with(&e, &x, &v, r, 1e-4, SearchPath::Generic)
            .unwrap()
            .expect("copy present");
        assert!(verify_witness(&e, &x, &v, r, &o, 1e-4));
        let image = o.apply(&v.points()[1]).unwrap();
        assert!((angle_between(&image, &Point::planar(1.0, 0.0)).unwrap() - 0.9).abs() < 1e-4);
    }

    #[test]
    fn rejects_when_distances_cannot_close() {
        // two points at the right shells but with the wrong separation
        let v = scalene();
        let d1 = v.points()[1].norm();
        let d2 = v.points()[2].norm();
        let e = DiscretizedSet::new(
            vec![
                Point::origin(2),
                Point::planar(d1, 0.0),
                Point::planar(-d2, 0.0),
            ],
            0.5,
            1e-6,
        )
        .unwrap();
        let hit = occurs_at_with(&e, &Point::origin(2), &v, 1.0, 1e-3, SearchPath::Generic)
            .unwrap();
        assert!(hit.is_none());
    }

    #[test]
    fn three_dimensional_copy_with_reflection() {
        let v = Pattern::new(vec![
            Point::origin(3),
            Point::new(vec![1.0, 0.2, 0.0]).unwrap(),
            Point::new(vec![0.1, 1.1, 0.4]).unwrap(),
        ])
        .unwrap();
        // reflect across the (e1, e2) plane and rotate a little
        let reflect: Vec<Point> = v
            .points()
            .iter()
            .map(|p| {
                let c = p.coords();
                Point::new(vec![c[0], c[1], -c[2]]).unwrap()
            })
            .collect();
        let rot = Isometry::planar_rotation(3, 0.4);
        let pts: Vec<Point> = reflect.iter().map(|p| rot.apply(p).unwrap().scale(2.0)).collect();
        let e = DiscretizedSet::new(pts, 0.5, 1e-6).unwrap();
        let o = occurs_at_with(&e, &Point::origin(3), &v, 2.0, 1e-4, SearchPath::Generic)
            .unwrap()
            .expect("reflected copy present");
        assert!(verify_witness(&e, &Point::origin(3), &v, 2.0, &o, 1e-4));
    }

    #[test]
    fn segment_pattern_single_shell_point() {
        let v = Pattern::segment(2);
        let e = DiscretizedSet::new(
            vec![Point::origin(2), Point::planar(-0.6, 0.8)],
            0.5,
            1e-6,
        )
        .unwrap();
        let o = occurs_at_with(&e, &Point::origin(2), &v, 1.0, 1e-5, SearchPath::Generic)
            .unwrap()
            .expect("segment fits");
        assert!(o.apply(&v.points()[1]).unwrap().dist(&Point::planar(-0.6, 0.8)) < 1e-5);
    }

    #[test]
    fn noisy_copy_within_quarter_tolerance_is_found() {
        let v = scalene();
        let mut rng = stream_rng(21, 0);
        let tol = 0.02;
        let rot = Isometry::planar_rotation(2, rng.gen::<f64>() * 6.0);
        let r = 1.3;
        let pts: Vec<Point> = v
            .points()
            .iter()
            .map(|p| {
                let exact = rot.apply(p).unwrap().scale(r);
                let c = exact.coords();
                Point::planar(
                    c[0] + (rng.gen::<f64>() - 0.5) * tol / 4.0,
                    c[1] + (rng.gen::<f64>() - 0.5) * tol / 4.0,
                )
            })
            .collect();
        let e = DiscretizedSet::new(pts, 0.5, 1e-6).unwrap();
        let o = occurs_at_with(&e, &Point::origin(2), &v, r, tol, SearchPath::Generic)
            .unwrap()
            .expect("noisy copy within tol/4");
        assert!(verify_witness(&e, &Point::origin(2), &v, r, &o, tol));
    }
}
