//! Sphere slicing into meridian circles and quadrature checks of the
//! repeated-polar area element.
//!
//! The sphere of radius `r` is parameterized as
//! `r·ω(θ₁, α) = r cos θ₁ · u + r sin θ₁ · v(α)` with `u = e₁` and
//! `v = (0, β(α))`, where `β` runs over half of the unit sphere one
//! dimension down. Fixing `α` gives a circle through the poles `±r e₁`;
//! the area element is `r^(d−1) ∏_j sin^(d−j−1) θ_j`.

use super::DetectorError;
use crate::geometry::{DiscretizedSet, GeometryError, IntervalUnion, Isometry, Point};

/// One meridian circle: the trace of `θ₁ ↦ r(cos θ₁ · u + sin θ₁ · v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereSlice {
    pub radius: f64,
    /// The fixed angles `(θ₂, …, θ_{d−2}, φ)` behind `v`.
    pub fixed_angles: Vec<f64>,
    /// Pole direction, always `e₁`.
    pub u: Point,
    /// In-plane direction orthogonal to `u`, of the form `(0, β)`.
    pub v: Point,
}

impl SphereSlice {
    pub fn circle_point(&self, theta: f64) -> Point {
        self.u
            .scale(self.radius * theta.cos())
            .add(&self.v.scale(self.radius * theta.sin()))
    }

    /// Orthogonal map taking this circle's plane onto the first coordinate
    /// plane (`u ↦ e₁`, `v ↦ e₂`).
    pub fn alignment(&self) -> Isometry {
        Isometry::from_first_two_columns(&self.u, &self.v)
            .expect("slice bases are orthonormal")
            .inverse()
    }
}

/// Point of the unit sphere in `R^(m+1)` from `m` polar angles: first
/// coordinate `cos a₀`, then each angle peels off another factor.
fn unit_from_angles(angles: &[f64]) -> Vec<f64> {
    let mut coords = Vec::with_capacity(angles.len() + 1);
    let mut sines = 1.0;
    for &a in angles {
        coords.push(sines * a.cos());
        sines *= a.sin();
    }
    coords.push(sines);
    coords
}

/// Meridian circles of the radius-`r` sphere in `R^d`, one per node of a
/// midpoint grid with `per_axis` nodes on each of the `d−2` fixed angles,
/// all ranging over `(0, π)`.
pub fn slice_sphere(r: f64, d: usize, per_axis: usize) -> Result<Vec<SphereSlice>, DetectorError> {
    if d < 3 {
        return Err(DetectorError::Geometry(GeometryError::BadDimension(d)));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(DetectorError::BadScale(r));
    }
    if per_axis == 0 {
        return Err(DetectorError::BadScaleGrid);
    }
    let axes = d - 2;
    let mut slices = Vec::with_capacity(per_axis.pow(axes as u32));
    let mut ticks = vec![0usize; axes];
    loop {
        let angles: Vec<f64> = ticks
            .iter()
            .map(|&t| (t as f64 + 0.5) * std::f64::consts::PI / per_axis as f64)
            .collect();
        let beta = unit_from_angles(&angles);
        let mut v_coords = vec![0.0; d];
        v_coords[1..].copy_from_slice(&beta);
        slices.push(SphereSlice {
            radius: r,
            fixed_angles: angles,
            u: Point::unit(d, 0),
            v: Point::new(v_coords).expect("finite"),
        });
        let mut axis = 0;
        loop {
            if axis == axes {
                return Ok(slices);
            }
            ticks[axis] += 1;
            if ticks[axis] < per_axis {
                break;
            }
            ticks[axis] = 0;
            axis += 1;
        }
    }
}

/// Ranges and sine exponents of the `d−1` sphere angles: `θ₁` sweeps the
/// full circle with exponent `d−2`, the middle angles sweep `(0, π)` with
/// falling exponents, and `φ` carries none.
fn angle_axes(d: usize) -> Vec<(f64, f64, i32)> {
    let mut axes = Vec::with_capacity(d - 1);
    axes.push((0.0, std::f64::consts::TAU, (d - 2) as i32));
    for e in (1..=d.saturating_sub(3)).rev() {
        axes.push((0.0, std::f64::consts::PI, e as i32));
    }
    if d >= 3 {
        axes.push((0.0, std::f64::consts::PI, 0));
    }
    axes
}

/// Composite Simpson nodes and weights over `[lo, hi]` with `panels`
/// subintervals (rounded up to even).
fn simpson(lo: f64, hi: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let n = (panels.max(2) + 1) & !1usize; // even
    let h = (hi - lo) / n as f64;
    let mut nodes = Vec::with_capacity(n + 1);
    let mut weights = Vec::with_capacity(n + 1);
    for i in 0..=n {
        nodes.push(lo + i as f64 * h);
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        weights.push(w * h / 3.0);
    }
    (nodes, weights)
}

/// Simpson nodes for one sphere angle; the first axis is split at π so the
/// kink of |sin|^(d−2) sits on a panel boundary.
fn axis_rule(lo: f64, hi: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    if hi > std::f64::consts::PI + 1e-12 {
        let (mut n1, mut w1) = simpson(lo, std::f64::consts::PI, panels);
        let (n2, w2) = simpson(std::f64::consts::PI, hi, panels);
        n1.extend(n2);
        w1.extend(w2);
        (n1, w1)
    } else {
        simpson(lo, hi, panels)
    }
}

/// Surface area of the radius-`r` sphere in `R^d` by quadrature of the
/// repeated-polar area element over the full angle box. The box integral
/// factorizes across the angles, so each axis is integrated once and the
/// products multiplied.
pub fn sphere_area_quadrature(d: usize, r: f64, panels: usize) -> Result<f64, DetectorError> {
    if d < 2 {
        return Err(DetectorError::Geometry(GeometryError::BadDimension(d)));
    }
    let mut area = r.powi(d as i32 - 1);
    for (lo, hi, e) in angle_axes(d) {
        let (nodes, weights) = axis_rule(lo, hi, panels);
        let integral: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(t, w)| w * t.sin().abs().powi(e))
            .sum();
        area *= integral;
    }
    Ok(area)
}

fn expected_sphere_area(d: usize) -> f64 {
    // S^1 = 2π, S^2 = 4π, then area(d) = 2π/(d−2) · area(d−2)
    match d {
        2 => std::f64::consts::TAU,
        3 => 2.0 * std::f64::consts::TAU,
        _ => std::f64::consts::TAU / (d as f64 - 2.0) * expected_sphere_area(d - 2),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereCheckReport {
    pub dim: usize,
    pub sphere_area: f64,
    pub sphere_area_expected: f64,
    pub ball_volume: f64,
    pub ball_volume_expected: f64,
    pub angular_panels: usize,
    pub radial_panels: usize,
}

impl SphereCheckReport {
    pub fn area_rel_error(&self) -> f64 {
        (self.sphere_area - self.sphere_area_expected).abs() / self.sphere_area_expected
    }

    pub fn volume_rel_error(&self) -> f64 {
        (self.ball_volume - self.ball_volume_expected).abs() / self.ball_volume_expected
    }
}

/// Integrates the area element over the angle box and compares to the
/// known sphere area; then integrates the sphere areas radially over
/// `[0, 1]` (the full-ball section measure) and compares to the known ball
/// volume.
pub fn sphere_measure_checks(
    d: usize,
    angular_panels: usize,
    radial_panels: usize,
) -> Result<SphereCheckReport, DetectorError> {
    let sphere_area = sphere_area_quadrature(d, 1.0, angular_panels)?;
    let (nodes, weights) = simpson(0.0, 1.0, radial_panels);
    let mut ball_volume = 0.0;
    for (r, w) in nodes.iter().zip(&weights) {
        ball_volume += w * sphere_area_quadrature(d, *r, angular_panels)?;
    }
    let area_expected = expected_sphere_area(d);
    Ok(SphereCheckReport {
        dim: d,
        sphere_area,
        sphere_area_expected: area_expected,
        ball_volume,
        ball_volume_expected: area_expected / d as f64,
        angular_panels,
        radial_panels,
    })
}

/// Empirical coarea split of a discretized set around a pin: the section
/// measure of the set on the radius-`r` sphere, integrated over a radius
/// interval, separated by whether `r` lands in the supplied set of scales.
#[derive(Debug, Clone, PartialEq)]
pub struct CoareaSplit {
    /// Contribution of radii inside the scale set.
    pub inside: f64,
    /// Contribution of the complementary radii.
    pub outside: f64,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl CoareaSplit {
    pub fn total(&self) -> f64 {
        self.inside + self.outside
    }
}

/// Midpoint quadrature of the set's spherical section measures around
/// `pin` for radii in `[r_lo, r_hi]`, split by membership of the radius in
/// `scales`. Membership of a sphere point is `has_point_within` at radius
/// `probe`. Deterministic; cost is `radial_nodes · angular_nodes^(d−1)`
/// membership queries.
#[allow(clippy::too_many_arguments)]
pub fn coarea_split(
    e: &DiscretizedSet,
    pin: &Point,
    scales: &IntervalUnion,
    r_lo: f64,
    r_hi: f64,
    radial_nodes: usize,
    angular_nodes: usize,
    probe: f64,
) -> Result<CoareaSplit, DetectorError> {
    let d = e.dim();
    if pin.dim() != d {
        return Err(DetectorError::Geometry(GeometryError::DimensionMismatch(
            pin.dim(),
            d,
        )));
    }
    if !(r_lo >= 0.0) || !(r_hi > r_lo) || !r_hi.is_finite() {
        return Err(DetectorError::BadScaleGrid);
    }
    if radial_nodes == 0 || angular_nodes == 0 {
        return Err(DetectorError::BadScaleGrid);
    }
    if !(probe > 0.0) || !probe.is_finite() {
        return Err(DetectorError::BadTolerance(probe));
    }
    let axes = angle_axes(d);
    let dr = (r_hi - r_lo) / radial_nodes as f64;
    let mut inside = 0.0;
    let mut outside = 0.0;
    let mut ticks = vec![0usize; axes.len()];
    for ri in 0..radial_nodes {
        let r = r_lo + (ri as f64 + 0.5) * dr;
        let mut section = 0.0;
        ticks.iter_mut().for_each(|t| *t = 0);
        'box_walk: loop {
            let mut jac = r.powi(d as i32 - 1);
            let mut cell = 1.0;
            let mut angles = Vec::with_capacity(axes.len());
            for (t, (lo, hi, e_exp)) in ticks.iter().zip(&axes) {
                let width = (hi - lo) / angular_nodes as f64;
                let a = lo + (*t as f64 + 0.5) * width;
                jac *= a.sin().abs().powi(*e_exp);
                cell *= width;
                angles.push(a);
            }
            // ω = cos θ₁ · e₁ + sin θ₁ · (0, β(rest))
            let mut coords = vec![0.0; d];
            coords[0] = angles[0].cos();
            if d >= 3 {
                let beta = unit_from_angles(&angles[1..]);
                for (i, b) in beta.iter().enumerate() {
                    coords[i + 1] = angles[0].sin() * b;
                }
            } else {
                coords[1] = angles[0].sin();
            }
            let p = pin.add(&Point::new(coords).expect("finite").scale(r));
            if e.has_point_within(&p, probe) {
                section += jac * cell;
            }
            let mut axis = 0;
            loop {
                if axis == ticks.len() {
                    break 'box_walk;
                }
                ticks[axis] += 1;
                if ticks[axis] < angular_nodes {
                    break;
                }
                ticks[axis] = 0;
                axis += 1;
            }
        }
        if scales.contains(r) {
            inside += section * dr;
        } else {
            outside += section * dr;
        }
    }
    Ok(CoareaSplit { inside, outside, radial_nodes, angular_nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equatorial_slice_in_three_dimensions() {
        let slices = slice_sphere(2.0, 3, 9).unwrap();
        assert_eq!(slices.len(), 9);
        // φ midpoint grid contains π/2 at the middle tick: β = (0, 1)
        let eq = &slices[4];
        assert!((eq.fixed_angles[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let p = eq.circle_point(0.7);
        assert!((p.coords()[0] - 2.0 * 0.7f64.cos()).abs() < 1e-12);
        assert!(p.coords()[1].abs() < 1e-12);
        assert!((p.coords()[2] - 2.0 * 0.7f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn slice_bases_are_orthonormal_and_points_on_sphere() {
        for d in [3, 4, 5] {
            for slice in slice_sphere(1.5, d, 4).unwrap() {
                assert!((slice.u.norm() - 1.0).abs() < 1e-12);
                assert!((slice.v.norm() - 1.0).abs() < 1e-12);
                assert!(slice.u.dot(&slice.v).abs() < 1e-12);
                for i in 0..8 {
                    let theta = i as f64 * std::f64::consts::TAU / 8.0;
                    assert!((slice.circle_point(theta).norm() - 1.5).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn slice_count_scales_with_axes() {
        assert_eq!(slice_sphere(1.0, 3, 7).unwrap().len(), 7);
        assert_eq!(slice_sphere(1.0, 4, 7).unwrap().len(), 49);
        assert!(matches!(
            slice_sphere(1.0, 2, 7),
            Err(DetectorError::Geometry(GeometryError::BadDimension(2)))
        ));
    }

    #[test]
    fn alignment_sends_circle_to_first_plane() {
        for slice in slice_sphere(1.0, 4, 3).unwrap().iter().take(5) {
            let o = slice.alignment();
            for i in 0..6 {
                let theta = i as f64;
                let moved = o.apply(&slice.circle_point(theta)).unwrap();
                let c = moved.coords();
                assert!((c[0] - theta.cos()).abs() < 1e-10);
                assert!((c[1] - theta.sin()).abs() < 1e-10);
                for z in &c[2..] {
                    assert!(z.abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn distinct_slices_meet_only_at_the_poles() {
        let slices = slice_sphere(1.0, 3, 8).unwrap();
        let a = &slices[1];
        let b = &slices[5];
        for i in 0..64 {
            let ta = i as f64 * std::f64::consts::TAU / 64.0;
            for j in 0..64 {
                let tb = j as f64 * std::f64::consts::TAU / 64.0;
                let pa = a.circle_point(ta);
                let pb = b.circle_point(tb);
                if pa.dist(&pb) < 1e-3 {
                    // near an intersection: must be one of the two poles
                    let pole_dist = pa.coords()[0].abs();
                    assert!((pole_dist - 1.0).abs() < 1e-4, "met away from poles at {pa:?}");
                }
            }
        }
    }

    #[test]
    fn known_sphere_areas() {
        let checks = [
            (2, std::f64::consts::TAU),
            (3, 4.0 * std::f64::consts::PI),
            (4, 2.0 * std::f64::consts::PI.powi(2)),
            (5, 8.0 * std::f64::consts::PI.powi(2) / 3.0),
        ];
        for (d, expect) in checks {
            let got = sphere_area_quadrature(d, 1.0, 256).unwrap();
            assert!(
                (got - expect).abs() / expect < 1e-7,
                "d={d}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn area_scales_with_radius_power() {
        let unit = sphere_area_quadrature(3, 1.0, 32).unwrap();
        let doubled = sphere_area_quadrature(3, 2.0, 32).unwrap();
        assert!((doubled - 4.0 * unit).abs() < 1e-9);
    }

    #[test]
    fn measure_checks_match_known_values() {
        for d in [2, 3, 4] {
            let report = sphere_measure_checks(d, 64, 32).unwrap();
            assert!(report.area_rel_error() < 1e-6, "d={d} area");
            assert!(report.volume_rel_error() < 1e-4, "d={d} volume");
        }
    }

    #[test]
    fn coarea_split_on_a_fat_disk() {
        // dense grid over a disk of radius 2: the section measure of the
        // circle of radius r is its full length, so the integral over
        // [0.5, 1.5] splits by the scale set alone
        let h = 0.05;
        let mut pts = Vec::new();
        let steps = (2.0 / h) as i64;
        for i in -steps..=steps {
            for j in -steps..=steps {
                let p = Point::planar(i as f64 * h, j as f64 * h);
                if p.norm() <= 2.0 {
                    pts.push(p);
                }
            }
        }
        let e = DiscretizedSet::new(pts, h, h).unwrap();
        let scales = IntervalUnion::from_intervals(&[(0.0, 1.0)]);
        let split = coarea_split(&e, &Point::origin(2), &scales, 0.5, 1.5, 40, 256, h).unwrap();
        // inside: ∫_{0.5}^{1.0} 2πr dr = π(1−0.25); outside: π(2.25−1)
        let inside_expect = std::f64::consts::PI * 0.75;
        let outside_expect = std::f64::consts::PI * 1.25;
        assert!((split.inside - inside_expect).abs() / inside_expect < 0.02);
        assert!((split.outside - outside_expect).abs() / outside_expect < 0.02);
    }
}
