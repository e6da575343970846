//! Arithmetic-progression machinery on the circle `R/2πZ` and on cyclic
//! groups `Z/NZ`.
//!
//! The circle side works with exact unions of half-open arcs: rotating a set
//! by multiples of `2π/(n+1)` and intersecting the copies decides, with no
//! sampling, whether some rotation orbit fits inside the set. The cyclic side
//! provides progression detection, an exact extremal solver, and the
//! asymptotic bound those searches are compared against. `slice` connects the
//! two: a circle set restricted to the orbit `{x + 2πτ/(n+1)}` is a subset of
//! `Z/(n+1)Z`, and avoidance on the circle forces progression-freeness of
//! every slice.

pub mod cyclic;
pub mod search;
pub mod solver;

pub use cyclic::{has_ap, CyclicSet, CyclicWitness};
pub use search::{perturb_with_orbit, random_arc_union, search_avoider, SearchParams};
pub use solver::{gowers_bound, r_m_exact, EXACT_LIMIT};

use crate::primes::is_prime;
use std::f64::consts::TAU;

/// Errors for circle and cyclic progression operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TorusError {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(usize),
    #[error("residue {0} out of range for modulus {1}")]
    ResidueOutOfRange(usize, usize),
    #[error("progression length must be at least 2, got {0}")]
    BadLength(usize),
    #[error("modulus {modulus} is below progression length {length}")]
    ModulusBelowLength { modulus: usize, length: usize },
    #[error("exact solver limited to N <= {limit}, got N = {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("bound undefined: loglog {n} <= 1 (need N >= 16) for length {m}")]
    OutOfDomain { n: u64, m: usize },
    #[error("arc [{start}, {end}) is not a valid piece of the circle")]
    BadArc { start: f64, end: f64 },
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("offset {x} outside the fundamental window [0, {window})")]
    OutOfWindow { x: f64, window: f64 },
    #[error("need at least one sample point per segment, got {0}")]
    BadSampleCount(usize),
    #[error("set admits a rotated progression (base {base}, rotation {rotation})")]
    PreconditionViolated { base: f64, rotation: usize },
}

/// Finite union of half-open arcs `[a, b)` on the circle of circumference
/// `2π`, kept sorted, pairwise disjoint, and inside `[0, 2π]`. An input arc
/// crossing the `0 ≡ 2π` seam is split into two stored arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusSet {
    arcs: Vec<(f64, f64)>,
}

impl TorusSet {
    pub fn empty() -> Self {
        TorusSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        TorusSet { arcs: vec![(0.0, TAU)] }
    }

    /// Builds a set from raw arcs `(start, end)`, `end > start`, length at
    /// most `2π`. Endpoints may be any finite reals; they are reduced onto
    /// the circle, seam-crossing arcs split, and overlaps merged.
    pub fn from_arcs(raw: &[(f64, f64)]) -> Result<Self, TorusError> {
        let mut pieces: Vec<(f64, f64)> = Vec::with_capacity(raw.len() + 2);
        for &(start, end) in raw {
            if !start.is_finite() || !end.is_finite() || end <= start || end - start > TAU {
                return Err(TorusError::BadArc { start, end });
            }
            let len = end - start;
            if len >= TAU {
                return Ok(TorusSet::full());
            }
            let mut a = start.rem_euclid(TAU);
            if a >= TAU {
                a = 0.0; // rem_euclid can round up to the modulus
            }
            let b = a + len;
            if b <= TAU {
                pieces.push((a, b));
            } else {
                pieces.push((a, TAU));
                pieces.push((0.0, b - TAU));
            }
        }
        Ok(Self::normalized(pieces))
    }

    /// Sorts and merges pieces already reduced to `[0, 2π]`.
    fn normalized(mut pieces: Vec<(f64, f64)>) -> Self {
        pieces.retain(|&(a, b)| b > a);
        pieces.sort_by(|x, y| x.partial_cmp(y).expect("endpoints are finite"));
        let mut arcs: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            match arcs.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => arcs.push((a, b)),
            }
        }
        TorusSet { arcs }
    }

    /// The stored arcs, sorted and disjoint.
    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Total arc length, in `[0, 2π]`.
    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(|&(a, b)| b - a).sum()
    }

    /// Membership of the circle point `t` (any real, reduced mod `2π`).
    /// Arcs are half-open: the left endpoint is in, the right is out.
    pub fn contains(&self, t: f64) -> bool {
        let mut x = t.rem_euclid(TAU);
        if x >= TAU {
            x = 0.0;
        }
        let idx = self.arcs.partition_point(|&(a, _)| a <= x);
        idx > 0 && x < self.arcs[idx - 1].1
    }

    /// The set rotated by `delta`: `{t + delta : t ∈ self}` on the circle.
    pub fn rotate(&self, delta: f64) -> Self {
        let mut pieces = Vec::with_capacity(self.arcs.len() + 1);
        for &(a, b) in &self.arcs {
            let len = b - a;
            let mut s = (a + delta).rem_euclid(TAU);
            if s >= TAU {
                s = 0.0;
            }
            let e = s + len;
            if e <= TAU {
                pieces.push((s, e));
            } else {
                pieces.push((s, TAU));
                pieces.push((0.0, e - TAU));
            }
        }
        Self::normalized(pieces)
    }

    /// Exact intersection by a two-pointer sweep over the sorted arcs.
    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.arcs.len() && j < other.arcs.len() {
            let (a1, b1) = self.arcs[i];
            let (a2, b2) = other.arcs[j];
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if lo < hi {
                out.push((lo, hi));
            }
            if b1 <= b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        TorusSet { arcs: out }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut pieces = self.arcs.clone();
        pieces.extend_from_slice(&other.arcs);
        Self::normalized(pieces)
    }

    /// A representative interior point: the midpoint of the first arc.
    pub fn first_point(&self) -> Option<f64> {
        self.arcs.first().map(|&(a, b)| 0.5 * (a + b))
    }
}

/// A rotation orbit found inside a circle set: the `length` points
/// `base + j·2π·difference/(n+1)`, `j = 0..length-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusWitness {
    pub base: f64,
    pub difference: usize,
    pub length: usize,
}

impl TorusWitness {
    /// Expands the witness into its circle points, reduced mod `2π`.
    pub fn points(&self, n: usize) -> Vec<f64> {
        let modulus = n + 1;
        (0..self.length)
            .map(|j| {
                let steps = (j * self.difference) % modulus;
                (self.base + TAU * steps as f64 / modulus as f64).rem_euclid(TAU)
            })
            .collect()
    }
}

/// Width of the fundamental window `[0, 2π/(n+1))`.
pub fn window_width(n: usize) -> f64 {
    TAU / (n + 1) as f64
}

/// Decides whether `e` contains, for some base point `x` and some rotation
/// index `i ∈ {1,…,n}`, all `k−1` points `x + j·2πi/(n+1)`, `j = 0..k−2`.
///
/// Returns `None` when no such orbit fits. The decision is exact: for each
/// `i` the `k−1` rotated copies of `e` are intersected and the result tested
/// for emptiness, so no choice of `x` is missed. A returned witness has been
/// re-verified point by point against `e`.
///
/// Requires `n+1` prime (which makes the orbit points automatically
/// distinct), `k ≥ 3`, and `n ≥ k`.
pub fn avoids_rotated_aps(
    e: &TorusSet,
    n: usize,
    k: usize,
) -> Result<Option<TorusWitness>, TorusError> {
    if k < 3 {
        return Err(TorusError::BadLength(k));
    }
    if n < k {
        return Err(TorusError::ModulusBelowLength { modulus: n, length: k });
    }
    let modulus = n + 1;
    if !is_prime(modulus as u64) {
        return Err(TorusError::NotPrime(modulus));
    }
    if e.is_empty() {
        return Ok(None);
    }
    for i in 1..=n {
        // step residues j·i mod (n+1); distinct because the modulus is prime
        let steps: Vec<usize> = (0..k - 1).map(|j| (j * i) % modulus).collect();
        for a in 0..steps.len() {
            for b in a + 1..steps.len() {
                assert_ne!(steps[a], steps[b], "orbit points collide despite prime modulus");
            }
        }
        let mut common = e.clone();
        for &s in steps.iter().skip(1) {
            let angle = TAU * s as f64 / modulus as f64;
            common = common.intersect(&e.rotate(-angle));
            if common.is_empty() {
                break;
            }
        }
        if common.is_empty() {
            continue;
        }
        // Any point of `common` carries the whole orbit. Midpoints sit half
        // an arc width away from the boundary, so re-verification can only
        // fail on arcs near the floating-point resolution; probe a couple of
        // interior points per arc before giving up on it.
        for &(a, b) in common.arcs() {
            for frac in [0.5, 0.25, 0.75] {
                let x = a + frac * (b - a);
                let witness = TorusWitness { base: x, difference: i, length: k - 1 };
                if witness.points(n).iter().all(|&p| e.contains(p)) {
                    return Ok(Some(witness));
                }
            }
        }
    }
    Ok(None)
}

/// Number of orbit points `x + 2πτ/(n+1)`, `τ = 0..n`, lying in `e`.
/// Defined for any real `x`; `slice` adds the window check.
fn orbit_count(e: &TorusSet, x: f64, n: usize) -> usize {
    let modulus = (n + 1) as f64;
    (0..=n)
        .filter(|&tau| e.contains(x + TAU * tau as f64 / modulus))
        .count()
}

/// Restricts `e` to the rotation orbit through `x`: the residues
/// `τ ∈ Z/(n+1)Z` with `x + 2πτ/(n+1) ∈ e`. The offset `x` must lie in the
/// fundamental window `[0, 2π/(n+1))`. Composite `n+1` is allowed here; only
/// the orbit-avoidance argument needs primality.
pub fn slice(e: &TorusSet, x: f64, n: usize) -> Result<CyclicSet, TorusError> {
    let w = window_width(n);
    if !x.is_finite() || x < 0.0 || x >= w {
        return Err(TorusError::OutOfWindow { x, window: w });
    }
    let modulus = n + 1;
    let mut out = CyclicSet::new(modulus)?;
    for tau in 0..modulus {
        if e.contains(x + TAU * tau as f64 / modulus as f64) {
            out.insert(tau)?;
        }
    }
    Ok(out)
}

/// Window offsets at which some orbit point crosses an arc boundary of `e`:
/// every arc endpoint reduced mod `2π/(n+1)`, plus the window ends. Between
/// consecutive values the slice of `e` is constant as a set.
pub fn window_breakpoints(e: &TorusSet, n: usize) -> Vec<f64> {
    let w = window_width(n);
    let mut cuts = vec![0.0, w];
    for &(a, b) in e.arcs() {
        for t in [a, b] {
            let mut r = t.rem_euclid(w);
            if r >= w {
                r = 0.0;
            }
            cuts.push(r);
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    cuts.dedup();
    cuts
}

/// Midpoints of the maximal window segments on which the slice is constant.
pub fn window_segment_midpoints(e: &TorusSet, n: usize) -> Vec<f64> {
    window_breakpoints(e, n)
        .windows(2)
        .filter(|uv| uv[1] > uv[0])
        .map(|uv| 0.5 * (uv[0] + uv[1]))
        .collect()
}

/// Checks the exact identity `measure(e) = ∫ #slice(e, x) dx` over the
/// fundamental window. Returns `(lhs, rhs)` with `lhs` the arc-union measure
/// and `rhs` the integral evaluated piecewise: the integrand is constant
/// between breakpoints, so each segment contributes `count · width`. The
/// count per segment is probed at `samples ≥ 1` interior points and
/// averaged, which doubles as a constancy check.
pub fn slicing_identity_check(
    e: &TorusSet,
    n: usize,
    samples: usize,
) -> Result<(f64, f64), TorusError> {
    if samples == 0 {
        return Err(TorusError::BadSampleCount(samples));
    }
    let lhs = e.measure();
    let cuts = window_breakpoints(e, n);
    let mut rhs = 0.0;
    for uv in cuts.windows(2) {
        let (u, v) = (uv[0], uv[1]);
        let width = v - u;
        if width <= 0.0 {
            continue;
        }
        let mut total = 0usize;
        for t in 1..=samples {
            let x = u + width * (2 * t - 1) as f64 / (2 * samples) as f64;
            total += orbit_count(e, x, n);
        }
        rhs += (total as f64 / samples as f64) * width;
    }
    Ok((lhs, rhs))
}

/// Measure bound satisfied by any set avoiding rotated `(k−1)`-point orbits:
/// `2π/(n+1)` for `k = 3`, and `2π/(loglog(n+1))^c` with
/// `c = 2^(−2^(k+8))` for `k ≥ 4` (evaluated in log space; at double
/// precision the `k ≥ 4` factor rounds to 1, leaving `2π`).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureBound {
    pub measure: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Verifies the avoidance hypothesis on `e`, then compares its measure to
/// the bound above. `ok` allows slack `1e-12` for arc-length summation.
pub fn measure_bound_check(e: &TorusSet, n: usize, k: usize) -> Result<MeasureBound, TorusError> {
    if let Some(w) = avoids_rotated_aps(e, n, k)? {
        return Err(TorusError::PreconditionViolated {
            base: w.base,
            rotation: w.difference,
        });
    }
    let bound = if k == 3 {
        window_width(n)
    } else {
        let loglog = (((n + 1) as f64).ln()).ln();
        if !(loglog > 1.0) {
            return Err(TorusError::OutOfDomain { n: (n + 1) as u64, m: k - 1 });
        }
        // ln bound = ln 2π − c·ln(loglog), with c·ln(loglog) assembled as
        // exp(ln c + ln ln(loglog)) because c underflows on its own
        let correction = (-(2f64.powi((k + 8) as i32)) * std::f64::consts::LN_2
            + loglog.ln().ln())
        .exp();
        (TAU.ln() - correction).exp()
    };
    let measure = e.measure();
    let ok = measure <= bound + crate::config::TOL.measure_slack;
    Ok(MeasureBound { measure, bound, ok })
}

/// Bridge between circle avoidance and cyclic progression-freeness: if `e`
/// avoids rotated `(k−1)`-orbits then every window slice must be
/// `(k−1)`-progression-free. Returns the first window offset whose slice
/// contains a progression, or `None` when all segments check out. Segment
/// midpoints suffice: rotations by multiples of the window width act as
/// shifts on slices, so the slice map is constant between breakpoints.
pub fn bridge_check(e: &TorusSet, n: usize, k: usize) -> Result<Option<f64>, TorusError> {
    if k < 3 {
        return Err(TorusError::BadLength(k));
    }
    for x in window_segment_midpoints(e, n) {
        let s = slice(e, x, n)?;
        if has_ap(&s, k - 1)?.is_some() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn arc_normalization_splits_the_seam() {
        let e = TorusSet::from_arcs(&[(-0.5, 0.5)]).unwrap();
        assert_eq!(e.arcs().len(), 2);
        assert_close(e.measure(), 1.0, 1e-15);
        assert!(e.contains(-0.2));
        assert!(e.contains(0.3));
        assert!(!e.contains(0.6));
        assert!(e.contains(TAU - 0.4));
    }

    #[test]
    fn arc_normalization_merges_touching_pieces() {
        let e = TorusSet::from_arcs(&[(1.0, 2.0), (0.0, 1.0), (1.5, 2.5)]).unwrap();
        assert_eq!(e.arcs(), &[(0.0, 2.5)]);
    }

    #[test]
    fn bad_arcs_rejected() {
        assert!(TorusSet::from_arcs(&[(1.0, 1.0)]).is_err());
        assert!(TorusSet::from_arcs(&[(2.0, 1.0)]).is_err());
        assert!(TorusSet::from_arcs(&[(0.0, 7.0)]).is_err());
        assert!(TorusSet::from_arcs(&[(f64::NAN, 1.0)]).is_err());
    }

    #[test]
    fn full_circle_contains_everything() {
        let e = TorusSet::full();
        assert_close(e.measure(), TAU, 0.0);
        for t in [-5.0, 0.0, 1.0, 3.9, 100.0] {
            assert!(e.contains(t));
        }
    }

    #[test]
    fn half_open_membership() {
        let e = TorusSet::from_arcs(&[(1.0, 2.0)]).unwrap();
        assert!(e.contains(1.0));
        assert!(!e.contains(2.0));
    }

    #[test]
    fn inclusion_exclusion_of_measures() {
        let a = TorusSet::from_arcs(&[(0.0, 1.0), (2.0, 3.5)]).unwrap();
        let b = TorusSet::from_arcs(&[(0.5, 2.5), (5.0, 6.0)]).unwrap();
        let lhs = a.measure() + b.measure();
        let rhs = a.union(&b).measure() + a.intersect(&b).measure();
        assert_close(lhs, rhs, 1e-12);
    }

    #[test]
    fn rotation_preserves_measure_and_shifts_membership() {
        let e = TorusSet::from_arcs(&[(0.3, 0.9), (4.0, 4.4)]).unwrap();
        for delta in [0.1, 2.5, -1.0, 6.0] {
            let r = e.rotate(delta);
            assert_close(r.measure(), e.measure(), 1e-12);
            for t in [0.35, 0.95, 4.2, 5.0] {
                assert_eq!(r.contains(t + delta), e.contains(t), "t={t} delta={delta}");
            }
        }
    }

    #[test]
    fn short_arc_avoids_all_orbits() {
        let n = 4; // modulus 5, prime
        let w = window_width(n);
        let e = TorusSet::from_arcs(&[(0.0, 0.9 * w)]).unwrap();
        assert_eq!(avoids_rotated_aps(&e, n, 3).unwrap(), None);
    }

    #[test]
    fn half_circle_has_a_witness() {
        let n = 4;
        let e = TorusSet::from_arcs(&[(0.0, std::f64::consts::PI)]).unwrap();
        let w = avoids_rotated_aps(&e, n, 3).unwrap().expect("orbit fits");
        assert_eq!(w.length, 2);
        for p in w.points(n) {
            assert!(e.contains(p));
        }
    }

    #[test]
    fn empty_set_avoids_trivially() {
        assert_eq!(avoids_rotated_aps(&TorusSet::empty(), 10, 3).unwrap(), None);
    }

    #[test]
    fn avoidance_preconditions() {
        let e = TorusSet::from_arcs(&[(0.0, 1.0)]).unwrap();
        assert!(matches!(
            avoids_rotated_aps(&e, 8, 3), // modulus 9 composite
            Err(TorusError::NotPrime(9))
        ));
        assert!(matches!(avoids_rotated_aps(&e, 10, 2), Err(TorusError::BadLength(2))));
        assert!(matches!(
            avoids_rotated_aps(&e, 2, 3), // n below k, even though 3 is prime
            Err(TorusError::ModulusBelowLength { .. })
        ));
    }

    #[test]
    fn witness_points_are_distinct() {
        let n = 6;
        let e = TorusSet::full();
        let w = avoids_rotated_aps(&e, n, 5).unwrap().expect("full circle");
        let pts = w.points(n);
        assert_eq!(pts.len(), 4);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                assert!((pts[i] - pts[j]).abs() > 1e-9);
            }
        }
    }

    #[test]
    fn slice_of_half_circle() {
        // modulus 4 (composite on purpose: slicing does not need primality)
        let e = TorusSet::from_arcs(&[(0.0, std::f64::consts::PI)]).unwrap();
        let s = slice(&e, 0.0, 3).unwrap();
        assert_eq!(s.members(), vec![0, 1]);
    }

    #[test]
    fn slice_of_full_circle_is_full() {
        let s = slice(&TorusSet::full(), 0.1 * window_width(6), 6).unwrap();
        assert_eq!(s.cardinality(), 7);
    }

    #[test]
    fn slice_window_enforced() {
        let e = TorusSet::full();
        let w = window_width(4);
        assert!(matches!(slice(&e, w, 4), Err(TorusError::OutOfWindow { .. })));
        assert!(matches!(slice(&e, -0.1, 4), Err(TorusError::OutOfWindow { .. })));
    }

    #[test]
    fn slice_matches_direct_membership() {
        let e = TorusSet::from_arcs(&[(0.2, 1.3), (2.0, 2.1), (5.9, 6.2)]).unwrap();
        let n = 10;
        let x = 0.37 * window_width(n);
        let s = slice(&e, x, n).unwrap();
        for tau in 0..=n {
            let p = x + TAU * tau as f64 / (n + 1) as f64;
            assert_eq!(s.contains(tau), e.contains(p), "tau={tau}");
        }
    }

    #[test]
    fn identity_on_single_window_arc() {
        let n = 4;
        let w = window_width(n);
        let e = TorusSet::from_arcs(&[(0.0, w)]).unwrap();
        let (lhs, rhs) = slicing_identity_check(&e, n, 3).unwrap();
        assert_close(lhs, w, 1e-15);
        assert_close(lhs, rhs, 1e-12);
    }

    #[test]
    fn identity_on_empty_set() {
        let (lhs, rhs) = slicing_identity_check(&TorusSet::empty(), 10, 1).unwrap();
        assert_eq!((lhs, rhs), (0.0, 0.0));
    }

    #[test]
    fn identity_on_assorted_arcs() {
        let e = TorusSet::from_arcs(&[(0.11, 0.74), (1.9, 2.45), (3.3, 5.05)]).unwrap();
        for n in [4usize, 10, 100] {
            let (lhs, rhs) = slicing_identity_check(&e, n, 2).unwrap();
            assert_close(lhs, rhs, 1e-9);
        }
    }

    #[test]
    fn identity_rejects_zero_samples() {
        assert!(matches!(
            slicing_identity_check(&TorusSet::full(), 4, 0),
            Err(TorusError::BadSampleCount(0))
        ));
    }

    #[test]
    fn measure_bound_on_short_arc() {
        let n = 100; // modulus 101, prime
        let w = window_width(n);
        let e = TorusSet::from_arcs(&[(0.0, 0.9 * w)]).unwrap();
        let r = measure_bound_check(&e, n, 3).unwrap();
        assert!(r.ok);
        assert_close(r.measure, 0.9 * w, 1e-15);
        assert_close(r.bound, w, 0.0);
    }

    #[test]
    fn measure_bound_rejects_non_avoiders() {
        let e = TorusSet::from_arcs(&[(0.0, std::f64::consts::PI)]).unwrap();
        assert!(matches!(
            measure_bound_check(&e, 4, 3),
            Err(TorusError::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn measure_bound_longer_orbits_need_large_modulus() {
        let e = TorusSet::empty();
        assert!(matches!(
            measure_bound_check(&e, 10, 4), // loglog 11 < 1
            Err(TorusError::OutOfDomain { .. })
        ));
        let r = measure_bound_check(&e, 100, 4).unwrap();
        assert_close(r.bound, TAU, 1e-14); // log-space factor rounds to 1
        assert!(r.ok);
    }

    #[test]
    fn bridge_holds_on_avoider_and_fails_on_half_circle() {
        let n = 4;
        let w = window_width(n);
        let avoider = TorusSet::from_arcs(&[(0.0, 0.9 * w)]).unwrap();
        assert_eq!(bridge_check(&avoider, n, 3).unwrap(), None);

        let bad = TorusSet::from_arcs(&[(0.0, std::f64::consts::PI)]).unwrap();
        let x = bridge_check(&bad, n, 3).unwrap().expect("some slice has a pair");
        let s = slice(&bad, x, n).unwrap();
        assert!(has_ap(&s, 2).unwrap().is_some());
    }

    #[test]
    fn breakpoints_cover_window() {
        let n = 9;
        let e = TorusSet::from_arcs(&[(0.3, 1.7), (4.0, 4.01)]).unwrap();
        let cuts = window_breakpoints(&e, n);
        assert_eq!(cuts[0], 0.0);
        assert_close(*cuts.last().unwrap(), window_width(n), 0.0);
        for uv in cuts.windows(2) {
            assert!(uv[1] >= uv[0]);
        }
    }
}
