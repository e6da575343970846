//! Seeded randomized construction of circle sets that avoid rotated
//! progression orbits, plus helpers that build random arc unions and
//! deliberate near-misses for negative testing.

use super::{avoids_rotated_aps, window_width, TorusError, TorusSet};
use rand::Rng;
use std::f64::consts::TAU;

/// Knobs for [`search_avoider`]. Iteration-boxed so runs are deterministic
/// under a fixed RNG regardless of machine speed.
#[derive(Debug, Clone)]
pub struct SearchParams {
    /// Orbit scale: rotations are multiples of `2π/(n+1)`, `n+1` prime.
    pub n: usize,
    /// Orbit length is `k−1` points, `k ≥ 3`.
    pub k: usize,
    /// Number of arc proposals.
    pub iters: usize,
    /// Proposed arc length, as a fraction of the window width, upper bound.
    pub max_arc_frac: f64,
}

impl SearchParams {
    pub fn new(n: usize, k: usize) -> Self {
        SearchParams { n, k, iters: 120, max_arc_frac: 0.6 }
    }
}

/// Grows an avoider greedily: propose a random arc, accept the union when it
/// still avoids all rotated orbits, otherwise repair locally by halving the
/// arc (up to 8 times) until it fits or becomes negligible. Every accepted
/// state has been verified, so the result avoids by construction.
pub fn search_avoider<R: Rng>(rng: &mut R, params: &SearchParams) -> Result<TorusSet, TorusError> {
    let w = window_width(params.n);
    let mut e = TorusSet::empty();
    // fail fast on bad (n, k) instead of once per proposal
    avoids_rotated_aps(&e, params.n, params.k)?;
    for _ in 0..params.iters {
        let start = rng.gen::<f64>() * TAU;
        let mut len = rng.gen::<f64>() * params.max_arc_frac * w;
        for _ in 0..8 {
            if len < 1e-9 * w {
                break;
            }
            let arc = TorusSet::from_arcs(&[(start, start + len)])
                .expect("positive length below full circle");
            let cand = e.union(&arc);
            if avoids_rotated_aps(&cand, params.n, params.k)?.is_none() {
                e = cand;
                break;
            }
            len *= 0.5;
        }
    }
    Ok(e)
}

/// Uniform random union of up to `max_arcs` arcs with lengths below
/// `max_len`. No avoidance guarantee; used for identity and round-trip
/// testing.
pub fn random_arc_union<R: Rng>(rng: &mut R, max_arcs: usize, max_len: f64) -> TorusSet {
    let count = rng.gen_range(1..=max_arcs.max(1));
    let arcs: Vec<(f64, f64)> = (0..count)
        .map(|_| {
            let start = rng.gen::<f64>() * TAU;
            let len = rng.gen::<f64>() * max_len.min(TAU - 1e-9) + 1e-12;
            (start, start + len)
        })
        .collect();
    TorusSet::from_arcs(&arcs).expect("generated arcs are valid")
}

/// Plants a full rotation orbit on top of `e`: `k−1` arcs of the given
/// half-width centered on `x + j·2πi/(n+1)` for a random `x` and random
/// `i ∈ {1,…,n}`. The returned set is guaranteed to admit the orbit, which
/// makes it a deliberate counterexample for avoidance and bridge tests.
pub fn perturb_with_orbit<R: Rng>(
    rng: &mut R,
    e: &TorusSet,
    n: usize,
    k: usize,
    halfwidth: f64,
) -> TorusSet {
    let modulus = n + 1;
    let i = rng.gen_range(1..=n);
    let x = rng.gen::<f64>() * TAU;
    let arcs: Vec<(f64, f64)> = (0..k - 1)
        .map(|j| {
            let c = x + TAU * ((j * i) % modulus) as f64 / modulus as f64;
            (c - halfwidth, c + halfwidth)
        })
        .collect();
    e.union(&TorusSet::from_arcs(&arcs).expect("orbit arcs are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::stream_rng;
    use crate::torus::measure_bound_check;

    #[test]
    fn search_finds_verified_avoider() {
        let mut rng = stream_rng(7, 0);
        let params = SearchParams::new(10, 3);
        let e = search_avoider(&mut rng, &params).unwrap();
        assert!(e.measure() > 0.0, "search never accepted an arc");
        assert_eq!(avoids_rotated_aps(&e, 10, 3).unwrap(), None);
        let r = measure_bound_check(&e, 10, 3).unwrap();
        assert!(r.ok, "measure {} above bound {}", r.measure, r.bound);
    }

    #[test]
    fn search_is_deterministic_in_the_seed() {
        let params = SearchParams::new(10, 3);
        let a = search_avoider(&mut stream_rng(3, 5), &params).unwrap();
        let b = search_avoider(&mut stream_rng(3, 5), &params).unwrap();
        assert_eq!(a, b);
        let c = search_avoider(&mut stream_rng(4, 5), &params).unwrap();
        assert_ne!(a, c, "different seeds should explore differently");
    }

    #[test]
    fn search_rejects_bad_instances() {
        let mut rng = stream_rng(1, 0);
        let params = SearchParams::new(8, 3); // modulus 9 composite
        assert!(matches!(
            search_avoider(&mut rng, &params),
            Err(TorusError::NotPrime(9))
        ));
    }

    #[test]
    fn random_unions_are_normalized() {
        let mut rng = stream_rng(11, 2);
        for _ in 0..50 {
            let e = random_arc_union(&mut rng, 6, 1.0);
            let arcs = e.arcs();
            for pair in arcs.windows(2) {
                assert!(pair[0].1 < pair[1].0, "arcs overlap after normalization");
            }
            assert!(e.measure() <= TAU + 1e-12);
        }
    }

    #[test]
    fn perturbation_plants_a_witness() {
        let n = 10;
        let w = window_width(n);
        let base = TorusSet::from_arcs(&[(0.0, 0.4 * w)]).unwrap();
        for stream in 0..10 {
            let mut rng = stream_rng(21, stream);
            let bad = perturb_with_orbit(&mut rng, &base, n, 3, 0.05 * w);
            assert!(
                avoids_rotated_aps(&bad, n, 3).unwrap().is_some(),
                "stream {stream} produced no witness"
            );
        }
    }
}
