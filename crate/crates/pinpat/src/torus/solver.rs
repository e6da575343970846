//! Exact extremal sizes of progression-free subsets of `Z/NZ`, plus the
//! asymptotic upper bound evaluated in log space.

use super::cyclic::CyclicSet;
use super::TorusError;

/// Default cap on `N` for the exact solver.
pub const EXACT_LIMIT: usize = 40;

/// Largest size of a subset of `Z/NZ` containing no `m`-term progression,
/// together with a witness of that size, by branch and bound.
///
/// `N ≤ limit ≤ 64` (the search state lives in one machine word). The search
/// fixes `0` in the set: translation maps progression-free sets to
/// progression-free sets of equal size, so some maximum set contains `0` and
/// the branch with `0` excluded can never win. Candidates are visited in
/// increasing residue order and a branch is cut when even taking every
/// remaining candidate cannot beat the best size found.
pub fn r_m_exact(n: usize, m: usize, limit: usize) -> Result<(usize, CyclicSet), TorusError> {
    if m < 2 {
        return Err(TorusError::BadLength(m));
    }
    if n < m {
        return Err(TorusError::ModulusBelowLength { modulus: n, length: m });
    }
    let limit = limit.min(64);
    if n > limit {
        return Err(TorusError::TooLarge { n, limit });
    }
    let mut best_mask = 1u64; // {0}
    let mut best = 1usize;

    // greedy seed: take residues in order when no progression appears
    let mut greedy = 1u64;
    for c in 1..n {
        if !creates_progression(greedy | (1 << c), c, n, m) {
            greedy |= 1 << c;
        }
    }
    let greedy_count = greedy.count_ones() as usize;
    if greedy_count > best {
        best = greedy_count;
        best_mask = greedy;
    }

    fn dfs(
        chosen: u64,
        count: usize,
        next: usize,
        n: usize,
        m: usize,
        best: &mut usize,
        best_mask: &mut u64,
    ) {
        if count + (n - next) <= *best {
            return;
        }
        if next == n {
            if count > *best {
                *best = count;
                *best_mask = chosen;
            }
            return;
        }
        let with = chosen | (1u64 << next);
        if !creates_progression(with, next, n, m) {
            dfs(with, count + 1, next + 1, n, m, best, best_mask);
        }
        dfs(chosen, count, next + 1, n, m, best, best_mask);
    }
    dfs(1, 1, 1, n, m, &mut best, &mut best_mask);

    Ok((best, CyclicSet::from_mask(n, best_mask)))
}

/// Whether `set` (which contains `c`) has an `m`-progression through `c`.
/// Sound as an incremental check: the set minus `c` is progression-free by
/// construction, so any new progression passes through `c`.
fn creates_progression(set: u64, c: usize, n: usize, m: usize) -> bool {
    for d in 1..n {
        // distinct elements require δ·d ≢ 0 (mod n) for 0 < δ < m
        if (1..m).any(|delta| (delta * d) % n == 0) {
            continue;
        }
        'pos: for j in 0..m {
            // progression with c at position j: elements c + (i − j)·d
            let mut e = (c + (n - (j * d) % n) % n) % n;
            for _ in 0..m {
                if (set >> e) & 1 == 0 {
                    continue 'pos;
                }
                e = (e + d) % n;
            }
            return true;
        }
    }
    false
}

/// Asymptotic ceiling for `m`-progression-free subsets of `Z/NZ`:
/// `1` for `m = 2`, else `N / (loglog N)^(c_m)` with `c_m = 2^(−2^(m+9))`.
///
/// The exponent `c_m` underflows doubles already at `m = 3`, so the bound is
/// assembled entirely in log space:
/// `exp(ln N − exp(−2^(m+9)·ln 2 + ln ln ln ln N))`. The correction term
/// needs `ln ln ln N > 0`; below that (`N < e^(e^1) ≈ 15.2`, i.e. `N ≤ 15`)
/// the "bound" would exceed the trivial bound `N` and is rejected as out of
/// domain.
pub fn gowers_bound(n: u64, m: usize) -> Result<f64, TorusError> {
    if m < 2 {
        return Err(TorusError::BadLength(m));
    }
    if m == 2 {
        if n < 2 {
            return Err(TorusError::BadModulus(n as usize));
        }
        return Ok(1.0);
    }
    let ln_n = (n as f64).ln();
    let ln_ln_n = ln_n.ln();
    if !(ln_ln_n > 1.0) {
        return Err(TorusError::OutOfDomain { n, m });
    }
    let l3 = ln_ln_n.ln(); // > 0
    let exponent_bits = 2f64.powi((m + 9) as i32);
    let correction = (-exponent_bits * std::f64::consts::LN_2 + l3.ln()).exp();
    Ok((ln_n - correction).exp())
}
