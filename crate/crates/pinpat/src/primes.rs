//! Primality by trial division and small prime scans.
//!
//! Every modulus in this crate is desk scale (≤ ~10^7), where trial division
//! up to the square root is instant and has no correctness caveats.

/// Deterministic primality test by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Smallest prime strictly greater than `n`, if one exists below `u64::MAX`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut c = n.checked_add(1).expect("prime scan overflow");
    loop {
        if is_prime(c) {
            return c;
        }
        c += 1;
    }
}

/// Smallest prime in the open interval `(lo, hi)`, scanning upward.
pub fn smallest_prime_in_open(lo: f64, hi: f64) -> Option<u64> {
    if !lo.is_finite() || !hi.is_finite() || hi <= lo {
        return None;
    }
    let mut c = if lo < 1.0 { 2 } else { lo.floor() as u64 + 1 };
    // `c` is the smallest integer strictly above `lo`; floor(lo)+1 == lo+1
    // when lo is integral, which is still strictly above lo only if lo is
    // not itself an integer. Fix up the integral case.
    if lo >= 1.0 && (lo.floor() - lo).abs() == 0.0 {
        c = lo as u64 + 1;
    }
    while (c as f64) < hi {
        if is_prime(c) {
            return Some(c);
        }
        c += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let known = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
        for n in 0..50 {
            assert_eq!(is_prime(n), known.contains(&n), "n = {n}");
        }
    }

    #[test]
    fn larger_composites_and_primes() {
        assert!(is_prime(7919));
        assert!(is_prime(104_729));
        assert!(!is_prime(7919 * 104_729));
        assert!(!is_prime(24_581)); // 47 * 523
    }

    #[test]
    fn next_prime_scans() {
        assert_eq!(next_prime_above(1), 2);
        assert_eq!(next_prime_above(2), 3);
        assert_eq!(next_prime_above(24), 29);
        assert_eq!(next_prime_above(100), 101);
    }

    #[test]
    fn open_window_scan() {
        // strictly inside (62.83…, 188.49…): 63 and 64 composite, 67 prime
        assert_eq!(smallest_prime_in_open(62.83, 188.5), Some(67));
        assert_eq!(smallest_prime_in_open(125.66, 377.0), Some(127));
        // integral endpoints are excluded
        assert_eq!(smallest_prime_in_open(7.0, 11.0), None);
        assert_eq!(smallest_prime_in_open(7.0, 11.5), Some(11));
        assert_eq!(smallest_prime_in_open(0.5, 2.5), Some(2));
        assert_eq!(smallest_prime_in_open(0.6, 1.9), None);
    }
}
