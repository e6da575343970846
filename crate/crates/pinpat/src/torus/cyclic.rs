//! Subsets of `Z/NZ` as bit arrays, and arithmetic-progression detection.

use super::TorusError;

/// A subset of `Z/NZ`, `N ≥ 2`, stored as a fixed-width bit array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicSet {
    modulus: usize,
    bits: Vec<u64>,
}

impl CyclicSet {
    pub fn new(modulus: usize) -> Result<Self, TorusError> {
        if modulus < 2 {
            return Err(TorusError::BadModulus(modulus));
        }
        Ok(CyclicSet {
            modulus,
            bits: vec![0; modulus.div_ceil(64)],
        })
    }

    pub fn from_members(modulus: usize, members: &[usize]) -> Result<Self, TorusError> {
        let mut s = CyclicSet::new(modulus)?;
        for &m in members {
            s.insert(m)?;
        }
        Ok(s)
    }

    pub(crate) fn from_mask(modulus: usize, mask: u64) -> Self {
        debug_assert!(modulus <= 64);
        CyclicSet {
            modulus,
            bits: vec![mask],
        }
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn insert(&mut self, r: usize) -> Result<(), TorusError> {
        if r >= self.modulus {
            return Err(TorusError::ResidueOutOfRange(r, self.modulus));
        }
        self.bits[r / 64] |= 1u64 << (r % 64);
        Ok(())
    }

    pub fn contains(&self, r: usize) -> bool {
        r < self.modulus && (self.bits[r / 64] >> (r % 64)) & 1 == 1
    }

    pub fn cardinality(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.modulus).filter(|&r| self.contains(r)).collect()
    }
}

/// A length-`m` arithmetic progression `a, a+d, …, a+(m−1)d` in `Z/NZ` with
/// `d ∈ {1, …, N−1}` and pairwise-distinct elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicWitness {
    pub base: usize,
    pub difference: usize,
    pub length: usize,
}

impl CyclicWitness {
    /// The progression's elements, in order.
    pub fn elements(&self, modulus: usize) -> Vec<usize> {
        (0..self.length)
            .map(|j| (self.base + j * self.difference) % modulus)
            .collect()
    }
}

/// Whether the residues `j·d mod N` are pairwise distinct for `j < m`, i.e.
/// `δ·d ≢ 0 (mod N)` for `0 < δ < m`.
fn steps_distinct(modulus: usize, d: usize, m: usize) -> bool {
    (1..m).all(|delta| !(delta * d).is_multiple_of(modulus))
}

/// Finds a length-`m` progression inside `s` by brute force over starts and
/// differences; returns the first one in scan order, or `None`.
pub fn has_ap(s: &CyclicSet, m: usize) -> Result<Option<CyclicWitness>, TorusError> {
    let n = s.modulus();
    if m < 2 {
        return Err(TorusError::BadLength(m));
    }
    if n < m {
        return Err(TorusError::ModulusBelowLength { modulus: n, length: m });
    }
    for d in 1..n {
        if !steps_distinct(n, d, m) {
            continue;
        }
        for a in 0..n {
            if !s.contains(a) {
                continue;
            }
            let mut all = true;
            let mut e = a;
            for _ in 1..m {
                e = (e + d) % n;
                if !s.contains(e) {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(Some(CyclicWitness {
                    base: a,
                    difference: d,
                    length: m,
                }));
            }
        }
    }
    Ok(None)
}
