//! Desk-scale laboratory for pinned point patterns.
//!
//! The crate has two halves that meet in the middle:
//!
//! * exact combinatorics on cyclic groups and the circle: progression-free
//!   subsets of `Z/NZ`, rotated-progression avoidance for unions of arcs,
//!   and the slicing identity that ties arc measure to slice counts
//!   ([`torus`]);
//! * tolerance-bounded geometry in `R^d`: patterns and their angles,
//!   discretized sets with upper-density estimates ([`geometry`]), thin
//!   solid cones whose far field collapses to a narrow angle ([`cone`]),
//!   a family of unit-circle patterns indexed by a prime ([`catalog`]),
//!   and a detector that scans a pinned set for scaled isometric copies
//!   ([`detector`]).
//!
//! Everything is deterministic: randomized routines take explicit seeds
//! (see [`seeding`]) and parallel scans aggregate in index order.

// `!(x > 0.0)` rejects NaN along with the out-of-range values; the
// positive spelling would wave NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cone;
pub mod config;
pub mod detector;
pub mod geometry;
pub mod primes;
pub mod seeding;
pub mod torus;
