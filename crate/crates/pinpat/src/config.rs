//! Named numeric tolerances, collected in one record so every comparison in
//! the crate can point at the constant it uses.

/// Tolerance bundle. All geometric predicates in the crate read their slack
/// from one of these fields rather than from scattered literals.
///
/// The defaults are deliberate:
///
/// * `orthogonality` (1e-10): max-norm defect of `QᵀQ − I` accepted when an
///   orthogonal matrix is built from floating-point data.
/// * `collinearity` (1e-12): an angle this close to `0` or `π` counts as a
///   collinear triple.
/// * `isometry_distance` (1e-10): pairwise-distance drift allowed after
///   applying an isometry.
/// * `normalization` (1e-9): slack when deciding whether a pattern already
///   has an origin pin and unit minimum distance.
/// * `angle_gap` (1e-9): agreement required between consecutive angular gaps
///   in the equal-gap matcher.
/// * `slicing_identity` (1e-9): allowed defect in the measure-vs-slice-count
///   identity for arc unions.
/// * `measure_slack` (1e-12): additive slack on exact measure bounds before
///   a violation is flagged.
/// * `slice_radius` (1e-12): circle points emitted by sphere slicing must
///   sit at the requested radius within this.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub orthogonality: f64,
    pub collinearity: f64,
    pub isometry_distance: f64,
    pub normalization: f64,
    pub angle_gap: f64,
    pub slicing_identity: f64,
    pub measure_slack: f64,
    pub slice_radius: f64,
}

/// Crate-wide default tolerances.
pub const TOL: Tolerances = Tolerances {
    orthogonality: 1e-10,
    collinearity: 1e-12,
    isometry_distance: 1e-10,
    normalization: 1e-9,
    angle_gap: 1e-9,
    slicing_identity: 1e-9,
    measure_slack: 1e-12,
    slice_radius: 1e-12,
};

impl Default for Tolerances {
    fn default() -> Self {
        TOL
    }
}

/// Default value for the ambient density constant `c_d` that scales the
/// guaranteed lower bound `c_d · α'^(d−1)` on thin-cone density.
///
/// No canonical numeric value is claimed for it; it is an experiment knob.
/// Every routine that needs it takes it explicitly, and the command-line
/// front end defaults to this.
pub const DEFAULT_DENSITY_CONSTANT: f64 = 1.0;
