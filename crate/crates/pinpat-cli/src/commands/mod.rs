//! One module per subcommand. Each `run` takes the validated configuration
//! and returns a full report; the dispatcher writes the artifacts and turns
//! verdicts into the exit code.

pub mod catalog_cmd;
pub mod cone_demo;
pub mod distance_density;
pub mod pinned_scan;
pub mod rm_table;
pub mod sphere_check;
pub mod torus_verify;

use pinpat::catalog::{PrimeSelection, PrimeWindow, SignedLogTower};
use pinpat::geometry::{DiscretizedSet, Isometry, Pattern, Point};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::CliError;

/// The triangle with unit sides pinned at the origin, padded with zero
/// coordinates up to dimension `d`.
pub(crate) fn padded_triangle(d: usize) -> Pattern {
    let base = Pattern::equilateral_triangle();
    let points = base
        .points()
        .iter()
        .map(|p| {
            let mut coords = p.coords().to_vec();
            coords.resize(d, 0.0);
            Point::new(coords).expect("finite")
        })
        .collect();
    Pattern::new(points).expect("padding preserves distinctness")
}

/// The concrete points `x + r·O(v_j)` of a witnessed copy, for reproducers.
pub(crate) fn copy_points(x: &Point, v: &Pattern, r: f64, o: &Isometry) -> Vec<Vec<f64>> {
    v.points()
        .iter()
        .map(|p| {
            let image = o.apply(p).expect("witness dimension matches");
            x.add(&image.scale(r)).coords().to_vec()
        })
        .collect()
}

pub(crate) fn set_summary_json(kind: &str, set: &DiscretizedSet) -> serde_json::Value {
    json!({
        "kind": kind,
        "points": set.len(),
        "dim": set.dim(),
        "pitch": set.pitch(),
        "thickness": set.thickness(),
        "bounding_radius": set.bounding_radius(),
    })
}

/// JSON form of a signed exponential tower; `value` is null once the tower
/// leaves f64 range.
pub(crate) fn tower_json(t: &SignedLogTower) -> serde_json::Value {
    let value = if t.is_representable() { json!(t.to_f64()) } else { serde_json::Value::Null };
    json!({
        "sign": t.sign,
        "level": t.level,
        "seed": t.seed,
        "display": format!("{t}"),
        "value": value,
    })
}

pub(crate) fn window_json(w: &PrimeWindow) -> serde_json::Value {
    match w {
        PrimeWindow::Linear { lo, hi } => json!({"kind": "linear", "lo": lo, "hi": hi}),
        PrimeWindow::Astronomical { x } => json!({"kind": "astronomical", "x": tower_json(x)}),
    }
}

/// Applies a configured modulus override on top of a theory selection.
/// Returns `(prime, in_theory_window, overridden)`.
pub(crate) fn effective_prime(cfg: &ExperimentConfig, sel: &PrimeSelection) -> (u64, bool, bool) {
    match cfg.prime_override {
        None => (sel.prime, sel.in_theory_window, false),
        Some(p) => {
            let inside = match sel.window {
                PrimeWindow::Linear { lo, hi } => (p as f64) > lo && (p as f64) < hi,
                PrimeWindow::Astronomical { .. } => false,
            };
            (p, inside, true)
        }
    }
}

/// Guard for runs whose generated set came out empty: a report with a single
/// WARN and no results, so pipelines get a well-formed artifact instead of
/// an error.
pub(crate) fn empty_set_results(cfg: &ExperimentConfig) -> (serde_json::Value, crate::report::Verdict) {
    let results = json!({"set": {"kind": cfg.set.name(), "points": 0}});
    let verdict = crate::report::Verdict::warn(
        "set-nonempty",
        format!("generated set \"{}\" is empty; nothing to scan", cfg.set.name()),
    );
    (results, verdict)
}

/// Evenly spaced values, used for report-internal radius lists.
pub(crate) fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "linspace needs at least two points");
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + step * i as f64).collect()
}

/// Per-stream seed for independent experiment parts: mixes a label into the
/// run seed so streams never collide across parts.
pub(crate) fn part_seed(seed: u64, label: u64) -> u64 {
    pinpat::seeding::splitmix64(seed ^ label)
}

pub(crate) fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}
