//! Density bookkeeping for a generated set: the point-count density at each
//! radius of the grid, and for seeded pins the one-dimensional density of
//! the pinned distance set, thickened to the set's own resolution.

use pinpat::detector::pinned_distance_set;
use pinpat::geometry::{upper_density_1d, upper_density_nd, IntervalUnion};
use serde_json::json;

use super::{config_err, empty_set_results, set_summary_json};
use crate::config::ExperimentConfig;
use crate::generators::{build_set, sample_distinct};
use crate::report::{timed, RunReport, Verdict};
use crate::CliError;

const DENSITY_CAP: f64 = 1.0 + 1e-9;

pub fn run(cfg: &ExperimentConfig) -> Result<RunReport<serde_json::Value>, CliError> {
    let mut timings = Vec::new();
    let set = match timed(&mut timings, "build-set", || build_set(cfg))? {
        Some(s) => s,
        None => {
            let (results, verdict) = empty_set_results(cfg);
            return Ok(RunReport::new(cfg, results, vec![verdict]));
        }
    };
    if cfg.r_grid.relative && !(set.bounding_radius() > 0.0) {
        return Err(CliError::Config(
            "set has zero extent, so a relative radius grid is degenerate; \
             pass an absolute grid"
                .into(),
        ));
    }

    let radii = cfg.r_grid.materialize(set.bounding_radius());
    let nd = upper_density_nd(&set, &radii).map_err(config_err)?;

    let indices: Vec<u32> = (0..set.len() as u32).collect();
    let pin_indices = sample_distinct(&indices, cfg.pins, cfg.seed, 0xD157);
    let mut pin_rows = Vec::with_capacity(pin_indices.len());
    let mut max_sup_1d = 0.0f64;
    timed(&mut timings, "distance-sets", || -> Result<(), CliError> {
        for &i in &pin_indices {
            let pin = &set.points()[i as usize];
            let dists = pinned_distance_set(&set, pin);
            let union = IntervalUnion::from_points(&dists, set.thickness());
            let density = upper_density_1d(&union, &radii).map_err(config_err)?;
            max_sup_1d = max_sup_1d.max(density.sup_ratio);
            let mean = dists.iter().sum::<f64>() / dists.len() as f64;
            pin_rows.push(json!({
                "pin_index": i,
                "pin": pin.coords(),
                "norm": pin.norm(),
                "distances": dists.len(),
                "max_distance": dists.last().copied().unwrap_or(0.0),
                "mean_distance": mean,
                "measure": union.measure(),
                "sup_density": density.sup_ratio,
            }));
        }
        Ok(())
    })?;

    let verdicts = vec![
        Verdict::pass(
            "densities-recorded",
            format!(
                "point density sup {:.4} over {} radii; {} pinned distance sets, sup {:.4}",
                nd.sup_ratio,
                radii.len(),
                pin_rows.len(),
                max_sup_1d
            ),
        ),
        Verdict::on(
            "distance-density-bounded",
            max_sup_1d <= DENSITY_CAP,
            format!("largest pinned distance density {:.6}", max_sup_1d),
            json!({"max_sup_density": max_sup_1d}),
        ),
    ];

    let results = json!({
        "set": set_summary_json(cfg.set.name(), &set),
        "radii": {"lo": radii[0], "hi": radii[radii.len() - 1], "count": radii.len()},
        "point_density": {"radii": nd.radii, "ratios": nd.ratios, "sup": nd.sup_ratio},
        "pins": pin_rows,
    });
    let mut report = RunReport::new(cfg, results, verdicts);
    report.timings = timings;
    Ok(report)
}
