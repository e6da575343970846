//! Measure-theory self-checks. Two parts: quadrature of the repeated-polar
//! area element against the closed-form sphere areas and ball volumes for
//! every dimension up to the configured one, then an empirical coarea split
//! of one pinned scan, separating the spherical section mass of the set at
//! radii the scan accepted from the rest.

use pinpat::detector::{coarea_split, pinned_scaling_set, sphere_measure_checks};
use pinpat::geometry::Point;
use serde_json::json;

use super::{config_err, empty_set_results, padded_triangle, set_summary_json};
use crate::config::ExperimentConfig;
use crate::generators::{build_set, sample_distinct};
use crate::report::{timed, RunReport, Verdict};
use crate::CliError;

const ANGULAR_PANELS: usize = 256;
const RADIAL_PANELS: usize = 64;
const AREA_RTOL: f64 = 1e-6;
const VOLUME_RTOL: f64 = 1e-6;

/// Coarea node counts per dimension. The angular box has `d−1` axes, so the
/// per-axis count falls as the dimension grows to keep the query volume flat.
fn coarea_nodes(d: usize) -> (usize, usize) {
    match d {
        2 => (64, 256),
        3 => (48, 32),
        4 => (48, 12),
        _ => (48, 6),
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunReport<serde_json::Value>, CliError> {
    let mut timings = Vec::new();

    let mut quadrature = Vec::with_capacity(cfg.d - 1);
    let mut max_area_err = 0.0f64;
    let mut max_volume_err = 0.0f64;
    timed(&mut timings, "quadrature", || -> Result<(), CliError> {
        for dd in 2..=cfg.d {
            let rep =
                sphere_measure_checks(dd, ANGULAR_PANELS, RADIAL_PANELS).map_err(config_err)?;
            max_area_err = max_area_err.max(rep.area_rel_error());
            max_volume_err = max_volume_err.max(rep.volume_rel_error());
            quadrature.push(json!({
                "dim": rep.dim,
                "sphere_area": rep.sphere_area,
                "sphere_area_expected": rep.sphere_area_expected,
                "area_rel_error": rep.area_rel_error(),
                "ball_volume": rep.ball_volume,
                "ball_volume_expected": rep.ball_volume_expected,
                "volume_rel_error": rep.volume_rel_error(),
            }));
        }
        Ok(())
    })?;

    let mut verdicts = vec![
        Verdict::on(
            "sphere-areas-match",
            max_area_err <= AREA_RTOL,
            format!(
                "area quadrature within {:.2e} relative for dimensions 2..={}",
                max_area_err, cfg.d
            ),
            json!({"max_rel_error": max_area_err, "tolerance": AREA_RTOL}),
        ),
        Verdict::on(
            "ball-volumes-match",
            max_volume_err <= VOLUME_RTOL,
            format!(
                "radial integration of section areas within {:.2e} relative",
                max_volume_err
            ),
            json!({"max_rel_error": max_volume_err, "tolerance": VOLUME_RTOL}),
        ),
    ];

    // coarea split around sampled pins, context for the quadrature
    let coarea = match timed(&mut timings, "build-set", || build_set(cfg))? {
        None => {
            let (note, verdict) = empty_set_results(cfg);
            verdicts.push(verdict);
            note
        }
        Some(set) => {
            if cfg.r_grid.relative && !(set.bounding_radius() > 0.0) {
                return Err(CliError::Config(
                    "set has zero extent, so a relative radius grid is degenerate; \
                     pass an absolute grid"
                        .into(),
                ));
            }
            let indices: Vec<u32> = (0..set.len() as u32).collect();
            let pin_indices = sample_distinct(&indices, cfg.pins, cfg.seed, 0x5BE3);
            let r_grid = cfg.r_grid.materialize(set.bounding_radius());
            let (r_lo, r_hi) = (r_grid[0], r_grid[r_grid.len() - 1]);
            let pattern = padded_triangle(cfg.d);
            let (radial, angular) = coarea_nodes(cfg.d);
            let mut splits = Vec::with_capacity(pin_indices.len());
            timed(&mut timings, "coarea", || -> Result<(), CliError> {
                for &i in &pin_indices {
                    let pin: &Point = &set.points()[i as usize];
                    let scan = pinned_scaling_set(&set, pin, &pattern, &r_grid, cfg.tol)
                        .map_err(config_err)?;
                    let scales = scan.interval_union();
                    let split = coarea_split(
                        &set, pin, &scales, r_lo, r_hi, radial, angular, cfg.tol,
                    )
                    .map_err(config_err)?;
                    splits.push(json!({
                        "pin_index": i,
                        "pin": pin.coords(),
                        "accepted_scales": scan.scales.len(),
                        "scale_measure": scales.measure(),
                        "inside": split.inside,
                        "outside": split.outside,
                        "total": split.total(),
                    }));
                }
                Ok(())
            })?;
            json!({
                "set": set_summary_json(cfg.set.name(), &set),
                "r_lo": r_lo,
                "r_hi": r_hi,
                "radial_nodes": radial,
                "angular_nodes": angular,
                "probe": cfg.tol,
                "splits": splits,
            })
        }
    };

    let results = json!({
        "angular_panels": ANGULAR_PANELS,
        "radial_panels": RADIAL_PANELS,
        "quadrature": quadrature,
        "coarea": coarea,
    });
    let mut report = RunReport::new(cfg, results, verdicts);
    report.timings = timings;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_is_tight_through_dimension_five() {
        for d in 2..=5 {
            let rep = sphere_measure_checks(d, ANGULAR_PANELS, RADIAL_PANELS).unwrap();
            assert!(rep.area_rel_error() <= AREA_RTOL, "d={} err={}", d, rep.area_rel_error());
            assert!(rep.volume_rel_error() <= VOLUME_RTOL, "d={} err={}", d, rep.volume_rel_error());
        }
    }

    #[test]
    fn small_three_dimensional_run_passes() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ExperimentConfig::defaults_for("sphere-check");
        cfg.d = 3;
        cfg.set_radius = 4.0;
        cfg.r_grid.count = 16;
        cfg.out_dir = dir.path().to_path_buf();
        let report = run(&cfg).unwrap();
        assert!(!report.any_fail(), "{:#?}", report.verdicts);
        let splits = report.results["coarea"]["splits"].as_array().unwrap();
        assert_eq!(splits.len(), 1);
        let total = splits[0]["total"].as_f64().unwrap();
        assert!(total.is_finite() && total >= 0.0);
    }
}
