//! The thin-cone counterexample run. One discretized cone, two regimes:
//!
//! * far field: past twice the per-pin collapse threshold the triangle
//!   pattern admits no pinned copy at any scanned scale, because every two
//!   far set points subtend less than the collapse angle at the pin while
//!   the triangle legs need their full angle;
//! * near field: the first catalog pattern of a modulus with angular gap
//!   below the cone aperture occurs at every scanned small scale, pinned at
//!   every pin, so the scaling sets there have positive density.
//!
//! A seeded Monte Carlo stress of the collapse bound and the exact sector
//! density ratio round out the report. Dimension 2 runs in seconds; higher
//! dimensions multiply the grid and the search cost.

use std::f64::consts::TAU;

use pinpat::catalog::{catalog_pattern, select_prime, CatalogSpec, PrimeOptions, PrimeWindow};
use pinpat::cone::{cone_density, cone_grid, scan_pinned_copies, tightened_threshold,
    validate_angle_collapse};
use pinpat::geometry::Point;
use pinpat::primes::next_prime_above;
use serde::Serialize;
use serde_json::json;

use super::{config_err, copy_points, linspace, padded_triangle, part_seed};
use crate::config::ExperimentConfig;
use crate::generators::{cone_parameters, sample_distinct};
use crate::report::{artifact_path, timed, RunReport, Verdict};
use crate::svg::Svg;
use crate::CliError;

const GRID_POINT_CAP: usize = 8_000_000;
const DENSITY_RADII: usize = 16;
const TIGHTEN_PROBES: u64 = 1500;
const TIGHTEN_STEPS: u32 = 18;
/// Abundance scan bounds in units of the tolerance: past `4·tol` the pin
/// no longer covers the legs trivially, and `20·tol` stays far inside the
/// range where the near-axis construction keeps copies within `tol/4` of
/// stored points.
const ABUNDANCE_LO_TOLS: f64 = 4.0;
const ABUNDANCE_HI_TOLS: f64 = 20.0;
const ABUNDANCE_COUNT: usize = 256;

#[derive(Debug, Serialize)]
pub struct McSummary {
    pub samples: u64,
    pub violations: u64,
    pub max_angle: f64,
    pub pass_rate: f64,
}

#[derive(Debug, Serialize)]
pub struct FarScan {
    pub r_lo: f64,
    pub r_hi: f64,
    pub count: usize,
    /// Accepted scales at or past the certified floor (must stay 0).
    pub accepted_past_floor: usize,
    /// Accepted scales below the floor, where nothing is claimed.
    pub accepted_below_floor: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<serde_json::Value>,
}

#[derive(Debug, Serialize)]
pub struct PinReport {
    pub coords: Vec<f64>,
    pub norm: f64,
    pub threshold: f64,
    pub scan_floor: f64,
    /// Empirical bisection refinement of the certified threshold.
    pub tightened_threshold: f64,
    /// False when the tolerance exceeds the collapse threshold, in which
    /// case emptiness past the floor is not certified for this pin.
    pub certified: bool,
    pub far_scan: FarScan,
    pub collapse_mc: McSummary,
}

#[derive(Debug, Serialize)]
pub struct AbundancePin {
    pub coords: Vec<f64>,
    pub accepted: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_scale: Option<f64>,
    pub sup_density: f64,
    pub scales_measure: f64,
}

#[derive(Debug, Serialize)]
pub struct ConeDemoResults {
    pub pattern_points: Vec<Vec<f64>>,
    pub pattern_angle: f64,
    pub aperture: f64,
    pub collapse_angle: f64,
    pub cosine_gap: f64,
    /// The certified threshold is this multiple of the pin norm.
    pub threshold_per_unit_norm: f64,
    pub grid: serde_json::Value,
    pub pins: Vec<PinReport>,
    pub mc_totals: McSummary,
    pub sector_density: serde_json::Value,
    pub grid_density: serde_json::Value,
    pub abundance: serde_json::Value,
}

/// Smallest prime `p` with `p > 2π/aperture + 1`, so that the first catalog
/// pattern of modulus `p` has angular gap `2π/p` strictly below the
/// aperture.
fn abundance_prime(aperture: f64) -> u64 {
    let bound = TAU / aperture + 1.0;
    let mut p = next_prime_above(bound.max(2.0).floor() as u64);
    while (p as f64) <= bound {
        p = next_prime_above(p);
    }
    p
}

/// Slab-sum estimate of the cone grid size at radius `r_max`, matching the
/// enumeration the grid builder performs.
fn grid_size_estimate(tan_half: f64, pitch: f64, r_max: f64, d: usize) -> f64 {
    let max_i = (r_max / pitch).floor() as i64;
    let mut total = 0.0;
    for i in 0..=max_i {
        let width = (tan_half * i as f64).floor();
        total += (2.0 * width + 1.0).powi(d as i32 - 1);
    }
    total
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunReport<ConeDemoResults>, CliError> {
    let mut timings = Vec::new();
    let params = cone_parameters(cfg)?;
    let cone = params.cone();
    let pattern = padded_triangle(cfg.d);
    let aperture = params.aperture();
    let collapse = params.collapse_angle();
    let cosine_gap = aperture.cos() - collapse.cos();
    let max_leg: f64 = pattern.points().iter().map(Point::norm).fold(0.0, f64::max);

    // pins: seeded sample of the near-region cone grid, apex excluded
    let near = cone_grid(&cone, cfg.pitch, cfg.set_radius).map_err(config_err)?;
    let candidates: Vec<u32> = (0..near.len() as u32)
        .filter(|&i| near.points()[i as usize].norm() > 0.0)
        .collect();
    if candidates.is_empty() {
        return Err(CliError::Config(format!(
            "no cone grid points with positive norm inside radius {}; raise set_radius or \
             lower pitch",
            cfg.set_radius
        )));
    }
    let pins: Vec<Point> = sample_distinct(&candidates, cfg.pins, cfg.seed, 0xC0DE)
        .into_iter()
        .map(|i| near.points()[i as usize].clone())
        .collect();

    // per-pin certified thresholds and scan grids
    let mut thresholds = Vec::with_capacity(pins.len());
    let mut scan_grids = Vec::with_capacity(pins.len());
    for pin in &pins {
        let m = params.threshold(pin).map_err(config_err)?;
        let floor = 2.0 * m;
        thresholds.push(m);
        scan_grids.push(cfg.r_grid.materialize(floor));
    }
    let r_needed = pins
        .iter()
        .zip(&scan_grids)
        .map(|(pin, grid)| pin.norm() + grid.last().copied().unwrap_or(0.0) * max_leg)
        .fold(0.0f64, f64::max);
    let r_max_grid = r_needed + cfg.tol + cfg.pitch;

    let estimate = grid_size_estimate(cone.half_angle().tan(), cfg.pitch, r_max_grid, cfg.d);
    if !(estimate <= GRID_POINT_CAP as f64) {
        return Err(CliError::Config(format!(
            "cone grid out to radius {:.0} would hold about {:.2e} points (cap {}); \
             reduce the scan range or increase pitch",
            r_max_grid, estimate, GRID_POINT_CAP
        )));
    }
    let grid = timed(&mut timings, "cone-grid", || cone_grid(&cone, cfg.pitch, r_max_grid))
        .map_err(config_err)?;

    // far-field emptiness scans
    let mut pin_reports = Vec::with_capacity(pins.len());
    let mut far_violation: Option<serde_json::Value> = None;
    let mut uncertified = 0usize;
    timed(&mut timings, "far-scans", || -> Result<(), CliError> {
        for ((pin, m), r_grid) in pins.iter().zip(&thresholds).zip(&scan_grids) {
            let floor = 2.0 * m;
            let certified = cfg.tol <= *m;
            if !certified {
                uncertified += 1;
            }
            let scan =
                scan_pinned_copies(&grid, pin, &pattern, r_grid, cfg.tol).map_err(config_err)?;
            let mut past = 0usize;
            let mut below = 0usize;
            let mut first: Option<serde_json::Value> = None;
            for (r, o) in &scan.scales {
                if *r >= floor {
                    past += 1;
                    if certified {
                        let repro = json!({
                            "pin": pin.coords(),
                            "scale": r,
                            "copy": copy_points(pin, &pattern, *r, o),
                        });
                        first.get_or_insert(repro.clone());
                        far_violation.get_or_insert(repro);
                    }
                } else {
                    below += 1;
                }
            }
            pin_reports.push(PinReport {
                coords: pin.coords().to_vec(),
                norm: pin.norm(),
                threshold: *m,
                scan_floor: floor,
                tightened_threshold: 0.0, // filled below
                certified,
                far_scan: FarScan {
                    r_lo: r_grid[0],
                    r_hi: *r_grid.last().expect("nonempty grid"),
                    count: r_grid.len(),
                    accepted_past_floor: past,
                    accepted_below_floor: below,
                    first_violation: first,
                },
                collapse_mc: McSummary { samples: 0, violations: 0, max_angle: 0.0, pass_rate: 0.0 },
            });
        }
        Ok(())
    })?;

    // collapse bound stress, split across pins
    let per_pin = cfg.mc_samples.div_ceil(pins.len() as u64);
    let mut total_samples = 0u64;
    let mut total_violations = 0u64;
    let mut max_angle = 0.0f64;
    timed(&mut timings, "collapse-mc", || -> Result<(), CliError> {
        for (i, pin) in pins.iter().enumerate() {
            let seed = part_seed(cfg.seed, 0xAC01_0000 + i as u64);
            let rep = validate_angle_collapse(&cone, cfg.slack_exponent, pin, per_pin, seed)
                .map_err(config_err)?;
            total_samples += rep.samples;
            total_violations += rep.violations;
            max_angle = max_angle.max(rep.max_angle);
            pin_reports[i].collapse_mc = McSummary {
                samples: rep.samples,
                violations: rep.violations,
                max_angle: rep.max_angle,
                pass_rate: (rep.samples - rep.violations) as f64 / rep.samples as f64,
            };
            pin_reports[i].tightened_threshold = tightened_threshold(
                &cone,
                cfg.slack_exponent,
                pin,
                part_seed(cfg.seed, 0xBE77_0000 + i as u64),
                TIGHTEN_PROBES,
                TIGHTEN_STEPS,
            )
            .map_err(config_err)?;
        }
        Ok(())
    })?;
    let mc_totals = McSummary {
        samples: total_samples,
        violations: total_violations,
        max_angle,
        pass_rate: (total_samples - total_violations) as f64 / total_samples as f64,
    };

    // density of the cone: exact sector ratio in the plane, grid-counted in
    // higher dimension; plus the staircase-quantized ratio of the grid
    // itself for context
    let radii = linspace(cfg.set_radius.min(grid.bounding_radius() / 2.0), grid.bounding_radius(), DENSITY_RADII);
    let sector = cone_density(&cone, &radii, cfg.pitch, None).map_err(config_err)?;
    let grid_nd = pinpat::geometry::upper_density_nd(&grid, &radii).map_err(config_err)?;
    let expected_ratio = 0.5 * aperture;
    let sector_ok = if cfg.d == 2 {
        sector
            .ratios
            .iter()
            .all(|r| (r - expected_ratio).abs() <= 0.02 * expected_ratio)
    } else {
        sector.sup_ratio > 0.0
    };

    // near-field abundance companion
    let computed_prime = abundance_prime(aperture);
    let prime = cfg.prime_override.unwrap_or(computed_prime);
    let theory = select_prime(cfg.k, cfg.d, cfg.epsilon0, cfg.c_d, &PrimeOptions::default())
        .map_err(config_err)?;
    let in_theory_window = match theory.window {
        PrimeWindow::Linear { lo, hi } => (prime as f64) > lo && (prime as f64) < hi,
        PrimeWindow::Astronomical { .. } => false,
    };
    let window_bypassed = !in_theory_window || cfg.prime_override.is_some();
    let n_ab = (prime - 1) as usize;
    let ab_spec =
        CatalogSpec::new(cfg.k, cfg.d, n_ab, cfg.c_d, cfg.epsilon0).map_err(config_err)?;
    let near_pattern = catalog_pattern(&ab_spec, 1).map_err(config_err)?;
    let gap = TAU / prime as f64;
    let gap_ok = gap < aperture;

    let ab_grid = linspace(
        ABUNDANCE_LO_TOLS * cfg.tol,
        ABUNDANCE_HI_TOLS * cfg.tol,
        ABUNDANCE_COUNT,
    );
    let mut ab_pins = Vec::with_capacity(pins.len());
    let mut ab_missing: Option<serde_json::Value> = None;
    timed(&mut timings, "near-scans", || -> Result<(), CliError> {
        for pin in &pins {
            let scan =
                scan_pinned_copies(&grid, pin, &near_pattern, &ab_grid, cfg.tol).map_err(config_err)?;
            let accepted = scan.scales.len();
            let sup = scan.density.sup_ratio;
            if accepted == 0 || !(sup > 0.0) {
                ab_missing.get_or_insert(json!({
                    "pin": pin.coords(),
                    "accepted": accepted,
                    "sup_density": sup,
                }));
            }
            ab_pins.push(AbundancePin {
                coords: pin.coords().to_vec(),
                accepted,
                first_scale: scan.scales.first().map(|(r, _)| *r),
                sup_density: sup,
                scales_measure: scan.interval_union().measure(),
            });
        }
        Ok(())
    })?;

    let ab_pins_total = ab_pins.len();
    let abundance = json!({
        "prime": prime,
        "computed_prime": computed_prime,
        "override": cfg.prime_override.is_some(),
        "theory_window": super::window_json(&theory.window),
        "theory_window_bypassed": window_bypassed,
        "pattern_gap": gap,
        "aperture": aperture,
        "gap_below_aperture": gap_ok,
        "pattern_points": near_pattern.points().iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>(),
        "grid": {"r_lo": ab_grid[0], "r_hi": ab_grid[ab_grid.len() - 1], "count": ab_grid.len()},
        "pins": ab_pins,
    });

    let far_detail = if uncertified == 0 {
        format!(
            "no pinned copy at any of {} scanned scales past twice the threshold, {} pins",
            pin_reports.iter().map(|p| p.far_scan.count).sum::<usize>(),
            pins.len()
        )
    } else {
        format!(
            "{} pins certified clean; {} pins skipped (tolerance exceeds their threshold)",
            pins.len() - uncertified,
            uncertified
        )
    };
    let verdicts = vec![
        Verdict::on(
            "far-scales-empty",
            far_violation.is_none(),
            far_detail,
            far_violation.unwrap_or_default(),
        ),
        Verdict::on(
            "angle-collapse-monte-carlo",
            total_violations == 0 && max_angle <= collapse,
            format!(
                "{} far pairs, 100% within the collapse angle (max {:.6} of {:.6})",
                total_samples, max_angle, collapse
            ),
            json!({"violations": total_violations, "max_angle": max_angle}),
        ),
        Verdict::on(
            "sector-density-ratio",
            sector_ok,
            if cfg.d == 2 {
                format!(
                    "sector measure over R^2 is {:.6e} at every radius (aperture/2 = {:.6e})",
                    sector.sup_ratio, expected_ratio
                )
            } else {
                format!("grid-counted cone density positive, sup ratio {:.3e}", sector.sup_ratio)
            },
            json!({"ratios": sector.ratios, "expected": expected_ratio}),
        ),
        Verdict::on(
            "near-scales-abundant",
            ab_missing.is_none(),
            format!(
                "gap-{:.3e} pattern occurs at every pin with positive scale density ({} pins)",
                gap, ab_pins_total
            ),
            ab_missing.unwrap_or_default(),
        ),
        if window_bypassed {
            Verdict::warn(
                "abundance-window",
                format!(
                    "modulus {} lies outside the theory-scale window; aperture-driven demo choice",
                    prime
                ),
            )
        } else {
            Verdict::pass(
                "abundance-window",
                format!("modulus {} lies inside the theory window", prime),
            )
        },
        if gap_ok {
            Verdict::pass(
                "pattern-gap-below-aperture",
                format!("angular gap {:.3e} < aperture {:.3e}", gap, aperture),
            )
        } else {
            Verdict::warn(
                "pattern-gap-below-aperture",
                format!(
                    "angular gap {:.3e} is not below the aperture {:.3e}; the near-field \
                     construction is off regime",
                    gap, aperture
                ),
            )
        },
    ];

    let results = ConeDemoResults {
        pattern_points: pattern.points().iter().map(|p| p.coords().to_vec()).collect(),
        pattern_angle: params.alpha,
        aperture,
        collapse_angle: collapse,
        cosine_gap,
        threshold_per_unit_norm: 8.0 / cosine_gap,
        grid: json!({
            "pitch": cfg.pitch,
            "thickness": grid.thickness(),
            "r_max": r_max_grid,
            "points": grid.len(),
        }),
        pins: pin_reports,
        mc_totals,
        sector_density: json!({"radii": sector.radii, "ratios": sector.ratios}),
        grid_density: json!({
            "radii": grid_nd.radii,
            "ratios": grid_nd.ratios,
            "note": "lattice staircase count, context only",
        }),
        abundance,
    };

    render_svg(cfg, &results)?;

    let mut report = RunReport::new(cfg, results, verdicts);
    report.timings = timings;
    Ok(report)
}

/// One row per pin on a log radius axis: the abundance band with its
/// accepted measure, the certified threshold, and the far scan band.
fn render_svg(cfg: &ExperimentConfig, res: &ConeDemoResults) -> Result<(), CliError> {
    let (w, h) = (860.0, 120.0 + 26.0 * res.pins.len() as f64);
    let (left, right, top) = (120.0, 30.0, 70.0);
    let r_lo = res
        .pins
        .iter()
        .map(|p| p.far_scan.r_lo)
        .chain(res.abundance["grid"]["r_lo"].as_f64())
        .fold(f64::INFINITY, f64::min)
        * 0.8;
    let r_hi = res.pins.iter().map(|p| p.far_scan.r_hi).fold(0.0f64, f64::max) * 1.2;
    let x = |r: f64| left + (r.ln() - r_lo.ln()) / (r_hi.ln() - r_lo.ln()) * (w - left - right);

    let mut svg = Svg::new(w, h);
    svg.text(
        10.0,
        20.0,
        13.0,
        &format!(
            "thin cone: aperture {:.3e}, collapse {:.3e}, threshold {:.1} per unit pin norm",
            res.aperture, res.collapse_angle, res.threshold_per_unit_norm
        ),
    );
    svg.text(
        10.0,
        40.0,
        13.0,
        &format!(
            "blue: small scales where the gap-{:.2e} pattern occurs; green: certified-empty far band",
            res.abundance["pattern_gap"].as_f64().unwrap_or(0.0)
        ),
    );
    svg.text(10.0, 60.0, 13.0, "dashed: collapse threshold per pin (log radius axis)");
    for (i, pin) in res.pins.iter().enumerate() {
        let y = top + 26.0 * i as f64;
        svg.text(8.0, y + 14.0, 12.0, &format!("pin |x| = {:.2}", pin.norm));
        // abundance band
        if let (Some(lo), Some(hi)) = (
            res.abundance["grid"]["r_lo"].as_f64(),
            res.abundance["grid"]["r_hi"].as_f64(),
        ) {
            let filled = res.abundance["pins"][i]["accepted"].as_u64().unwrap_or(0) > 0;
            let fill = if filled { "#3566c9" } else { "#c93535" };
            svg.rect(x(lo), y + 4.0, x(hi) - x(lo), 12.0, fill, 0.8);
        }
        // far band: green when clean
        let clean = pin.far_scan.accepted_past_floor == 0;
        let fill = if clean { "#2f9e44" } else { "#c92a2a" };
        svg.rect(
            x(pin.far_scan.r_lo),
            y + 4.0,
            x(pin.far_scan.r_hi) - x(pin.far_scan.r_lo),
            12.0,
            fill,
            0.45,
        );
        // threshold marker
        let tx = x(pin.threshold);
        svg.line(tx, y + 2.0, tx, y + 18.0, "#444444", 1.0);
    }
    svg.write(&artifact_path(cfg, "cone_demo.svg"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abundance_prime_clears_the_gap_bound() {
        let aperture = std::f64::consts::PI / 12288.0;
        let p = abundance_prime(aperture);
        assert!(p as f64 > TAU / aperture + 1.0);
        assert!(pinpat::primes::is_prime(p));
        // smallest such prime: the previous prime is at or below the bound
        assert!(TAU / p as f64 * 1.0 < aperture);
    }

    #[test]
    fn degenerate_exponents_are_config_errors() {
        let mut cfg = ExperimentConfig::defaults_for("cone-demo");
        cfg.slack_exponent = 12; // 2^12 = 2^11 * 2: collapse reaches alpha
        assert!(matches!(run(&cfg), Err(CliError::Config(_))));
    }

    #[test]
    fn quick_run_finds_emptiness_and_abundance() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ExperimentConfig::defaults_for("cone-demo");
        cfg.pins = 2;
        cfg.set_radius = 1.0;
        cfg.r_grid.count = 60;
        cfg.r_grid.hi = 2.0;
        cfg.mc_samples = 20_000;
        cfg.out_dir = dir.path().to_path_buf();
        let report = run(&cfg).unwrap();
        assert!(!report.any_fail(), "{:#?}", report.verdicts);
        assert_eq!(report.results.pins.len(), 2);
        for pin in &report.results.pins {
            assert!(pin.certified);
            assert_eq!(pin.far_scan.accepted_past_floor, 0);
            assert_eq!(pin.collapse_mc.violations, 0);
        }
        assert!(dir.path().join("cone_demo.svg").exists());
    }
}
