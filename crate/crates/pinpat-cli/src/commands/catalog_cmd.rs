//! Pattern catalog emission: the selected modulus with its theory window,
//! the tower-valued constants behind it, and the unit-circle patterns
//! themselves, each re-verified against its defining construction.

use pinpat::catalog::{catalog_pattern, select_prime, theorem_constants, CatalogSpec, PrimeOptions};
use serde::Serialize;
use serde_json::json;

use super::{config_err, effective_prime, tower_json, window_json};
use crate::config::ExperimentConfig;
use crate::report::{timed, RunReport, Verdict};
use crate::CliError;

const CONSTRUCTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Serialize)]
pub struct PatternJson {
    pub index: usize,
    /// Angular gap between consecutive unit points, `2π·index/(n+1)`.
    pub gap: f64,
    pub min_pairwise_distance: f64,
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize)]
pub struct CatalogResults {
    pub selection: serde_json::Value,
    pub constants: serde_json::Value,
    pub n: usize,
    pub patterns_total: usize,
    pub patterns_verified: usize,
    pub patterns_emitted: usize,
    pub max_construction_defect: f64,
    pub patterns: Vec<PatternJson>,
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunReport<CatalogResults>, CliError> {
    let mut timings = Vec::new();

    let constants = theorem_constants(cfg.k, cfg.d, cfg.epsilon0, cfg.c_d).map_err(config_err)?;
    let sel = select_prime(cfg.k, cfg.d, cfg.epsilon0, cfg.c_d, &PrimeOptions::default())
        .map_err(config_err)?;
    let (prime, in_window, overridden) = effective_prime(cfg, &sel);
    let n = (prime - 1) as usize;
    let spec = CatalogSpec::new(cfg.k, cfg.d, n, cfg.c_d, cfg.epsilon0).map_err(config_err)?;

    // verify every pattern against the construction; emit up to the cap
    let emitted_cap = if cfg.max_patterns == 0 { n } else { cfg.max_patterns.min(n) };
    let mut patterns = Vec::with_capacity(emitted_cap);
    let mut max_defect = 0.0f64;
    let mut defect_case: Option<serde_json::Value> = None;
    let gap_unit = std::f64::consts::TAU / (n as f64 + 1.0);
    timed(&mut timings, "pattern-verification", || -> Result<(), CliError> {
        for i in 1..=n {
            let v = catalog_pattern(&spec, i).map_err(config_err)?;
            let pts = v.points();
            let gap = gap_unit * i as f64;
            // expected geometry: origin, then unit points at angles j·gap in
            // the first coordinate plane
            let mut defect = pts[0].norm();
            for (j, p) in pts[1..].iter().enumerate() {
                let angle = gap * j as f64;
                let dx = p.coords()[0] - angle.cos();
                let dy = p.coords()[1] - angle.sin();
                let tail: f64 = p.coords()[2..].iter().map(|c| c * c).sum();
                defect = defect.max((dx * dx + dy * dy + tail).sqrt());
            }
            if defect > max_defect {
                max_defect = defect;
            }
            if defect > CONSTRUCTION_TOLERANCE {
                defect_case.get_or_insert(json!({"index": i, "defect": defect}));
            }
            if v.len() != cfg.k || v.min_pairwise_distance() <= 0.0 {
                defect_case.get_or_insert(json!({
                    "index": i, "len": v.len(),
                    "min_pairwise_distance": v.min_pairwise_distance(),
                }));
            }
            if i <= emitted_cap {
                patterns.push(PatternJson {
                    index: i,
                    gap,
                    min_pairwise_distance: v.min_pairwise_distance(),
                    points: pts.iter().map(|p| p.coords().to_vec()).collect(),
                });
            }
        }
        Ok(())
    })?;

    let selection = json!({
        "prime": prime,
        "theory_prime": sel.prime,
        "window": window_json(&sel.window),
        "in_theory_window": in_window,
        "overridden": overridden,
    });
    let constants_json = json!({
        "k": constants.k,
        "c_exponent": constants.c_exponent,
        "ln_epsilon": tower_json(&constants.ln_epsilon),
        "epsilon": if constants.ln_epsilon.is_representable() {
            json!(constants.epsilon())
        } else {
            serde_json::Value::Null
        },
        "m_d": constants.m_d,
        "ln_epsilon_tilde": tower_json(&constants.ln_epsilon_tilde),
    });

    let window_verdict = if overridden {
        Verdict::warn(
            "modulus-in-theory-window",
            format!(
                "modulus override {} in effect (theory choice was {}, in-window: {})",
                prime, sel.prime, in_window
            ),
        )
    } else if in_window {
        Verdict::pass(
            "modulus-in-theory-window",
            format!("prime {} sits inside the theory window", prime),
        )
    } else {
        Verdict::warn(
            "modulus-in-theory-window",
            format!(
                "theory window infeasible at order {}; demo-scale prime {} substituted",
                cfg.k, prime
            ),
        )
    };
    let verdicts = vec![
        window_verdict,
        Verdict::on(
            "patterns-match-construction",
            defect_case.is_none(),
            format!(
                "all {} patterns verified (origin pin, unit legs, consecutive gaps), max defect {:.2e}",
                n, max_defect
            ),
            defect_case.unwrap_or_default(),
        ),
        Verdict::on(
            "modulus-admits-order",
            n >= cfg.k,
            format!("n = {} supports order {} patterns", n, cfg.k),
            json!({"n": n, "k": cfg.k}),
        ),
    ];

    let results = CatalogResults {
        selection,
        constants: constants_json,
        n,
        patterns_total: n,
        patterns_verified: n,
        patterns_emitted: patterns.len(),
        max_construction_defect: max_defect,
        patterns,
    };
    let mut report = RunReport::new(cfg, results, verdicts);
    report.timings = timings;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_catalog_is_in_window_and_verified() {
        let cfg = ExperimentConfig::defaults_for("catalog");
        let report = run(&cfg).unwrap();
        assert!(!report.any_fail());
        // k=3, c_d=1, eps0=1: window (20π, 60π) contains 67
        assert_eq!(report.results.selection["prime"], 67);
        assert_eq!(report.results.n, 66);
        assert_eq!(report.results.patterns_emitted, 16);
        assert!(report.results.max_construction_defect < 1e-12);
        assert!(report
            .verdicts
            .iter()
            .any(|v| v.check == "modulus-in-theory-window"
                && v.status == crate::report::Status::Pass));
    }

    #[test]
    fn override_is_flagged_as_warn() {
        let mut cfg = ExperimentConfig::defaults_for("catalog");
        cfg.prime_override = Some(11);
        cfg.max_patterns = 5;
        let report = run(&cfg).unwrap();
        assert!(!report.any_fail());
        assert_eq!(report.results.selection["overridden"], true);
        assert_eq!(report.results.n, 10);
        let v = report
            .verdicts
            .iter()
            .find(|v| v.check == "modulus-in-theory-window")
            .unwrap();
        assert_eq!(v.status, crate::report::Status::Warn);
    }

    #[test]
    fn higher_order_gets_demo_scale_with_tower_constants() {
        let mut cfg = ExperimentConfig::defaults_for("catalog");
        cfg.k = 4;
        cfg.max_patterns = 3;
        let report = run(&cfg).unwrap();
        assert!(!report.any_fail());
        assert_eq!(report.results.selection["in_theory_window"], false);
        assert_eq!(report.results.selection["window"]["kind"], "astronomical");
        assert_eq!(report.results.constants["epsilon"], serde_json::Value::Null);
        let v = report
            .verdicts
            .iter()
            .find(|v| v.check == "modulus-in-theory-window")
            .unwrap();
        assert_eq!(v.status, crate::report::Status::Warn);
    }
}
