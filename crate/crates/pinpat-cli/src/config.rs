//! Experiment configuration: one JSON document, merged with per-field flag
//! overrides, validated once, and echoed into every report.
//!
//! Two fields are execution knobs rather than experiment parameters and are
//! deliberately left out of the echo: the thread count (results must be
//! byte-identical for any value of it) and the output directory (the report
//! should not describe where it happens to be stored).

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::CliError;

/// Scale grid: `count` evenly spaced values of `[lo, hi]`. With `relative`
/// set, `lo` and `hi` are multiples of a per-command base scale: the
/// per-pin emptiness-scan floor for `cone-demo`, and the set extent for
/// `pinned-scan`, `sphere-check` and `distance-density`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RGridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub relative: bool,
}

impl RGridSpec {
    /// The concrete grid against base scale `base` (ignored when absolute).
    pub fn materialize(&self, base: f64) -> Vec<f64> {
        let (lo, hi) = if self.relative {
            (self.lo * base, self.hi * base)
        } else {
            (self.lo, self.hi)
        };
        if self.count == 1 {
            return vec![lo];
        }
        let step = (hi - lo) / (self.count - 1) as f64;
        (0..self.count).map(|i| lo + step * i as f64).collect()
    }
}

/// Built-in point set generators for the set-consuming commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SetSpec {
    /// Thin-cone grid of the configured cone parameters.
    Cone,
    /// All lattice points of the configured pitch inside the ball of radius
    /// `set_radius`.
    GridDisk,
    /// Pitch-grid fillings of balls of radius `ball_radius` placed on a
    /// lattice of spacing `ball_spacing`, out to `set_radius`.
    LatticeOfBalls,
    /// Seeded union of `ball_count` random balls in the `set_radius` box.
    RandomUnion,
    /// Points loaded from `points_file`: one point per line,
    /// whitespace-separated decimal coordinates.
    PointsFile,
}

impl SetSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SetSpec::Cone => "cone",
            SetSpec::GridDisk => "grid-disk",
            SetSpec::LatticeOfBalls => "lattice-of-balls",
            SetSpec::RandomUnion => "random-union",
            SetSpec::PointsFile => "points-file",
        }
    }
}

/// Effective configuration of one run. Serialization order is the echo
/// order in reports; `threads` and `out_dir` are skipped on purpose (see
/// the module docs).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    /// Label echoed into reports; defaults to the subcommand name.
    pub experiment: String,
    /// Pattern order (number of points).
    pub k: usize,
    /// Ambient dimension.
    pub d: usize,
    /// Density increment the prime windows are tuned to, in (0, 1].
    pub epsilon0: f64,
    /// Ambient density constant; no canonical value, always explicit.
    pub c_d: f64,
    /// Density slack used by the scan summaries; must stay below
    /// `epsilon0 / (10 c_d)`.
    pub eta: f64,
    /// Forces the catalog modulus `n+1`, bypassing the theory window.
    /// Every report produced under an override says so.
    pub prime_override: Option<u64>,
    /// Grid pitch of generated point sets.
    pub pitch: f64,
    /// Detector tolerance.
    pub tol: f64,
    pub r_grid: RGridSpec,
    /// Number of sampled pins.
    pub pins: usize,
    pub seed: u64,
    #[serde(skip)]
    pub threads: usize,
    #[serde(skip)]
    pub out_dir: PathBuf,
    /// Smallest modulus of the exact-solver table.
    pub n_min: usize,
    /// Largest modulus of the exact-solver table.
    pub n_max: usize,
    /// Cone shrink exponent: the aperture is `alpha / (2^shrink · d)`.
    pub shrink_exponent: u32,
    /// Cone slack exponent: far angles collapse below `2^slack · aperture`.
    pub slack_exponent: u32,
    /// Monte Carlo pair budget for the angle-collapse stress.
    pub mc_samples: u64,
    /// Arc proposals per avoider search.
    pub search_iters: usize,
    /// Independent seeded avoider searches.
    pub searches: usize,
    pub set: SetSpec,
    /// Extent of the generated set; for `cone-demo` this is the radius of
    /// the region pins are sampled from (the grid itself extends far enough
    /// to cover every scanned scale).
    pub set_radius: f64,
    pub ball_radius: f64,
    pub ball_spacing: f64,
    pub ball_count: usize,
    pub points_file: Option<PathBuf>,
    /// Cap on the number of catalog patterns scanned or emitted; 0 = all.
    pub max_patterns: usize,
}

/// Partial configuration, as read from a JSON file or assembled from
/// command-line flags; unset fields keep the defaults of the subcommand.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigPatch {
    pub experiment: Option<String>,
    pub k: Option<usize>,
    pub d: Option<usize>,
    pub epsilon0: Option<f64>,
    pub c_d: Option<f64>,
    pub eta: Option<f64>,
    pub prime_override: Option<u64>,
    pub pitch: Option<f64>,
    pub tol: Option<f64>,
    pub r_grid: Option<RGridSpec>,
    pub pins: Option<usize>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub shrink_exponent: Option<u32>,
    pub slack_exponent: Option<u32>,
    pub mc_samples: Option<u64>,
    pub search_iters: Option<usize>,
    pub searches: Option<usize>,
    pub set: Option<SetSpec>,
    pub set_radius: Option<f64>,
    pub ball_radius: Option<f64>,
    pub ball_spacing: Option<f64>,
    pub ball_count: Option<usize>,
    pub points_file: Option<PathBuf>,
    pub max_patterns: Option<usize>,
}

impl ExperimentConfig {
    /// Defaults of a subcommand. Common base first, then the per-command
    /// adjustments that make the default run of each command meaningful.
    pub fn defaults_for(experiment: &str) -> Self {
        let mut c = ExperimentConfig {
            experiment: experiment.to_string(),
            k: 3,
            d: 2,
            epsilon0: 1.0,
            c_d: pinpat::config::DEFAULT_DENSITY_CONSTANT,
            eta: 0.05,
            prime_override: None,
            pitch: 0.5,
            tol: 1.5,
            r_grid: RGridSpec { lo: 1.0, hi: 10.0, count: 2000, relative: true },
            pins: 10,
            seed: 7,
            threads: 0,
            out_dir: PathBuf::from("out"),
            n_min: 4,
            n_max: 20,
            shrink_exponent: 11,
            slack_exponent: 10,
            mc_samples: 1_000_000,
            search_iters: 120,
            searches: 8,
            set: SetSpec::GridDisk,
            set_radius: 30.0,
            ball_radius: 1.0,
            ball_spacing: 5.0,
            ball_count: 40,
            points_file: None,
            max_patterns: 0,
        };
        match experiment {
            "torus-verify" => {
                // orbit scale n with n+1 prime
                c.n_max = 100;
            }
            "cone-demo" => {
                c.set = SetSpec::Cone;
                c.set_radius = 5.0;
            }
            "catalog" => {
                c.max_patterns = 16;
            }
            "pinned-scan" => {
                c.r_grid = RGridSpec { lo: 0.05, hi: 1.0, count: 128, relative: true };
            }
            "sphere-check" => {
                c.d = 4;
                c.pitch = 1.0;
                c.tol = 1.0;
                c.set_radius = 6.0;
                c.pins = 1;
                c.r_grid = RGridSpec { lo: 0.1, hi: 0.9, count: 64, relative: true };
            }
            "distance-density" => {
                c.r_grid = RGridSpec { lo: 0.05, hi: 1.0, count: 64, relative: true };
            }
            _ => {}
        }
        c
    }

    pub fn apply(&mut self, patch: &ConfigPatch) {
        macro_rules! take {
            ($($f:ident),*) => {
                $(if let Some(v) = &patch.$f { self.$f = v.clone(); })*
            };
        }
        take!(
            experiment, k, d, epsilon0, c_d, eta, pitch, tol, r_grid, pins, seed, threads,
            out_dir, n_min, n_max, shrink_exponent, slack_exponent, mc_samples, search_iters,
            searches, set, set_radius, ball_radius, ball_spacing, ball_count, max_patterns
        );
        if patch.prime_override.is_some() {
            self.prime_override = patch.prime_override;
        }
        if patch.points_file.is_some() {
            self.points_file = patch.points_file.clone();
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.k < 3 {
            return bad(format!("k must be at least 3, got {}", self.k));
        }
        if self.d < 2 {
            return bad(format!("d must be at least 2, got {}", self.d));
        }
        if !(self.epsilon0 > 0.0 && self.epsilon0 <= 1.0) {
            return bad(format!("epsilon0 must lie in (0, 1], got {}", self.epsilon0));
        }
        if !(self.c_d > 0.0) || !self.c_d.is_finite() {
            return bad(format!("c_d must be a positive real, got {}", self.c_d));
        }
        let eta_cap = self.epsilon0 / (10.0 * self.c_d);
        if !(self.eta > 0.0 && self.eta < eta_cap) {
            return bad(format!(
                "eta must lie in (0, epsilon0/(10 c_d)) = (0, {}), got {}",
                eta_cap, self.eta
            ));
        }
        if let Some(p) = self.prime_override {
            if !pinpat::primes::is_prime(p) {
                return bad(format!("prime_override {} is not prime", p));
            }
            if (p as usize) <= self.k + 1 {
                return bad(format!(
                    "prime_override {} leaves no room for order {} patterns",
                    p, self.k
                ));
            }
        }
        if !(self.pitch > 0.0) || !self.pitch.is_finite() {
            return bad(format!("pitch must be a positive real, got {}", self.pitch));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return bad(format!("tol must be a positive real, got {}", self.tol));
        }
        let g = &self.r_grid;
        if g.count == 0 || !(g.lo > 0.0) || !(g.hi >= g.lo) || !g.hi.is_finite() {
            return bad(format!(
                "r_grid needs 0 < lo <= hi and count >= 1, got lo={} hi={} count={}",
                g.lo, g.hi, g.count
            ));
        }
        if g.count > 1 && g.hi == g.lo {
            return bad("r_grid with count > 1 needs hi > lo".to_string());
        }
        if self.pins == 0 {
            return bad("pins must be at least 1".to_string());
        }
        if self.n_min < 2 || self.n_min > self.n_max {
            return bad(format!(
                "modulus range needs 2 <= n_min <= n_max, got {}..{}",
                self.n_min, self.n_max
            ));
        }
        if self.shrink_exponent == 0 || self.slack_exponent == 0 {
            return bad("shrink and slack exponents must be at least 1".to_string());
        }
        if self.mc_samples == 0 {
            return bad("mc_samples must be at least 1".to_string());
        }
        if self.search_iters == 0 || self.searches == 0 {
            return bad("search_iters and searches must be at least 1".to_string());
        }
        if !(self.set_radius > 0.0) || !self.set_radius.is_finite() {
            return bad(format!("set_radius must be a positive real, got {}", self.set_radius));
        }
        if !(self.ball_radius > 0.0) || !(self.ball_spacing > 0.0) || self.ball_count == 0 {
            return bad("lattice-of-balls needs positive ball_radius, ball_spacing, ball_count"
                .to_string());
        }
        if self.set == SetSpec::PointsFile && self.points_file.is_none() {
            return bad("set \"points-file\" needs points_file (or --points)".to_string());
        }
        Ok(())
    }
}

/// Reads and strictly parses a config file into a patch.
pub fn load_patch(path: &Path) -> Result<ConfigPatch, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
}

/// Thread count from the environment, used when no `--threads` flag is
/// given. Empty or absent means "not set".
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("PINPAT_THREADS") {
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Config(format!("PINPAT_THREADS must be an integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_pass_validation() {
        for cmd in [
            "rm-table",
            "torus-verify",
            "cone-demo",
            "catalog",
            "pinned-scan",
            "sphere-check",
            "distance-density",
        ] {
            let c = ExperimentConfig::defaults_for(cmd);
            c.validate().unwrap_or_else(|e| panic!("{cmd}: {e}"));
        }
    }

    #[test]
    fn patch_overrides_selected_fields_only() {
        let mut c = ExperimentConfig::defaults_for("pinned-scan");
        let patch: ConfigPatch =
            serde_json::from_str(r#"{"seed": 99, "pins": 3, "set": "cone"}"#).unwrap();
        c.apply(&patch);
        assert_eq!(c.seed, 99);
        assert_eq!(c.pins, 3);
        assert_eq!(c.set, SetSpec::Cone);
        assert_eq!(c.k, 3);
        assert_eq!(c.r_grid.count, 128);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let r: Result<ConfigPatch, _> = serde_json::from_str(r#"{"sed": 1}"#);
        assert!(r.is_err());
    }

    #[test]
    fn echo_skips_execution_knobs() {
        let c = ExperimentConfig::defaults_for("rm-table");
        let json = serde_json::to_string(&c).unwrap();
        assert!(!json.contains("threads"));
        assert!(!json.contains("out_dir"));
        assert!(json.contains("\"seed\":7"));
    }

    #[test]
    fn grid_materializes_relative_and_absolute() {
        let rel = RGridSpec { lo: 1.0, hi: 2.0, count: 3, relative: true };
        assert_eq!(rel.materialize(10.0), vec![10.0, 15.0, 20.0]);
        let abs = RGridSpec { lo: 4.0, hi: 8.0, count: 2, relative: false };
        assert_eq!(abs.materialize(999.0), vec![4.0, 8.0]);
        let single = RGridSpec { lo: 3.0, hi: 3.0, count: 1, relative: false };
        assert_eq!(single.materialize(1.0), vec![3.0]);
    }

    #[test]
    fn validation_rejects_bad_values() {
        let mut c = ExperimentConfig::defaults_for("rm-table");
        c.epsilon0 = 0.0;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::defaults_for("rm-table");
        c.prime_override = Some(100);
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::defaults_for("rm-table");
        c.eta = 1.0; // cap is 0.1 at the defaults
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::defaults_for("pinned-scan");
        c.set = SetSpec::PointsFile;
        assert!(c.validate().is_err());
    }
}
