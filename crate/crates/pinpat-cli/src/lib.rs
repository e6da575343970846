//! Command line driver for the pattern experiments. Every subcommand reads
//! one validated configuration, runs deterministically under a fixed rayon
//! pool, prints one verdict line per check, and writes a JSON report plus
//! command-specific CSV or SVG artifacts into the output directory.
//!
//! Exit codes: 0 when no check failed (warnings allowed), 1 when any check
//! failed, 2 for configuration errors.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod generators;
pub mod report;
pub mod svg;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{load_patch, threads_from_env, ConfigPatch, ExperimentConfig, SetSpec};
use report::{artifact_path, RunReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
}

#[derive(Debug, Parser)]
#[command(name = "pinpat", version, about = "Pattern experiments on discretized point sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact largest progression-free subsets of prime-order cyclic groups,
    /// against an analytic ceiling
    RmTable(CommonArgs),
    /// Search rotation-avoiding arc unions on the circle, verify the
    /// measure bound, the slicing identity and the slice bridge
    TorusVerify(CommonArgs),
    /// Thin-cone run: no pinned triangle copies past the per-pin threshold,
    /// abundant copies of a matched catalog pattern at small scales
    ConeDemo(CommonArgs),
    /// Construct and verify the rotated-pattern catalog at the selected
    /// modulus
    Catalog(CommonArgs),
    /// Scan catalog patterns for pinned copies across a generated set
    PinnedScan(CommonArgs),
    /// Quadrature identities for sphere area and ball volume, plus an
    /// empirical coarea split of one pinned scan
    SphereCheck(CommonArgs),
    /// Point-count density of a generated set and the densities of its
    /// pinned distance sets
    DistanceDensity(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::RmTable(_) => "rm-table",
            Command::TorusVerify(_) => "torus-verify",
            Command::ConeDemo(_) => "cone-demo",
            Command::Catalog(_) => "catalog",
            Command::PinnedScan(_) => "pinned-scan",
            Command::SphereCheck(_) => "sphere-check",
            Command::DistanceDensity(_) => "distance-density",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::RmTable(a)
            | Command::TorusVerify(a)
            | Command::ConeDemo(a)
            | Command::Catalog(a)
            | Command::PinnedScan(a)
            | Command::SphereCheck(a)
            | Command::DistanceDensity(a) => a,
        }
    }
}

/// Flags shared by every subcommand. Resolution order: built-in defaults,
/// then the `--config` file, then `PINPAT_THREADS`, then flags.
#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// JSON config file; flags override its entries
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Run seed; every random stream derives from it
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads, 0 means all cores
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory for the report and artifacts
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Run label echoed into the report
    #[arg(long)]
    pub experiment: Option<String>,
    /// Pattern size (number of points)
    #[arg(long)]
    pub k: Option<usize>,
    /// Ambient dimension
    #[arg(long)]
    pub d: Option<usize>,
    /// Density parameter of the catalog constants
    #[arg(long)]
    pub epsilon0: Option<f64>,
    /// Density constant of the ambient dimension
    #[arg(long)]
    pub c_d: Option<f64>,
    /// Density margin of the catalog constants
    #[arg(long)]
    pub eta: Option<f64>,
    /// Use this modulus instead of the selected one (must be prime)
    #[arg(long)]
    pub prime_override: Option<u64>,
    /// Lattice spacing of generated sets
    #[arg(long)]
    pub pitch: Option<f64>,
    /// Detection tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Scale grid lower end
    #[arg(long)]
    pub r_lo: Option<f64>,
    /// Scale grid upper end
    #[arg(long)]
    pub r_hi: Option<f64>,
    /// Number of scale grid points
    #[arg(long)]
    pub r_count: Option<usize>,
    /// Treat the scale grid as absolute lengths
    #[arg(long, conflicts_with = "r_relative")]
    pub r_absolute: bool,
    /// Scale the grid by the per-command base length
    #[arg(long)]
    pub r_relative: bool,
    /// Number of sampled pins
    #[arg(long)]
    pub pins: Option<usize>,
    /// Smallest cyclic order (rm-table) or search start
    #[arg(long)]
    pub n_min: Option<usize>,
    /// Largest cyclic order; torus-verify uses n_max+1 as the modulus
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Cone aperture divisor exponent
    #[arg(long)]
    pub shrink_exponent: Option<u32>,
    /// Collapse angle multiplier exponent
    #[arg(long)]
    pub slack_exponent: Option<u32>,
    /// Monte Carlo sample budget
    #[arg(long)]
    pub mc_samples: Option<u64>,
    /// Iterations per avoider search
    #[arg(long)]
    pub search_iters: Option<usize>,
    /// Number of seeded avoider searches
    #[arg(long)]
    pub searches: Option<usize>,
    /// Point set generator
    #[arg(long, value_enum)]
    pub set: Option<SetSpec>,
    /// Outer radius of the generated set
    #[arg(long)]
    pub set_radius: Option<f64>,
    /// Ball radius for ball-based generators
    #[arg(long)]
    pub ball_radius: Option<f64>,
    /// Ball center spacing for lattice-of-balls
    #[arg(long)]
    pub ball_spacing: Option<f64>,
    /// Ball count for random-union
    #[arg(long)]
    pub ball_count: Option<usize>,
    /// Points file (one point per line); implies --set points-file
    #[arg(long, value_name = "FILE")]
    pub points: Option<PathBuf>,
    /// Cap on catalog patterns scanned or emitted, 0 means all
    #[arg(long)]
    pub max_patterns: Option<usize>,
}

impl CommonArgs {
    fn to_patch(&self) -> ConfigPatch {
        ConfigPatch {
            experiment: self.experiment.clone(),
            k: self.k,
            d: self.d,
            epsilon0: self.epsilon0,
            c_d: self.c_d,
            eta: self.eta,
            prime_override: self.prime_override,
            pitch: self.pitch,
            tol: self.tol,
            r_grid: None, // grid fields are applied individually below
            pins: self.pins,
            seed: self.seed,
            threads: self.threads,
            out_dir: self.out.clone(),
            n_min: self.n_min,
            n_max: self.n_max,
            shrink_exponent: self.shrink_exponent,
            slack_exponent: self.slack_exponent,
            mc_samples: self.mc_samples,
            search_iters: self.search_iters,
            searches: self.searches,
            set: self.set,
            set_radius: self.set_radius,
            ball_radius: self.ball_radius,
            ball_spacing: self.ball_spacing,
            ball_count: self.ball_count,
            points_file: self.points.clone(),
            max_patterns: self.max_patterns,
        }
    }
}

/// Defaults, then config file, then the thread environment variable, then
/// flags; validated at the end.
pub fn resolve_config(name: &str, args: &CommonArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::defaults_for(name);
    if let Some(path) = &args.config {
        cfg.apply(&load_patch(path)?);
    }
    if args.threads.is_none() {
        if let Some(t) = threads_from_env()? {
            cfg.threads = t;
        }
    }
    cfg.apply(&args.to_patch());
    if let Some(lo) = args.r_lo {
        cfg.r_grid.lo = lo;
    }
    if let Some(hi) = args.r_hi {
        cfg.r_grid.hi = hi;
    }
    if let Some(count) = args.r_count {
        cfg.r_grid.count = count;
    }
    if args.r_absolute {
        cfg.r_grid.relative = false;
    }
    if args.r_relative {
        cfg.r_grid.relative = true;
    }
    if args.points.is_some() && args.set.is_none() {
        cfg.set = SetSpec::PointsFile;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn finish<R: serde::Serialize>(
    cfg: &ExperimentConfig,
    file: &str,
    report: RunReport<R>,
) -> Result<i32, CliError> {
    report.write_json(&artifact_path(cfg, file))?;
    report.announce();
    Ok(if report.any_fail() { 1 } else { 0 })
}

fn dispatch(name: &str, cfg: &ExperimentConfig) -> Result<i32, CliError> {
    match name {
        "rm-table" => finish(cfg, "rm_table.json", commands::rm_table::run(cfg)?),
        "torus-verify" => finish(cfg, "torus_verify.json", commands::torus_verify::run(cfg)?),
        "cone-demo" => finish(cfg, "cone_demo.json", commands::cone_demo::run(cfg)?),
        "catalog" => finish(cfg, "catalog.json", commands::catalog_cmd::run(cfg)?),
        "pinned-scan" => finish(cfg, "pinned_scan.json", commands::pinned_scan::run(cfg)?),
        "sphere-check" => finish(cfg, "sphere_check.json", commands::sphere_check::run(cfg)?),
        "distance-density" => {
            finish(cfg, "distance_density.json", commands::distance_density::run(cfg)?)
        }
        other => Err(CliError::Config(format!("unknown command {other}"))),
    }
}

/// Runs a parsed invocation inside its own thread pool.
pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    let name = cli.command.name();
    let cfg = resolve_config(name, cli.command.args())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?;
    pool.install(|| dispatch(name, &cfg))
}

/// Entry point: parse, run, map errors to the exit code contract.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}
