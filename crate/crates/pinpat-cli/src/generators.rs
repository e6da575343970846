//! Point set builders for the set-consuming commands: the thin-cone grid,
//! dense reference sets, seeded random unions, and point files. Every
//! generated set lives on the global lattice of the configured pitch, so
//! membership queries and densities follow one convention.

use std::collections::BTreeSet;
use std::path::Path;

use pinpat::cone::{cone_grid, ConeParameters};
use pinpat::geometry::{DiscretizedSet, Point};
use pinpat::seeding::stream_rng;
use rand::Rng;

use crate::config::{ExperimentConfig, SetSpec};
use crate::CliError;

/// Hard cap on generated points; hitting it is a configuration problem.
const MAX_POINTS: usize = 8_000_000;

/// Builds the configured set. `Ok(None)` means the set came out empty,
/// which only a point file can produce; the built-in generators always
/// contain at least the origin or a ball around one.
pub fn build_set(cfg: &ExperimentConfig) -> Result<Option<DiscretizedSet>, CliError> {
    let points = match cfg.set {
        SetSpec::Cone => return cone_set(cfg).map(Some),
        SetSpec::GridDisk => grid_disk(cfg)?,
        SetSpec::LatticeOfBalls => lattice_of_balls(cfg)?,
        SetSpec::RandomUnion => random_union(cfg)?,
        SetSpec::PointsFile => {
            let path = cfg.points_file.as_ref().expect("validated");
            let pts = read_point_file(path, cfg.d)?;
            if pts.is_empty() {
                return Ok(None);
            }
            pts
        }
    };
    if points.is_empty() {
        return Ok(None);
    }
    let set = DiscretizedSet::with_default_thickness(points, cfg.pitch)
        .map_err(|e| CliError::Config(format!("set construction failed: {e}")))?;
    Ok(Some(set))
}

/// The thin cone of the configured exponents, out to `set_radius`.
pub fn cone_set(cfg: &ExperimentConfig) -> Result<DiscretizedSet, CliError> {
    let params = cone_parameters(cfg)?;
    cone_grid(&params.cone(), cfg.pitch, cfg.set_radius)
        .map_err(|e| CliError::Config(format!("cone grid failed: {e}")))
}

/// Cone parameters tied to the laboratory pattern angle pi/3.
pub fn cone_parameters(cfg: &ExperimentConfig) -> Result<ConeParameters, CliError> {
    ConeParameters::new(
        std::f64::consts::FRAC_PI_3,
        cfg.shrink_exponent,
        cfg.slack_exponent,
        cfg.d,
    )
    .map_err(|e| CliError::Config(format!("invalid cone parameters: {e}")))
}

fn budget(points: usize) -> Result<(), CliError> {
    if points > MAX_POINTS {
        return Err(CliError::Config(format!(
            "generator would produce about {points} points (cap {MAX_POINTS}); \
             reduce set_radius or increase pitch"
        )));
    }
    Ok(())
}

fn grid_disk(cfg: &ExperimentConfig) -> Result<Vec<Point>, CliError> {
    let n = (cfg.set_radius / cfg.pitch).floor() as i64;
    let side = 2 * n + 1;
    budget((side as f64).powi(cfg.d as i32).min(usize::MAX as f64) as usize)?;
    let r_sq = cfg.set_radius * cfg.set_radius;
    let mut points = Vec::new();
    let mut idx = vec![-n; cfg.d];
    'walk: loop {
        let norm_sq: f64 = idx.iter().map(|&i| (i as f64 * cfg.pitch).powi(2)).sum();
        if norm_sq <= r_sq {
            points.push(lattice_point(&idx, cfg.pitch));
        }
        for axis in 0..cfg.d {
            idx[axis] += 1;
            if idx[axis] <= n {
                continue 'walk;
            }
            idx[axis] = -n;
        }
        break;
    }
    Ok(points)
}

fn lattice_point(idx: &[i64], pitch: f64) -> Point {
    Point::new(idx.iter().map(|&i| i as f64 * pitch).collect()).expect("finite lattice point")
}

/// Lattice indices of the global pitch grid within `radius` of `center`,
/// inserted into `acc` (a set, so overlapping balls do not duplicate).
fn fill_ball(acc: &mut BTreeSet<Vec<i64>>, center: &[f64], radius: f64, pitch: f64) {
    let d = center.len();
    let lo: Vec<i64> = center.iter().map(|c| ((c - radius) / pitch).ceil() as i64).collect();
    let hi: Vec<i64> = center.iter().map(|c| ((c + radius) / pitch).floor() as i64).collect();
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return;
    }
    let r_sq = radius * radius;
    let mut idx = lo.clone();
    'walk: loop {
        let dist_sq: f64 = idx
            .iter()
            .zip(center)
            .map(|(&i, c)| (i as f64 * pitch - c).powi(2))
            .sum();
        if dist_sq <= r_sq {
            acc.insert(idx.clone());
        }
        for axis in 0..d {
            idx[axis] += 1;
            if idx[axis] <= hi[axis] {
                continue 'walk;
            }
            idx[axis] = lo[axis];
        }
        break;
    }
}

fn lattice_of_balls(cfg: &ExperimentConfig) -> Result<Vec<Point>, CliError> {
    let per_ball = (2.0 * cfg.ball_radius / cfg.pitch + 1.0).powi(cfg.d as i32);
    let centers_side = (2.0 * cfg.set_radius / cfg.ball_spacing + 1.0).powi(cfg.d as i32);
    budget((per_ball * centers_side).min(usize::MAX as f64) as usize)?;
    let m = (cfg.set_radius / cfg.ball_spacing).floor() as i64;
    let r_sq = cfg.set_radius * cfg.set_radius;
    let mut acc = BTreeSet::new();
    let mut idx = vec![-m; cfg.d];
    'walk: loop {
        let center: Vec<f64> = idx.iter().map(|&i| i as f64 * cfg.ball_spacing).collect();
        if center.iter().map(|c| c * c).sum::<f64>() <= r_sq {
            fill_ball(&mut acc, &center, cfg.ball_radius, cfg.pitch);
        }
        for axis in 0..cfg.d {
            idx[axis] += 1;
            if idx[axis] <= m {
                continue 'walk;
            }
            idx[axis] = -m;
        }
        break;
    }
    Ok(acc.iter().map(|i| lattice_point(i, cfg.pitch)).collect())
}

fn random_union(cfg: &ExperimentConfig) -> Result<Vec<Point>, CliError> {
    let per_ball = (4.0 * cfg.ball_radius / cfg.pitch + 1.0).powi(cfg.d as i32);
    budget((per_ball * cfg.ball_count as f64).min(usize::MAX as f64) as usize)?;
    let mut rng = stream_rng(cfg.seed, 0x5e7);
    let mut acc = BTreeSet::new();
    for _ in 0..cfg.ball_count {
        let center: Vec<f64> = (0..cfg.d)
            .map(|_| (rng.gen::<f64>() * 2.0 - 1.0) * cfg.set_radius)
            .collect();
        let radius = cfg.ball_radius * (0.5 + 1.5 * rng.gen::<f64>());
        fill_ball(&mut acc, &center, radius, cfg.pitch);
    }
    Ok(acc.iter().map(|i| lattice_point(i, cfg.pitch)).collect())
}

/// One point per line, whitespace-separated decimal coordinates. The
/// dimension must match the configured `d`; blank lines are skipped.
pub fn read_point_file(path: &Path, d: usize) -> Result<Vec<Point>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let coords: Result<Vec<f64>, _> =
            line.split_whitespace().map(|t| t.parse::<f64>()).collect();
        let coords = coords.map_err(|e| {
            CliError::Config(format!("{}:{}: bad coordinate: {e}", path.display(), lineno + 1))
        })?;
        if coords.len() != d {
            return Err(CliError::Config(format!(
                "{}:{}: expected {} coordinates, got {}",
                path.display(),
                lineno + 1,
                d,
                coords.len()
            )));
        }
        let p = Point::new(coords).map_err(|e| {
            CliError::Config(format!("{}:{}: bad point: {e}", path.display(), lineno + 1))
        })?;
        points.push(p);
    }
    Ok(points)
}

/// Seeded sample of up to `count` distinct entries of `candidates`,
/// returned in draw order. Falls back to the full list when it is small.
pub fn sample_distinct(candidates: &[u32], count: usize, seed: u64, stream: u64) -> Vec<u32> {
    if candidates.len() <= count {
        return candidates.to_vec();
    }
    let mut rng = stream_rng(seed, stream);
    let mut seen = BTreeSet::new();
    let mut picks = Vec::with_capacity(count);
    while picks.len() < count {
        let i = rng.gen_range(0..candidates.len());
        if seen.insert(i) {
            picks.push(candidates[i]);
        }
    }
    picks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;

    #[test]
    fn grid_disk_is_symmetric_and_bounded() {
        let mut cfg = ExperimentConfig::defaults_for("pinned-scan");
        cfg.set_radius = 3.0;
        let set = build_set(&cfg).unwrap().unwrap();
        assert!(set.points().iter().all(|p| p.norm() <= 3.0 + 1e-12));
        assert!(set.contains(&Point::origin(2)));
        let n = set.len();
        // area estimate pi R^2 / h^2 = 113; lattice count close by
        assert!((90..140).contains(&n), "unexpected count {n}");
    }

    #[test]
    fn lattice_of_balls_does_not_duplicate_overlaps() {
        let mut cfg = ExperimentConfig::defaults_for("pinned-scan");
        cfg.set = SetSpec::LatticeOfBalls;
        cfg.set_radius = 4.0;
        cfg.ball_spacing = 1.5; // overlapping balls of radius 1
        let set = build_set(&cfg).unwrap().unwrap();
        for (i, p) in set.points().iter().enumerate() {
            for q in &set.points()[i + 1..] {
                assert!(p.dist(q) > 0.0, "duplicate point {:?}", p.coords());
            }
        }
    }

    #[test]
    fn random_union_is_seed_deterministic() {
        let mut cfg = ExperimentConfig::defaults_for("pinned-scan");
        cfg.set = SetSpec::RandomUnion;
        cfg.set_radius = 8.0;
        cfg.ball_count = 6;
        let a = build_set(&cfg).unwrap().unwrap();
        let b = build_set(&cfg).unwrap().unwrap();
        assert_eq!(a.points().len(), b.points().len());
        for (p, q) in a.points().iter().zip(b.points()) {
            assert_eq!(p.coords(), q.coords());
        }
        cfg.seed += 1;
        let c = build_set(&cfg).unwrap().unwrap();
        let same = a.len() == c.len()
            && a.points().iter().zip(c.points()).all(|(p, q)| p.coords() == q.coords());
        assert!(!same, "different seeds should move the balls");
    }

    #[test]
    fn point_file_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("pts.txt");
        std::fs::write(&good, "0 0\n1.5 -2.25\n\n3 4\n").unwrap();
        let pts = read_point_file(&good, 2).unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[1].coords(), &[1.5, -2.25]);
        assert!(read_point_file(&good, 3).is_err());
        let bad = dir.path().join("bad.txt");
        std::fs::write(&bad, "1 two\n").unwrap();
        assert!(read_point_file(&bad, 2).is_err());
    }

    #[test]
    fn empty_point_file_means_empty_set() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.txt");
        std::fs::write(&path, "\n\n").unwrap();
        let mut cfg = ExperimentConfig::defaults_for("pinned-scan");
        cfg.set = SetSpec::PointsFile;
        cfg.points_file = Some(path);
        assert!(build_set(&cfg).unwrap().is_none());
    }

    #[test]
    fn distinct_sampling_is_deterministic_and_distinct() {
        let candidates: Vec<u32> = (0..1000).collect();
        let a = sample_distinct(&candidates, 10, 42, 1);
        let b = sample_distinct(&candidates, 10, 42, 1);
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 10);
        assert_eq!(sample_distinct(&candidates[..5], 10, 42, 1), candidates[..5].to_vec());
    }
}
