//! Run reports: named verdicts with reproducers, a config echo, and JSON
//! emission with stable key order (struct declaration order; maps are
//! avoided in report types). Wall-clock timings go to stderr only, so that
//! equal configurations produce byte-identical files.

use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::ExperimentConfig;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "WARN")]
    Warn,
}

/// One named check. A failure carries a minimal reproducer: the offending
/// witness or sample, small enough to paste into a test.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproducer: Option<serde_json::Value>,
}

impl Verdict {
    pub fn pass(check: &str, detail: String) -> Self {
        Verdict { check: check.to_string(), status: Status::Pass, detail, reproducer: None }
    }

    pub fn warn(check: &str, detail: String) -> Self {
        Verdict { check: check.to_string(), status: Status::Warn, detail, reproducer: None }
    }

    pub fn fail(check: &str, detail: String, reproducer: serde_json::Value) -> Self {
        Verdict {
            check: check.to_string(),
            status: Status::Fail,
            detail,
            reproducer: Some(reproducer),
        }
    }

    /// Pass/fail on a condition, attaching the reproducer only on failure.
    pub fn on(check: &str, ok: bool, detail: String, reproducer: serde_json::Value) -> Self {
        if ok {
            Verdict::pass(check, detail)
        } else {
            Verdict::fail(check, detail, reproducer)
        }
    }
}

/// Everything one run emits, command-specific results included.
#[derive(Debug, Serialize)]
pub struct RunReport<R: Serialize> {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub results: R,
    pub verdicts: Vec<Verdict>,
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
}

impl<R: Serialize> RunReport<R> {
    pub fn new(cfg: &ExperimentConfig, results: R, verdicts: Vec<Verdict>) -> Self {
        RunReport {
            experiment: cfg.experiment.clone(),
            config: cfg.clone(),
            results,
            verdicts,
            timings: Vec::new(),
        }
    }

    pub fn any_fail(&self) -> bool {
        self.verdicts.iter().any(|v| v.status == Status::Fail)
    }

    /// Pretty JSON plus trailing newline; key order is declaration order.
    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Config(format!("report serialization failed: {e}")))?;
        s.push('\n');
        Ok(s)
    }

    pub fn write_json(&self, path: &Path) -> Result<(), CliError> {
        write_artifact(path, self.to_json()?.as_bytes())
    }

    /// One line per verdict on stdout, timings on stderr.
    pub fn announce(&self) {
        for v in &self.verdicts {
            let tag = match v.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Warn => "WARN",
            };
            println!("{tag} {}: {}", v.check, v.detail);
            if let Some(r) = &v.reproducer {
                println!("     reproducer: {r}");
            }
        }
        for (label, secs) in &self.timings {
            eprintln!("timing {label}: {secs:.3}s");
        }
    }
}

pub fn write_artifact(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

pub fn artifact_path(cfg: &ExperimentConfig, file: &str) -> PathBuf {
    cfg.out_dir.join(file)
}

/// Times a closure and records the duration under `label`.
pub fn timed<T>(timings: &mut Vec<(String, f64)>, label: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.push((label.to_string(), start.elapsed().as_secs_f64()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_json_is_stable_and_skips_timings() {
        let cfg = ExperimentConfig::defaults_for("rm-table");
        let mut report = RunReport::new(
            &cfg,
            serde_json::json!({"rows": 3}),
            vec![Verdict::pass("sanity", "ok".to_string())],
        );
        report.timings.push(("noise".to_string(), 1.23));
        let a = report.to_json().unwrap();
        report.timings.push(("more-noise".to_string(), 9.9));
        let b = report.to_json().unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("noise"));
        assert!(a.ends_with('\n'));
        let keys: Vec<usize> = ["\"experiment\"", "\"config\"", "\"results\"", "\"verdicts\""]
            .iter()
            .map(|k| a.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]), "envelope keys out of order");
    }

    #[test]
    fn failure_detection_and_reproducer() {
        let cfg = ExperimentConfig::defaults_for("rm-table");
        let v = Verdict::on("bound", false, "violated".to_string(), serde_json::json!({"n": 5}));
        let report = RunReport::new(&cfg, (), vec![v]);
        assert!(report.any_fail());
        assert!(report.to_json().unwrap().contains("\"n\": 5"));
    }
}
