//! Experiment runner for the workspace crates.
//!
//! [`run_file`] executes one JSON config and writes its CSV tables plus a
//! `manifest.json` into the output directory; [`verify::verify_all`] runs the
//! invariant suite behind `lab verify`.

pub mod config;
pub mod error;
pub mod experiments;
pub mod manifest;
pub mod table;
pub mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::Value;

pub use config::{Experiment, ExperimentConfig};
pub use error::{LabError, Result};
pub use experiments::{run_experiment, Outcome};
pub use manifest::{FileEntry, Manifest};
pub use verify::{verify_all, CheckResult, VerifyOptions, VerifyReport};

use manifest::{resolve_output, versions, write_files, write_manifest, RngInfo, RNG_CRATE, RNG_NAME};

#[derive(Clone, Debug)]
pub struct RunReport {
    pub dir: PathBuf,
    pub files: Vec<FileEntry>,
    pub summary: Vec<String>,
    pub failures: Vec<String>,
}

impl RunReport {
    /// `Err` with exit status 4 when any invariant was violated.
    pub fn status(&self) -> Result<()> {
        if self.failures.is_empty() {
            Ok(())
        } else {
            Err(LabError::Invariant(self.failures.join("; ")))
        }
    }
}

pub fn run_file(path: &Path, root: &Path) -> Result<RunReport> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    let (cfg, raw) = ExperimentConfig::parse(&text)?;
    run_config(&cfg, raw, root)
}

pub fn run_config(cfg: &ExperimentConfig, raw: Value, root: &Path) -> Result<RunReport> {
    let start = Instant::now();
    let outcome = run_experiment(cfg)?;
    let dir = resolve_output(root, cfg.output.as_deref(), cfg.experiment.name());
    let files = write_files(&dir, &outcome.files)?;
    let manifest = Manifest {
        experiment: cfg.experiment.name().to_string(),
        config: raw,
        versions: versions(),
        rng: RngInfo { name: RNG_NAME, source: RNG_CRATE, seed: cfg.seed },
        wall_time_seconds: start.elapsed().as_secs_f64(),
        files: files.clone(),
    };
    write_manifest(&dir, &manifest)?;
    Ok(RunReport { dir, files, summary: outcome.summary, failures: outcome.failures })
}

#[derive(Clone, Debug)]
pub struct VerifyRun {
    pub dir: PathBuf,
    pub report: VerifyReport,
}

/// Runs the invariant suite and writes `verify.csv` and its manifest into `dir`.
pub fn run_verify(opts: VerifyOptions, dir: &Path) -> Result<VerifyRun> {
    let start = Instant::now();
    let report = verify_all(opts)?;
    let table = report.table();
    let files = write_files(dir, &[(table.name().to_string(), table.to_bytes())])?;
    let manifest = Manifest {
        experiment: "verify".into(),
        config: serde_json::json!({ "depth": opts.depth, "seed": opts.seed, "inject_fault": opts.inject_fault }),
        versions: versions(),
        rng: RngInfo { name: RNG_NAME, source: RNG_CRATE, seed: Some(opts.seed) },
        wall_time_seconds: start.elapsed().as_secs_f64(),
        files,
    };
    write_manifest(dir, &manifest)?;
    Ok(VerifyRun { dir: dir.to_path_buf(), report })
}
