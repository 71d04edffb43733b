//! Output directories and the run manifest.
//!
//! Every file written by a run is listed in `manifest.json` with its size and
//! SHA-256 digest. Wall time is recorded only in the manifest, so CSV files
//! depend on nothing but the config and seed.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};

/// Environment variable naming the directory that relative output paths resolve against.
pub const OUTPUT_ROOT_VAR: &str = "LAB_OUTPUT_ROOT";
pub const DEFAULT_OUTPUT_ROOT: &str = "lab-output";
pub const MANIFEST_NAME: &str = "manifest.json";
pub const RNG_NAME: &str = "SplitMix64";
pub const RNG_CRATE: &str = "rand_xoshiro 0.6";

pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_ROOT))
}

pub fn resolve_output(root: &Path, output: Option<&str>, default: &str) -> PathBuf {
    let rel = Path::new(output.unwrap_or(default));
    if rel.is_absolute() {
        rel.to_path_buf()
    } else {
        root.join(rel)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FileEntry {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RngInfo {
    pub name: &'static str,
    pub source: &'static str,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub experiment: String,
    pub config: Value,
    pub versions: BTreeMap<String, String>,
    pub rng: RngInfo,
    pub wall_time_seconds: f64,
    pub files: Vec<FileEntry>,
}

pub fn versions() -> BTreeMap<String, String> {
    [
        ("cli-harness", env!("CARGO_PKG_VERSION")),
        ("laakso-core", laakso_core::VERSION),
        ("shortcut-metric", shortcut_metric::VERSION),
        ("lipschitz-maps", lipschitz_maps::VERSION),
        ("harmonic-energy", harmonic_energy::VERSION),
        ("diamond-graphs", diamond_graphs::VERSION),
        ("lipschitz-light", lipschitz_light::VERSION),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes each `(name, bytes)` into `dir` and returns the manifest entries in input order.
pub fn write_files(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<Vec<FileEntry>> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let mut entries = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| LabError::io(&path, e))?;
        entries.push(FileEntry { name: name.clone(), bytes: bytes.len() as u64, sha256: sha256_hex(bytes) });
    }
    Ok(entries)
}

pub fn write_manifest(dir: &Path, manifest: &Manifest) -> Result<PathBuf> {
    let path = dir.join(MANIFEST_NAME);
    let mut text = serde_json::to_string_pretty(manifest).map_err(|e| LabError::Invariant(e.to_string()))?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| LabError::io(&path, e))?;
    Ok(path)
}
