//! Run manifests, one JSON line per run.
//!
//! A manifest fixes everything needed to reproduce a run: subcommand,
//! parameters, seed and code version, plus an SHA-256 digest of each file
//! the run wrote. `verify_outputs` recomputes the digests from disk, so a
//! manifest also certifies that artifacts were not edited after the fact.

use crate::{io_error, CliError, Result};
use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

/// Appended to, never rewritten; each run adds one line.
pub const MANIFEST_FILE: &str = "manifest.jsonl";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub subcommand: String,
    /// Every flag of the run, including defaulted ones, keyed by flag name.
    pub parameters: BTreeMap<String, Value>,
    /// Master seed; zero for fully deterministic subcommands.
    pub seed: u64,
    pub version: String,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<OutputRecord>,
}

impl RunManifest {
    pub fn to_line(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| CliError::Runtime(format!("manifest: {e}")))
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| CliError::Runtime(format!("manifest: {e}")))
    }

    /// Recomputes every output digest against the files under `dir`.
    pub fn verify_outputs(&self, dir: &Path) -> Result<()> {
        for output in &self.outputs {
            let path = dir.join(&output.file);
            let bytes = fs::read(&path).map_err(|e| io_error(&output.file, e))?;
            let got = sha256_hex(&bytes);
            if got != output.sha256 {
                return Err(CliError::Runtime(format!(
                    "digest mismatch for {}: manifest {} vs file {}",
                    output.file, output.sha256, got
                )));
            }
        }
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut hex = String::with_capacity(2 * digest.len());
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

/// Accumulates parameters and artifacts for one run and appends the
/// manifest line on `finish`.
pub struct RunWriter {
    dir: PathBuf,
    subcommand: String,
    parameters: BTreeMap<String, Value>,
    seed: u64,
    started: String,
    outputs: Vec<OutputRecord>,
}

impl RunWriter {
    pub fn create(dir: &Path, subcommand: &str, seed: u64) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| io_error("output dir", e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            subcommand: subcommand.to_string(),
            parameters: BTreeMap::new(),
            seed,
            started: timestamp(),
            outputs: Vec::new(),
        })
    }

    pub fn record(&mut self, flag: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("parameters are plain data");
        self.parameters.insert(flag.to_string(), value);
    }

    /// Writes one artifact and records its digest.
    pub fn artifact(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        fs::write(self.dir.join(name), bytes).map_err(|e| io_error(name, e))?;
        self.outputs.push(OutputRecord {
            file: name.to_string(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    pub fn finish(self) -> Result<RunManifest> {
        let manifest = RunManifest {
            subcommand: self.subcommand,
            parameters: self.parameters,
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started: self.started,
            finished: timestamp(),
            outputs: self.outputs,
        };
        let line = manifest.to_line()?;
        let mut file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.dir.join(MANIFEST_FILE))
            .map_err(|e| io_error(MANIFEST_FILE, e))?;
        writeln!(file, "{line}").map_err(|e| io_error(MANIFEST_FILE, e))?;
        Ok(manifest)
    }
}

fn timestamp() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Micros, true)
}
