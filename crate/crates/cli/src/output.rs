//! Output directory handling: atomic writes and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Serialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

impl InputFile {
    pub fn hash(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(InputFile {
            path: path.display().to_string(),
            sha256: hex(&Sha256::digest(&bytes)),
        })
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Everything needed to reproduce and audit one run. No timestamps, so two
/// runs with the same inputs produce the same bytes.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: Vec<InputFile>,
    pub config: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trade_date: Option<String>,
    pub counts: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cluster_boundary_years: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub treasury: Option<TreasuryInfo>,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct TreasuryInfo {
    pub curve_date: String,
    pub gap_filled: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filled_from: Option<[String; 2]>,
}

impl Manifest {
    pub fn new(command: &'static str, config: Value) -> Self {
        Manifest {
            tool: "parity-curve",
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs: Vec::new(),
            config,
            trade_date: None,
            counts: BTreeMap::new(),
            cluster_boundary_years: None,
            treasury: None,
            outputs: Vec::new(),
            warnings: Vec::new(),
        }
    }
}

/// Writes files into one directory, each via a temporary file and rename.
pub struct OutDir {
    dir: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(OutDir {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        let tmp = self.dir.join(format!(".{name}.tmp"));
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
        drop(f);
        fs::rename(&tmp, &path).with_context(|| format!("renaming to {}", path.display()))?;
        if name != MANIFEST_FILE {
            self.written.push(name.to_string());
        }
        Ok(())
    }

    /// Renders into a buffer with `f`, then writes it atomically.
    pub fn write_with<F, E>(&mut self, name: &str, f: F) -> Result<()>
    where
        F: FnOnce(&mut Vec<u8>) -> std::result::Result<(), E>,
        E: std::error::Error + Send + Sync + 'static,
    {
        let mut buf = Vec::new();
        f(&mut buf).with_context(|| format!("rendering {name}"))?;
        self.write_bytes(name, &buf)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut buf = serde_json::to_vec_pretty(value)?;
        buf.push(b'\n');
        self.write_bytes(name, &buf)
    }

    pub fn finish(mut self, mut manifest: Manifest) -> Result<()> {
        manifest.outputs = std::mem::take(&mut self.written);
        self.write_json(MANIFEST_FILE, &manifest)
    }
}
