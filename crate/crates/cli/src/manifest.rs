//! Reproducibility sidecars: every output file gets a manifest recording
//! exactly what produced it.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    /// Bump on any schema change.
    pub format: u32,
    pub subcommand: String,
    pub arguments: Vec<String>,
    /// SHA-256 of the lattice-spec file, when one was read.
    pub spec_sha256: Option<String>,
    pub seed: Option<u64>,
    pub library_version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        RunManifest {
            format: 1,
            subcommand: subcommand.to_string(),
            arguments: std::env::args().skip(1).collect(),
            spec_sha256: None,
            seed: None,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: Vec::new(),
        }
    }

    pub fn record_spec(&mut self, bytes: &[u8]) {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        self.spec_sha256 = Some(format!("{:x}", hasher.finalize()));
    }

    /// Write `<path>.manifest.json` next to an output file.
    pub fn write_sidecar(&mut self, output: &Path) -> std::io::Result<()> {
        self.outputs.push(output.display().to_string());
        let sidecar = output.with_file_name(format!(
            "{}.manifest.json",
            output.file_name().map(|s| s.to_string_lossy()).unwrap_or_default()
        ));
        let body = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(sidecar, body + "\n")
    }
}
