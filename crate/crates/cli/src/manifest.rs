//! Run manifests: every subcommand emits one alongside its outputs, with
//! enough resolved state (parameters, input digests, seed) to reproduce
//! the run exactly.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub subcommand: &'static str,
    /// Fully resolved parameters (grids expanded, defaults applied).
    pub parameters: serde_json::Value,
    /// SHA-256 of every input file, keyed by the path as given.
    pub input_digests: BTreeMap<String, String>,
    /// RNG seed, for subcommands that draw random numbers.
    pub seed: Option<u64>,
    /// Where the seed came from: `flag`, `env`, or `default`.
    pub seed_source: Option<&'static str>,
    /// File names written next to this manifest.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &'static str, parameters: &impl Serialize) -> Result<Self> {
        Ok(Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            subcommand,
            parameters: serde_json::to_value(parameters).context("serializing parameters")?,
            input_digests: BTreeMap::new(),
            seed: None,
            seed_source: None,
            outputs: Vec::new(),
        })
    }

    pub fn digest_input(&mut self, path: &Path) -> Result<()> {
        self.input_digests.insert(path.display().to_string(), sha256_hex(path)?);
        Ok(())
    }

    pub fn set_seed(&mut self, seed: u64, source: &'static str) {
        self.seed = Some(seed);
        self.seed_source = Some(source);
    }

    /// Write `value` as pretty JSON under `out_dir/name` and record the
    /// file in the manifest's output list.
    pub fn write_output(
        &mut self,
        out_dir: &Path,
        name: &str,
        value: &impl Serialize,
    ) -> Result<PathBuf> {
        let path = out_dir.join(name);
        write_json(value, &path)?;
        self.outputs.push(name.to_string());
        Ok(path)
    }

    /// Record a file some other writer already produced under `out_dir`.
    pub fn record_output(&mut self, name: &str) {
        self.outputs.push(name.to_string());
    }

    /// Write the manifest itself as `<subcommand>_manifest.json`.
    pub fn write(&self, out_dir: &Path) -> Result<PathBuf> {
        let path = out_dir.join(format!("{}_manifest.json", self.subcommand));
        write_json(self, &path)?;
        Ok(path)
    }
}

pub fn write_json(value: &impl Serialize, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).context("serializing output")?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn sha256_hex(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("digesting {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_matches_known_vector() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x");
        fs::write(&path, b"abc").unwrap();
        assert_eq!(
            sha256_hex(&path).unwrap(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
