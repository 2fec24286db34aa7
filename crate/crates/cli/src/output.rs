use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliResult;

pub const MANIFEST: &str = "manifest.json";

/// A file to write, named relative to the output directory.
#[derive(Clone, Debug)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn text(name: impl Into<String>, text: impl Into<String>) -> Self {
        Self { name: name.into(), bytes: text.into().into_bytes() }
    }
}

#[derive(Serialize, Deserialize)]
struct ManifestEntry {
    path: String,
    bytes: usize,
    sha256: String,
    spec_hash: String,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    tool: String,
    version: String,
    spec_hash: String,
    artifacts: Vec<ManifestEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Entries of an earlier run in `dir` whose files are still present and not rewritten now.
fn surviving_entries(dir: &Path, replaced: &BTreeMap<String, ManifestEntry>) -> Vec<ManifestEntry> {
    let Ok(text) = std::fs::read_to_string(dir.join(MANIFEST)) else {
        return Vec::new();
    };
    let Ok(old) = serde_json::from_str::<Manifest>(&text) else {
        return Vec::new();
    };
    old.artifacts.into_iter().filter(|e| !replaced.contains_key(&e.path) && dir.join(&e.path).is_file()).collect()
}

/// Writes every artifact and a manifest listing them in name order; returns the manifest path.
/// Artifacts from earlier runs into the same directory stay listed with their own spec hash.
pub fn write_results(records: &[Artifact], dir: &Path, spec_hash: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut entries = BTreeMap::new();
    for a in records {
        std::fs::write(dir.join(&a.name), &a.bytes)?;
        let entry = ManifestEntry {
            path: a.name.clone(),
            bytes: a.bytes.len(),
            sha256: sha256_hex(&a.bytes),
            spec_hash: spec_hash.to_string(),
        };
        entries.insert(a.name.clone(), entry);
    }
    for e in surviving_entries(dir, &entries) {
        entries.insert(e.path.clone(), e);
    }
    let manifest = Manifest {
        tool: "nlcf".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        spec_hash: spec_hash.into(),
        artifacts: entries.into_values().collect(),
    };
    let path = dir.join(MANIFEST);
    let mut text = serde_json::to_string_pretty(&manifest).expect("plain data serializes");
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}
