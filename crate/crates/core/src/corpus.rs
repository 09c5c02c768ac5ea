//! The fixture corpus: a checksummed manifest of every reference file
//! shipped under `fixtures/`, with an origin note saying how each one
//! was produced and how it was cross-checked.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed manifest: {0}")]
    Json(#[from] serde_json::Error),
    #[error("no manifest at {0}")]
    MissingManifest(PathBuf),
}

/// Where a fixture came from.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Origin {
    /// "formula" for files regenerated from closed-form definitions,
    /// "textbook" for standard reference objects, "derived" for frozen
    /// computed output.
    pub kind: String,
    /// How the content was obtained and independently checked.
    pub note: String,
}

pub const ORIGIN_KINDS: [&str; 3] = ["formula", "textbook", "derived"];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FixtureEntry {
    /// Path relative to the fixtures root, with forward slashes.
    pub path: String,
    /// File format name, e.g. "fan" or "gnw-system".
    pub format: String,
    pub origin: Origin,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FixtureManifest {
    pub entries: Vec<FixtureEntry>,
}

impl FixtureManifest {
    pub fn load(root: &Path) -> Result<FixtureManifest, CorpusError> {
        let path = root.join("manifest.json");
        if !path.is_file() {
            return Err(CorpusError::MissingManifest(path));
        }
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// What a manifest verification found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestReport {
    pub checked: usize,
    /// Missing, modified, ill-described, or unlisted files.
    pub problems: Vec<String>,
    pub warning: Option<String>,
}

impl ManifestReport {
    pub fn pass(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Verifies the manifest under `root`: every entry present with a
/// matching checksum and a well-formed origin, and every file under
/// the tree listed.  An empty manifest over an empty tree passes
/// vacuously, with a warning.
pub fn verify_manifest(root: &Path) -> Result<ManifestReport, CorpusError> {
    let manifest = FixtureManifest::load(root)?;
    let mut problems = Vec::new();
    let mut listed = BTreeSet::new();
    for entry in &manifest.entries {
        if !listed.insert(entry.path.clone()) {
            problems.push(format!("duplicate manifest entry: {}", entry.path));
            continue;
        }
        if entry.path.split('/').any(|part| part == ".." || part.is_empty()) {
            problems.push(format!("bad fixture path: {}", entry.path));
            continue;
        }
        if !ORIGIN_KINDS.contains(&entry.origin.kind.as_str()) {
            problems.push(format!(
                "unknown origin kind \"{}\" for {}",
                entry.origin.kind, entry.path
            ));
        }
        let file = root.join(&entry.path);
        let Ok(bytes) = fs::read(&file) else {
            problems.push(format!("missing fixture: {}", entry.path));
            continue;
        };
        let digest = sha256_hex(&bytes);
        if digest != entry.sha256 {
            problems.push(format!(
                "modified fixture: {} (sha256 {} != {})",
                entry.path, digest, entry.sha256
            ));
        }
    }

    let mut on_disk = BTreeSet::new();
    walk(root, root, &mut on_disk)?;
    on_disk.remove("manifest.json");
    for orphan in on_disk.difference(&listed) {
        problems.push(format!("unlisted file: {orphan}"));
    }

    let warning = if manifest.entries.is_empty() {
        Some("manifest lists no fixtures".to_string())
    } else {
        None
    };
    Ok(ManifestReport { checked: manifest.entries.len(), problems, warning })
}

fn walk(root: &Path, dir: &Path, out: &mut BTreeSet<String>) -> Result<(), CorpusError> {
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            walk(root, &path, out)?;
        } else {
            let rel = path
                .strip_prefix(root)
                .expect("walk stays under the root")
                .components()
                .map(|c| c.as_os_str().to_string_lossy())
                .collect::<Vec<_>>()
                .join("/");
            out.insert(rel);
        }
    }
    Ok(())
}
