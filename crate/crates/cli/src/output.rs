//! Artifact writing and the run manifest.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::figure::{render_svg, FigureBundle};
use crate::RunError;

pub const MANIFEST: &str = "manifest.txt";
pub const RESOLVED_CONFIG: &str = "run_config.toml";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Artifact {
    /// Relative to the output directory.
    pub path: PathBuf,
    pub sha256: String,
}

/// Collects everything a run writes so the manifest can list it.
pub struct OutputSet {
    dir: PathBuf,
    config_hash: String,
    artifacts: Vec<Artifact>,
}

impl OutputSet {
    pub fn create(dir: &Path, config_hash: String) -> Result<Self, RunError> {
        std::fs::create_dir_all(dir).map_err(|source| RunError::Io {
            path: dir.to_owned(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_owned(),
            config_hash,
            artifacts: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), RunError> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|source| RunError::Io { path, source })?;
        self.artifacts.push(Artifact {
            path: PathBuf::from(name),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
        Ok(())
    }

    /// Writes through an `io::Write` callback into memory first.
    pub fn write_with(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    ) -> Result<(), RunError> {
        let mut buf = Vec::new();
        f(&mut buf).map_err(|source| RunError::Io {
            path: self.dir.join(name),
            source,
        })?;
        self.write(name, &buf)
    }

    pub fn write_svg(&mut self, name: &str, bundle: &FigureBundle) -> Result<(), RunError> {
        let svg = render_svg(bundle)?;
        self.write(name, svg.as_bytes())
    }

    /// Writes the manifest (one `path sha256 config_hash` line per artifact,
    /// sorted by path) and returns the artifact list. The manifest does not
    /// list itself.
    pub fn finish(self) -> Result<Vec<Artifact>, RunError> {
        let mut artifacts = self.artifacts;
        artifacts.sort_by(|a, b| a.path.cmp(&b.path));
        let mut text = String::new();
        for a in &artifacts {
            text.push_str(&format!("{} {} {}\n", a.path.display(), a.sha256, self.config_hash));
        }
        let path = self.dir.join(MANIFEST);
        std::fs::write(&path, text).map_err(|source| RunError::Io { path, source })?;
        Ok(artifacts)
    }
}

/// Parses a manifest back into `(path, sha256, config_hash)` triples.
pub fn read_manifest(dir: &Path) -> std::io::Result<Vec<(String, String, String)>> {
    let text = std::fs::read_to_string(dir.join(MANIFEST))?;
    Ok(text
        .lines()
        .filter_map(|l| {
            let mut it = l.split(' ');
            Some((it.next()?.to_owned(), it.next()?.to_owned(), it.next()?.to_owned()))
        })
        .collect())
}
