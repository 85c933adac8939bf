//! Output directory, artifact bookkeeping and the run manifest.
//!
//! Layout under the output directory:
//!
//! ```text
//! config.snapshot   canonical configuration
//! manifest.json     written last, atomically
//! tables/*.csv
//! reports/*.json
//! fields/*.bin
//! ```

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Formats;

pub const MANIFEST: &str = "manifest.json";
pub const CONFIG_SNAPSHOT: &str = "config.snapshot";

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    pub name: String,
    pub wall_clock_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub verb: String,
    pub config_sha256: String,
    pub exit_code: i32,
    pub finished_unix_s: u64,
    pub stages: Vec<Stage>,
    pub artifacts: Vec<Artifact>,
}

/// Writes artifacts under one output directory and remembers what it wrote.
pub struct Emitter {
    root: PathBuf,
    created_root: bool,
    formats: Formats,
    artifacts: Vec<Artifact>,
    stages: Vec<Stage>,
}

impl Emitter {
    pub fn create(root: &Path, formats: Formats) -> io::Result<Self> {
        let created_root = !root.exists();
        fs::create_dir_all(root)?;
        Ok(Emitter {
            root: root.to_path_buf(),
            created_root,
            formats,
            artifacts: Vec::new(),
            stages: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn artifacts(&self) -> &[Artifact] {
        &self.artifacts
    }

    /// Writes `bytes` to `rel` and records its checksum. Returns the digest.
    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> io::Result<String> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, bytes)?;
        let sha256 = sha256_hex(bytes);
        self.artifacts.retain(|a| a.path != rel);
        self.artifacts.push(Artifact {
            path: rel.to_string(),
            sha256: sha256.clone(),
            bytes: bytes.len() as u64,
        });
        Ok(sha256)
    }

    pub fn csv(&mut self, rel: &str, fill: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> io::Result<()> {
        if self.formats.csv {
            let mut buf = Vec::new();
            fill(&mut buf)?;
            self.write(rel, &buf)?;
        }
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, rel: &str, value: &T) -> io::Result<()> {
        if self.formats.json {
            let mut buf = serde_json::to_vec_pretty(value).map_err(io::Error::other)?;
            buf.push(b'\n');
            self.write(rel, &buf)?;
        }
        Ok(())
    }

    pub fn bin(&mut self, rel: &str, bytes: &[u8]) -> io::Result<Option<String>> {
        if self.formats.bin {
            self.write(rel, bytes).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn stage<T>(&mut self, name: &str, work: impl FnOnce(&mut Self) -> T) -> T {
        let start = Instant::now();
        let out = work(self);
        self.stages.push(Stage {
            name: name.to_string(),
            wall_clock_s: start.elapsed().as_secs_f64(),
        });
        out
    }

    /// Removes everything this emitter wrote, and the directory if it made it.
    pub fn discard(self) {
        for a in &self.artifacts {
            let _ = fs::remove_file(self.root.join(&a.path));
        }
        for sub in ["tables", "reports", "fields"] {
            let _ = fs::remove_dir(self.root.join(sub));
        }
        if self.created_root {
            let _ = fs::remove_dir_all(&self.root);
        }
    }

    /// Writes the manifest through a temporary file and a rename.
    pub fn finish(self, verb: &str, config_sha256: String, exit_code: i32) -> io::Result<RunManifest> {
        let mut artifacts = self.artifacts;
        artifacts.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            verb: verb.to_string(),
            config_sha256,
            exit_code,
            finished_unix_s: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            stages: self.stages,
            artifacts,
        };
        let mut buf = serde_json::to_vec_pretty(&manifest).map_err(io::Error::other)?;
        buf.push(b'\n');
        let tmp = self.root.join(format!(".{MANIFEST}.tmp"));
        fs::write(&tmp, &buf)?;
        fs::rename(&tmp, self.root.join(MANIFEST))?;
        Ok(manifest)
    }
}
