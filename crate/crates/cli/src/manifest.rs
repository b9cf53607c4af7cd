use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Record of one run, written next to its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    /// File names relative to the manifest's directory.
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
    }
}

/// Where primary outputs go: files under a directory, or stdout.
pub struct Sink {
    dir: Option<PathBuf>,
    written: Vec<String>,
}

impl Sink {
    pub fn new(dir: Option<PathBuf>) -> Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).with_context(|| format!("creating output directory {}", d.display()))?;
        }
        Ok(Self { dir, written: Vec::new() })
    }

    pub fn has_dir(&self) -> bool {
        self.dir.is_some()
    }

    /// Writes `name` under the output directory. Without one, only the
    /// outputs flagged `to_stdout` are printed.
    pub fn emit(&mut self, name: &str, to_stdout: bool, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
        match &self.dir {
            Some(d) => {
                let path = d.join(name);
                let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                let mut w = std::io::BufWriter::new(file);
                body(&mut w).with_context(|| format!("writing {}", path.display()))?;
                w.flush()?;
                self.written.push(name.to_string());
            }
            None if to_stdout => {
                let stdout = std::io::stdout();
                let mut w = std::io::BufWriter::new(stdout.lock());
                body(&mut w)?;
                w.flush()?;
            }
            None => {}
        }
        Ok(())
    }

    pub fn finish(self, subcommand: &str, parameters: serde_json::Value, seed: Option<u64>, seconds: f64) -> Result<()> {
        let Some(dir) = self.dir else {
            return Ok(());
        };
        let m = RunManifest {
            subcommand: subcommand.to_string(),
            parameters,
            seed,
            version: faplab_core::VERSION.to_string(),
            outputs: self.written,
            wall_clock_seconds: seconds,
        };
        let path = dir.join(MANIFEST_FILE);
        fs::write(&path, serde_json::to_string_pretty(&m)? + "\n").with_context(|| format!("writing {}", path.display()))
    }
}
