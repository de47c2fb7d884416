//! Output files: CSV series, JSON reports and the run manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::{OutputFormat, RunConfig};
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Full-precision scientific notation (17 significant digits).
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::io(path, e.into())
}

pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(row.into_iter().collect::<Vec<_>>()).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(format!("json: {e}")))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Provenance record written next to every set of outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    /// The fully materialized configuration, as TOML.
    pub config: String,
    pub files: Vec<String>,
    pub wall_time_seconds: f64,
}

/// Collects the files of one command and finishes with the manifest.
pub struct OutputSet {
    dir: PathBuf,
    formats: Vec<OutputFormat>,
    files: Vec<String>,
    started: Instant,
}

impl OutputSet {
    pub fn create(dir: impl Into<PathBuf>, formats: &[OutputFormat]) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(OutputSet { dir, formats: formats.to_vec(), files: Vec::new(), started: Instant::now() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn wants(&self, f: OutputFormat) -> bool {
        self.formats.contains(&f)
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    pub fn csv<I, R>(&mut self, name: &str, header: &[&str], rows: I) -> Result<()>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        write_csv(&self.dir.join(name), header, rows)?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// Creates `name` in the output directory for a caller-driven writer.
    pub fn create_file(&mut self, name: &str) -> Result<std::io::BufWriter<std::fs::File>> {
        let path = self.dir.join(name);
        let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(std::io::BufWriter::new(file))
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        write_json(&self.dir.join(name), value)?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// Writes `manifest.json` and returns it.
    pub fn finish(self, command: &str, config: &RunConfig) -> Result<Manifest> {
        let manifest = Manifest {
            tool: "corrector-lab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed: config.ensemble.seed,
            config: config.to_toml()?,
            files: self.files,
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
        };
        write_json(&self.dir.join(MANIFEST_FILE), &manifest)?;
        Ok(manifest)
    }
}
