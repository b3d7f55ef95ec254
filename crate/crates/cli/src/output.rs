use std::io::Write;
use std::path::{Path, PathBuf};

use fracmech::IntegratorConfig;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Shortest decimal form that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn csv_writer<W: Write>(sink: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink)
}

/// Write one CSV table with a header row.
pub fn write_csv(sink: &mut Vec<u8>, header: &[&str], rows: &[Vec<f64>]) -> Result<(), CliError> {
    let mut w = csv_writer(sink);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| fmt_f64(x)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(sink: &mut Vec<u8>, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *sink, value)?;
    sink.push(b'\n');
    Ok(())
}

/// `dir/name.ext` becomes `dir/name.<suffix>`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    path.with_extension(suffix)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

pub const STDOUT: &str = "<stdout>";
pub const STDERR: &str = "<stderr>";

/// Record of one run, written next to its data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Fully resolved parameters; deserializes into the subcommand's
    /// parameter type.
    pub parameters: serde_json::Value,
    pub tolerances: IntegratorConfig,
    /// Every artifact the run produced, data first.
    pub outputs: Vec<String>,
    pub duration_seconds: f64,
    pub summary: serde_json::Value,
}
