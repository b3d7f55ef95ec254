//! Command-line front end for the `fracmech` library.
//!
//! Each subcommand writes one data artifact (CSV, or JSON for `period`) to
//! `--out` or standard output, plus a JSON run manifest whenever a manifest
//! path is known. Exit codes: 0 success, 2 usage, 3 numerical failure or
//! failed consistency check, 4 physically unsuitable input.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::Parser;

pub use args::Cli;
pub use commands::{resolve, Params, Resolved};
pub use error::CliError;
pub use output::RunManifest;

/// Parse a full argument vector (program name first). Config files are not
/// read here; see [`config::merge`].
pub fn parse<I, T>(args: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(args)
}

/// Run the tool and return its exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config::merge(args) {
        Ok(a) => a,
        Err(e) => return report_error(&e, stderr),
    };
    let cli = match parse(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run_command(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => report_error(&e, stderr),
    }
}

fn report_error(e: &CliError, stderr: &mut dyn Write) -> i32 {
    let _ = writeln!(stderr, "error: {e}");
    e.exit_code()
}

fn run_command(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let start = Instant::now();
    let resolved = resolve(&cli.command)?;
    let report = commands::execute(&resolved)?;
    let outs = &resolved.outputs;

    let mut listed = Vec::new();
    match &outs.data {
        Some(path) => {
            output::write_file(path, &report.data)?;
            listed.push(path.display().to_string());
        }
        None => {
            stdout.write_all(&report.data)?;
            listed.push(output::STDOUT.to_string());
        }
    }

    if matches!(resolved.params, Params::Kepler(_)) {
        let mut bytes = Vec::new();
        output::write_json(&mut bytes, &report.summary)?;
        match &outs.summary {
            Some(path) => {
                output::write_file(path, &bytes)?;
                listed.push(path.display().to_string());
            }
            None => {
                stderr.write_all(&bytes)?;
                listed.push(output::STDERR.to_string());
            }
        }
    }

    if let Some(path) = &outs.manifest {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: resolved.params.name().to_string(),
            parameters: resolved.params.to_value(),
            tolerances: resolved.tolerances,
            outputs: listed,
            duration_seconds: start.elapsed().as_secs_f64(),
            summary: report.summary,
        };
        let mut bytes = Vec::new();
        output::write_json(&mut bytes, &manifest)?;
        output::write_file(path, &bytes)?;
    }

    match report.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
