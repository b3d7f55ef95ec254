//! Plain `key = value` config files.
//!
//! Entries are turned into `--key value` flags for the chosen subcommand and
//! appended to the command line, skipping any whose flag (or an alias, or a
//! conflicting flag) is already present. Keys may use `-` or `_`; list values
//! are written as on the command line (`rhos = 1,2,4`). Blank lines and lines
//! starting with `#` are ignored.

use std::collections::HashMap;
use std::ffi::OsString;
use std::path::Path;

use clap::{Arg, CommandFactory};

use crate::args::Cli;
use crate::error::CliError;

pub fn parse_file(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("{}:{}: expected `key = value`", path.display(), lineno + 1))
        })?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Usage(format!("{}:{}: empty key", path.display(), lineno + 1)));
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

/// Position and name of the subcommand, and the config path if one was given.
fn scan(args: &[OsString]) -> (Option<(usize, String)>, Option<OsString>) {
    let mut sub = None;
    let mut config = None;
    let mut i = 1;
    while i < args.len() {
        let tok = args[i].to_string_lossy();
        if tok == "--config" {
            config = args.get(i + 1).cloned();
            i += 2;
            continue;
        }
        if let Some(path) = tok.strip_prefix("--config=") {
            config = Some(path.into());
        } else if sub.is_none() && !tok.starts_with('-') {
            sub = Some((i, tok.into_owned()));
        }
        i += 1;
    }
    (sub, config)
}

/// Append config-file entries to `args` as flags; flags already on the
/// command line take precedence.
pub fn merge(mut args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let (sub, config) = scan(&args);
    let (Some((sub_pos, sub_name)), Some(config)) = (sub, config) else {
        return Ok(args);
    };
    let root = Cli::command();
    let Some(cmd) = root.find_subcommand(&sub_name) else {
        return Ok(args);
    };

    let mut by_name: HashMap<String, &Arg> = HashMap::new();
    for arg in cmd.get_arguments() {
        if let Some(long) = arg.get_long() {
            by_name.insert(long.to_string(), arg);
            for alias in arg.get_all_aliases().into_iter().flatten() {
                by_name.insert(alias.to_string(), arg);
            }
        }
    }

    let present: Vec<&Arg> = args[sub_pos + 1..]
        .iter()
        .filter_map(|tok| {
            let tok = tok.to_string_lossy();
            let name = tok.strip_prefix("--")?.split('=').next()?.to_string();
            by_name.get(&name).copied()
        })
        .collect();
    let is_present = |arg: &Arg| present.iter().any(|p| p.get_id() == arg.get_id());
    let conflicts_with_present =
        |arg: &Arg| cmd.get_arg_conflicts_with(arg).iter().any(|c| is_present(c));

    let mut extra = Vec::new();
    for (key, value) in parse_file(Path::new(&config))? {
        if key == "config" {
            continue;
        }
        let arg = by_name.get(&key).ok_or_else(|| {
            CliError::Usage(format!("config file {}: unknown key `{key}` for `{sub_name}`", Path::new(&config).display()))
        })?;
        if is_present(arg) || conflicts_with_present(arg) {
            continue;
        }
        let long = arg.get_long().expect("indexed by long name");
        extra.push(OsString::from(format!("--{long}={value}")));
    }
    args.extend(extra);
    Ok(args)
}
