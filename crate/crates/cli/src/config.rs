//! `--config FILE`: `key = value` lines that stand in for flags.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Flags from a config file, in file order. Keys are flag names without dashes.
pub fn read(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected `key = value`", i + 1);
        };
        let key = k.trim().trim_start_matches('-');
        if key.is_empty() || key == "config" {
            bail!("config line {}: bad key `{}`", i + 1, k.trim());
        }
        out.push((key.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Splits `--config PATH` / `--config=PATH` out of the raw arguments.
pub fn take_config_flag(args: &mut Vec<OsString>) -> Result<Option<OsString>> {
    let mut found = None;
    let mut i = 0;
    while i < args.len() {
        let a = args[i].to_string_lossy().into_owned();
        if a == "--" {
            break;
        }
        if a == "--config" {
            if i + 1 >= args.len() {
                bail!("--config needs a file");
            }
            found = Some(args.remove(i + 1));
            args.remove(i);
        } else if let Some(p) = a.strip_prefix("--config=") {
            found = Some(OsString::from(p));
            args.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(found)
}

/// Inserts config flags right after the subcommand so that later command-line
/// occurrences override them.
pub fn splice(args: &mut Vec<OsString>, subcommands: &[&str], entries: &[(String, String)]) {
    let at = args.iter().position(|a| subcommands.iter().any(|s| a == s)).map_or(args.len(), |p| p + 1);
    let mut extra = Vec::new();
    for (k, v) in entries {
        match v.as_str() {
            "true" => extra.push(OsString::from(format!("--{k}"))),
            "false" => {}
            _ => {
                extra.push(OsString::from(format!("--{k}")));
                extra.push(OsString::from(v));
            }
        }
    }
    args.splice(at..at, extra);
}
