//! `heiscone.cfg`: `key = value` lines mirroring long flags.
//!
//! Keys are turned into flags placed *before* the user's own arguments, and
//! every subcommand lets a later occurrence override an earlier one, so flags
//! on the command line always win. Keys a subcommand does not have are
//! ignored for that subcommand; keys no subcommand has are an error.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Command;

pub const DEFAULT_FILE: &str = "heiscone.cfg";

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

pub fn parse(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected key = value, got {raw:?}", i + 1);
        };
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            bail!("line {}: empty key", i + 1);
        }
        out.push(Entry {
            line: i + 1,
            key,
            value: v.trim().to_string(),
        });
    }
    Ok(out)
}

/// `--config FILE` (or `--config=FILE`) if given, else `./heiscone.cfg` if
/// it exists.
pub fn locate(args: &[String]) -> Option<PathBuf> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--" {
            break;
        }
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    let p = Path::new(DEFAULT_FILE);
    p.is_file().then(|| p.to_path_buf())
}

/// Position of the subcommand name in `args`, skipping `--config FILE`.
fn subcommand_index(cmd: &Command, args: &[String]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let a = &args[i];
        if a == "--config" {
            i += 2;
            continue;
        }
        if cmd.find_subcommand(a).is_some() {
            return Some(i);
        }
        if !a.starts_with('-') {
            return None;
        }
        i += 1;
    }
    None
}

/// Inserts the file's entries as flags right after the subcommand name.
pub fn inject(cmd: &Command, args: Vec<String>, entries: &[Entry]) -> Result<Vec<String>> {
    let known = |key: &str| {
        cmd.get_subcommands()
            .any(|s| s.get_arguments().any(|a| a.get_long() == Some(key)))
    };
    for e in entries {
        if e.key == "config" || !known(&e.key) {
            bail!("line {}: unknown key {:?}", e.line, e.key);
        }
    }
    let Some(at) = subcommand_index(cmd, &args) else {
        return Ok(args);
    };
    let sub = cmd.find_subcommand(&args[at]).unwrap();
    let mut extra = Vec::new();
    for e in entries {
        let Some(arg) = sub.get_arguments().find(|a| a.get_long() == Some(e.key.as_str())) else {
            continue;
        };
        if arg.get_action().takes_values() {
            extra.push(format!("--{}={}", e.key, e.value));
        } else {
            let on: bool = e
                .value
                .parse()
                .with_context(|| format!("line {}: {} expects true or false", e.line, e.key))?;
            if on {
                extra.push(format!("--{}", e.key));
            }
        }
    }
    let mut out = args[..=at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[at + 1..]);
    Ok(out)
}
