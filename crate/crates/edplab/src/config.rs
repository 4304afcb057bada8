//! `--config` files: `key=value` lines that supply flags.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context};

/// Parses `key=value` lines into `--key=value` arguments. Blank lines and
/// lines starting with `#` are skipped; `_` in keys becomes `-`.
pub fn parse_config(text: &str) -> anyhow::Result<Vec<OsString>> {
    let mut args = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key=value, got {line:?}", i + 1);
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            bail!("config line {}: invalid key {key:?}", i + 1);
        }
        args.push(OsString::from(format!("--{key}={}", value.trim())));
    }
    Ok(args)
}

/// Replaces every `--config FILE` (or `--config=FILE`) in `args` with the
/// file's flags, placed right after the subcommand name so that flags given
/// on the command line take precedence.
pub fn expand_config(args: Vec<OsString>) -> anyhow::Result<Vec<OsString>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut files = Vec::new();
    let mut iter = args.into_iter();
    while let Some(a) = iter.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            let Some(path) = iter.next() else {
                bail!("--config needs a file argument");
            };
            files.push(path);
        } else if let Some(path) = s.strip_prefix("--config=") {
            files.push(OsString::from(path));
        } else {
            rest.push(a);
        }
    }
    if files.is_empty() {
        return Ok(rest);
    }
    let mut injected = Vec::new();
    for f in &files {
        let path = Path::new(f);
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        injected.extend(parse_config(&text)?);
    }
    // argv[0], then the subcommand, then config flags, then the user's flags.
    let split = rest
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map_or(rest.len(), |p| p + 2);
    let tail = rest.split_off(split.min(rest.len()));
    rest.extend(injected);
    rest.extend(tail);
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_lines() {
        let args = parse_config("# comment\n\nseed = 5\nbudget_cap=100\n--format=json\n").unwrap();
        assert_eq!(args, os(&["--seed=5", "--budget-cap=100", "--format=json"]));
        assert!(parse_config("novalue\n").is_err());
        assert!(parse_config("config=x\n").is_err());
    }

    #[test]
    fn injects_before_user_flags() {
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("run.cfg");
        std::fs::write(&f, "seed=5\nsamples=10\n").unwrap();
        let args = os(&["edplab", "fig2", "--config", f.to_str().unwrap(), "--seed", "9"]);
        let out = expand_config(args).unwrap();
        assert_eq!(
            out,
            os(&["edplab", "fig2", "--seed=5", "--samples=10", "--seed", "9"])
        );
    }

    #[test]
    fn untouched_without_config() {
        let args = os(&["edplab", "bounds", "--d", "16"]);
        assert_eq!(expand_config(args.clone()).unwrap(), args);
    }
}
