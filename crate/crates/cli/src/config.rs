//! `key = value` configuration files. Each entry becomes the matching long
//! flag, placed ahead of the command-line flags so that those win.

use std::ffi::OsString;
use std::path::Path;

use crate::error::CliError;

pub fn parse_config(text: &str) -> Result<Vec<String>, CliError> {
    let mut args = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`, got `{raw}`", n + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"');
        if key.is_empty() || key == "config" {
            return Err(CliError::Usage(format!("config line {}: invalid key `{key}`", n + 1)));
        }
        match value {
            "true" => args.push(format!("--{key}")),
            "false" => {}
            v => {
                args.push(format!("--{key}"));
                args.push(v.to_string());
            }
        }
    }
    Ok(args)
}

fn config_path(args: &[OsString]) -> Option<(usize, usize, OsString)> {
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return args.get(i + 1).map(|p| (i, 2, p.clone()));
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some((i, 1, OsString::from(p)));
        }
    }
    None
}

/// Replaces `--config FILE` with the file's flags, inserted right after the
/// subcommand.
pub fn expand(mut args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some((at, width, path)) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    let extra = parse_config(&text)?;
    args.drain(at..at + width);
    let insert = args.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')).map_or(args.len(), |p| p + 2);
    args.splice(insert..insert, extra.into_iter().map(OsString::from));
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_become_flags() {
        let a = parse_config("wbar = 0.5\n# note\ntau_max=10 # trailing\nmarkovian-baseline = true\nphysical = false\n").unwrap();
        assert_eq!(a, ["--wbar", "0.5", "--tau-max", "10", "--markovian-baseline"]);
        assert!(parse_config("nonsense").is_err());
    }

    #[test]
    fn inserted_after_subcommand() {
        let dir = std::env::temp_dir().join(format!("unruh-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let f = dir.join("run.conf");
        std::fs::write(&f, "wbar = 2\n").unwrap();
        let args: Vec<OsString> = ["unruh", "cp", "--config", f.to_str().unwrap(), "--wbar", "3"].iter().map(OsString::from).collect();
        let out = expand(args).unwrap();
        assert_eq!(out, ["unruh", "cp", "--wbar", "2", "--wbar", "3"].map(OsString::from));
    }
}
