use std::collections::HashSet;
use std::path::Path;

use clap::ArgAction;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Parses `key = value` lines; `#` starts a comment. Keys are normalized to dashes.
pub fn parse_config(text: &str) -> CliResult<Vec<Entry>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| CliError::ConfigParse { line, message: format!("expected `key = value`, got '{content}'") })?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(CliError::ConfigParse { line, message: "empty key or value".into() });
        }
        if !seen.insert(key.clone()) {
            return Err(CliError::ConfigParse { line, message: format!("duplicate key '{key}'") });
        }
        out.push(Entry { line, key, value });
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> CliResult<Vec<Entry>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::ConfigParse { line: 0, message: format!("{}: {e}", path.display()) })?;
    parse_config(&text)
}

/// Turns entries into long options of `cmd`, rejecting keys it does not define.
pub fn entries_to_args(entries: &[Entry], cmd: &clap::Command) -> CliResult<Vec<String>> {
    let mut args = Vec::new();
    for e in entries {
        let arg = cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(e.key.as_str()) && e.key != "config")
            .ok_or_else(|| CliError::ConfigParse {
                line: e.line,
                message: format!("unknown key '{}' for {}", e.key, cmd.get_name()),
            })?;
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match e.value.as_str() {
                "true" => args.push(format!("--{}", e.key)),
                "false" => {}
                v => {
                    return Err(CliError::ConfigParse { line: e.line, message: format!("'{}' takes true or false, got '{v}'", e.key) })
                }
            }
        } else {
            args.push(format!("--{}={}", e.key, e.value));
        }
    }
    Ok(args)
}
