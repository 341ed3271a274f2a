//! Plain `key=value` configuration files for `verify`.
//!
//! Keys mirror the long flag names. Blank lines and lines starting with `#`
//! are ignored; unknown keys are an error.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

pub const KEYS: &[&str] = &["suite", "tol", "out", "format", "threads", "D", "M", "N", "qtol", "quad-tol"];

pub fn parse(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value, got `{line}`", no + 1))?;
        let key = key.trim().trim_start_matches("--");
        let key = if key == "quad_tol" { "quad-tol" } else { key };
        if !KEYS.contains(&key) {
            return Err(format!("config line {}: unknown key `{key}`", no + 1));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

pub fn load(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let m = parse("# comment\nsuite = theorem\n\ntol=1e-5\nquad_tol=1e-10\n").unwrap();
        assert_eq!(m["suite"], "theorem");
        assert_eq!(m["tol"], "1e-5");
        assert_eq!(m["quad-tol"], "1e-10");
        assert!(parse("colour=red").unwrap_err().contains("unknown key"));
        assert!(parse("suite").is_err());
    }
}
