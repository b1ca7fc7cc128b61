//! Flat key=value config files. Flags win over file values; unknown keys
//! are errors so typos cannot silently fall back to defaults.

use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    /// Parse `key=value` lines. Blank lines and `#` comments are allowed.
    /// `allowed` is the closed key set of the verb being run.
    pub fn load(path: &Path, allowed: &[&str]) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut values = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key=value, got `{line}`", lineno + 1))?;
            let key = key.trim();
            if !allowed.contains(&key) {
                return Err(format!("unknown config key `{key}`"));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    /// Flag value if given, else config value parsed with `parse`, else
    /// `default`.
    pub fn resolve<T, F>(&self, flag: Option<T>, key: &str, parse: F, default: T) -> Result<T, String>
    where
        F: Fn(&str) -> Result<T, String>,
    {
        match flag {
            Some(v) => Ok(v),
            None => match self.get(key) {
                Some(raw) => parse(raw).map_err(|e| format!("config key `{key}`: {e}")),
                None => Ok(default),
            },
        }
    }

    /// Like `resolve` but with no default; `None` when neither source has
    /// a value.
    pub fn resolve_opt<T, F>(&self, flag: Option<T>, key: &str, parse: F) -> Result<Option<T>, String>
    where
        F: Fn(&str) -> Result<T, String>,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => match self.get(key) {
                Some(raw) => parse(raw).map(Some).map_err(|e| format!("config key `{key}`: {e}")),
                None => Ok(None),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn flag_overrides_config() {
        let f = write_tmp("kt=2.0\n");
        let cfg = ConfigFile::load(f.path(), &["kt"]).unwrap();
        let parse = |s: &str| s.parse::<f64>().map_err(|e| e.to_string());
        assert_eq!(cfg.resolve(Some(3.0), "kt", parse, 1.0).unwrap(), 3.0);
        assert_eq!(cfg.resolve(None, "kt", parse, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn empty_config_gives_defaults() {
        let f = write_tmp("");
        let cfg = ConfigFile::load(f.path(), &["kt"]).unwrap();
        let parse = |s: &str| s.parse::<f64>().map_err(|e| e.to_string());
        assert_eq!(cfg.resolve(None, "kt", parse, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn unknown_key_is_error() {
        let f = write_tmp("ktt=2.0\n");
        let err = ConfigFile::load(f.path(), &["kt"]).unwrap_err();
        assert!(err.contains("ktt"), "{err}");
    }

    #[test]
    fn missing_file_is_error() {
        assert!(ConfigFile::load(Path::new("/nonexistent/x.conf"), &["kt"]).is_err());
    }
}
