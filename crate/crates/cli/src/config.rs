//! Flat `key = value` config files. Keys are the long flag names without
//! the leading dashes; `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};

pub const KEYS: [&str; 13] = [
    "problem",
    "n",
    "method",
    "step-rule",
    "tol",
    "max-iter",
    "seed",
    "trace",
    "table",
    "format",
    "out",
    "h",
    "acoc",
];

#[derive(Debug, Default, Clone, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected `key = value`, got `{line}`", lineno + 1);
            };
            let key = key.trim();
            if !KEYS.contains(&key) {
                bail!(
                    "line {}: unknown key `{key}` (known keys: {})",
                    lineno + 1,
                    KEYS.join(", ")
                );
            }
            let value = value.trim().trim_matches('"').to_string();
            if values.insert(key.to_string(), value).is_some() {
                bail!("line {}: key `{key}` given twice", lineno + 1);
            }
        }
        Ok(ConfigFile { values })
    }

    /// The file's value for `key`, parsed, if present.
    pub fn get<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        debug_assert!(KEYS.contains(&key), "{key}");
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| anyhow::anyhow!("config key `{key}`: {e}"))
            })
            .transpose()
    }

    /// Command-line value if given, otherwise the file's.
    pub fn merge<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn flag(&self, flag: bool, key: &str) -> Result<bool> {
        Ok(flag || self.get::<bool>(key)?.unwrap_or(false))
    }
}
