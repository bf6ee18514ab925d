//! Minimal `key: value` config text. `#` starts a comment; blank lines are
//! skipped; later keys override earlier ones.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    entries: BTreeMap<String, (usize, String)>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once(':')
                .or_else(|| line.split_once('='))
                .ok_or_else(|| Error::Parse {
                    line: i + 1,
                    message: format!("expected `key: value`, got {line:?}"),
                })?;
            entries.insert(k.trim().to_string(), (i + 1, v.trim().to_string()));
        }
        Ok(KeyValues { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::Config(format!("missing key `{key}`")))
    }

    pub fn parse_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.entries.get(key) {
            None => Ok(default),
            Some((line, v)) => v.parse().map_err(|_| Error::Parse {
                line: *line,
                message: format!("bad value for `{key}`: {v:?}"),
            }),
        }
    }

    /// Whitespace- or comma-separated list.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        let Some((line, v)) = self.entries.get(key) else {
            return Ok(None);
        };
        v.split([',', ' '])
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse().map_err(|_| Error::Parse {
                    line: *line,
                    message: format!("bad list item for `{key}`: {t:?}"),
                })
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(|k| k.as_str())
    }
}
