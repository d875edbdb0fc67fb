//! Flat key=value run configuration with fixed precedence:
//! CLI overrides > config file > built-in defaults. Every resolved run
//! writes the full merged map back out so it can be audited and replayed.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    /// Merge defaults, an optional key=value file, and CLI overrides.
    /// Keys outside the default set are rejected.
    pub fn resolve(
        defaults: &[(&str, &str)],
        file: Option<&Path>,
        overrides: &[(String, String)],
    ) -> Result<Self> {
        let mut values: BTreeMap<String, String> =
            defaults.iter().map(|&(k, v)| (k.to_string(), v.to_string())).collect();
        let known = |k: &str| defaults.iter().any(|&(d, _)| d == k);

        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::io(path.display().to_string(), e))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    Error::Config(format!("{}:{}: expected key=value", path.display(), lineno + 1))
                })?;
                let k = k.trim();
                if !known(k) {
                    return Err(Error::Config(format!("unknown config key '{}'", k)));
                }
                values.insert(k.to_string(), v.trim().to_string());
            }
        }
        for (k, v) in overrides {
            if !known(k) {
                return Err(Error::Config(format!("unknown config key '{}'", k)));
            }
            values.insert(k.clone(), v.clone());
        }
        Ok(RunConfig { values })
    }

    pub fn get(&self, key: &str) -> &str {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("config key '{}' missing from defaults", key))
    }

    pub fn get_u64(&self, key: &str) -> Result<u64> {
        self.get(key)
            .parse()
            .map_err(|_| Error::Config(format!("key '{}': expected integer, got '{}'", key, self.get(key))))
    }

    pub fn get_usize(&self, key: &str) -> Result<usize> {
        self.get(key)
            .parse()
            .map_err(|_| Error::Config(format!("key '{}': expected integer, got '{}'", key, self.get(key))))
    }

    pub fn get_f64(&self, key: &str) -> Result<f64> {
        self.get(key)
            .parse()
            .map_err(|_| Error::Config(format!("key '{}': expected number, got '{}'", key, self.get(key))))
    }

    /// Dash-separated layer widths, e.g. "784-100-100-100-784".
    pub fn get_widths(&self, key: &str) -> Result<Vec<usize>> {
        self.get(key)
            .split('-')
            .map(|p| {
                p.trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("key '{}': bad width '{}'", key, p)))
            })
            .collect()
    }

    /// The full resolved map as sorted key=value lines.
    pub fn resolved_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.values {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    /// FNV-1a hash of the resolved text, for stamping outputs.
    pub fn hash_hex(&self) -> String {
        format!("{:016x}", fnv1a64(self.resolved_text().as_bytes()))
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
