//! Settings from the optional TOML file named by `HOOKEXT_CONFIG`.
//!
//! Command-line flags win over the file, the file wins over built-in defaults.

use std::path::PathBuf;

use anyhow::{Context, Result};
use serde::Deserialize;

pub const CONFIG_ENV: &str = "HOOKEXT_CONFIG";

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub jobs: Option<usize>,
    pub max_a: Option<usize>,
    pub max_b: Option<usize>,
    pub max_sum: Option<usize>,
    pub primes: Option<Vec<u64>>,
    pub cache_path: Option<PathBuf>,
    pub no_cache: Option<bool>,
    pub ascii: Option<bool>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Reads the file named by `HOOKEXT_CONFIG`, if the variable is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            None => Ok(Self::default()),
            Some(path) => {
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading {CONFIG_ENV}={}", PathBuf::from(&path).display()))?;
                Self::parse(&text).with_context(|| format!("parsing {}", PathBuf::from(&path).display()))
            }
        }
    }
}

pub const DEFAULT_MAX_A: usize = 8;
pub const DEFAULT_MAX_B: usize = 8;
pub const DEFAULT_MAX_SUM: usize = 9;
pub const DEFAULT_PRIMES: [u64; 3] = [2, 3, 5];

/// `flag`, else `file`, else `default`.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
