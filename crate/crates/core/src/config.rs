//! Resource caps.
//!
//! Caps are read from a flat key/value TOML file named by the
//! `GROUPTENSOR_CONFIG` environment variable; anything missing keeps its
//! default. CLI flags may override individual fields afterwards.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CONFIG_ENV: &str = "GROUPTENSOR_CONFIG";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Largest group that may be constructed.
    pub max_group_order: usize,
    /// Largest prime accepted for `sl2:p` / `psl2:p`.
    pub max_sl2_prime: u64,
    /// Largest group for conjugacy-class enumeration.
    pub conjugacy_cap: usize,
    /// Largest group whose regular module may be built and chopped.
    pub modrep_cap: usize,
    /// Largest group whose multiplication tensor may be materialized.
    pub tensor_cap: usize,
    /// Largest group for exact maximum-matching search.
    pub exact_matching_cap: usize,
    /// Largest group for the trace-chain radical oracle.
    pub trace_chain_cap: usize,
    /// Largest `p^n` for subspace enumeration.
    pub subspace_guard: u64,
    /// Random algebra elements tried per block before `chop` gives up.
    pub chop_retry_budget: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_group_order: 13_000,
            max_sl2_prime: 23,
            conjugacy_cap: 13_000,
            modrep_cap: 1200,
            tensor_cap: 1200,
            exact_matching_cap: 16,
            trace_chain_cap: 64,
            subspace_guard: 10_000,
            chop_retry_budget: 200,
        }
    }
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Input(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Defaults, overlaid with the file named by `GROUPTENSOR_CONFIG` if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) => Self::from_file(Path::new(&path)),
            None => Ok(Self::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg = Config::from_toml_str("modrep_cap = 64\n").unwrap();
        assert_eq!(cfg.modrep_cap, 64);
        assert_eq!(cfg.exact_matching_cap, 16);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(Config::from_toml_str("bogus = 1").is_err());
    }
}
