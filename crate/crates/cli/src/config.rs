use std::path::{Path, PathBuf};

use clap::ValueEnum;
use gammapres_core::flmod::fp::is_prime;
use gammapres_core::Limits;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

/// Run settings read from `--config`. Caps left unset keep the library defaults.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub group_order: Option<usize>,
    pub h2_order: Option<usize>,
    pub variety_product_bound: Option<usize>,
    pub enumeration_budget: Option<u64>,
    /// Full cap set; the individual caps above override its fields.
    pub limits: Option<Limits>,
    pub primes: Option<Vec<u32>>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let caps = [self.group_order, self.h2_order, self.variety_product_bound, self.enumeration_budget.map(|b| b as usize)];
        if caps.iter().flatten().any(|&c| c == 0) {
            return Err(CliError::Usage("config caps must be positive".into()));
        }
        if let Some(primes) = &self.primes {
            if let Some(p) = primes.iter().find(|&&p| !is_prime(p as u64)) {
                return Err(CliError::Usage(format!("config prime {p} is not prime")));
            }
        }
        Ok(())
    }

    pub fn limits(&self) -> Limits {
        let mut l = self.limits.clone().unwrap_or_default();
        if let Some(v) = self.group_order {
            l.group_order = v;
        }
        if let Some(v) = self.h2_order {
            l.h2_order = v;
        }
        if let Some(v) = self.variety_product_bound {
            l.variety_product_bound = v;
        }
        if let Some(v) = self.enumeration_budget {
            l.enumeration_budget = v;
        }
        l
    }

    /// The config value, then the environment.
    pub fn cache_dir(&self) -> Option<PathBuf> {
        self.cache_dir.clone().or_else(|| std::env::var_os("GAMMAPRES_CACHE_DIR").map(PathBuf::from))
    }
}
