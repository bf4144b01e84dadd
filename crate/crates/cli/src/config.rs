use std::collections::HashSet;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Enumerate,
    Compute,
    Check,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub genus: u8,
    pub n: usize,
    pub d: u32,
    pub k: u32,
    pub a: u32,
    pub seeds: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    pub breakdown: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.genus > 1 {
            return Err(CliError::Config(format!("genus {} is not supported", self.genus)));
        }
        if self.genus == 1 && (self.n != 4 || self.k != 0) {
            return Err(CliError::Config("genus one requires n = 4 and k = 0".into()));
        }
        if self.n == 0 || self.d == 0 {
            return Err(CliError::Config("n and d must be positive".into()));
        }
        if self.command != Command::Enumerate && self.a == 0 {
            return Err(CliError::Config("the hypersurface degree a must be positive".into()));
        }
        if self.seeds.is_empty() {
            return Err(CliError::Config("at least one seed is required".into()));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = self.seeds.iter().find(|s| !seen.insert(**s)) {
            return Err(CliError::Config(format!("seed {dup} is repeated")));
        }
        if self.command == Command::Check && self.seeds.len() < 2 {
            return Err(CliError::Config("check needs at least two seeds".into()));
        }
        Ok(())
    }
}

pub fn parse_seeds(csv: &str) -> Result<Vec<u64>, CliError> {
    csv.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::Config(format!("bad seed `{s}`"))))
        .collect()
}
