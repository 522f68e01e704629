//! Size guards and the sampled/exhaustive switch.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset::ENCODING_LIMIT;

pub const DEFAULT_MAX_UNIVERSE: usize = 24;
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 16;
/// Default cap on assignments scanned by one exhaustive identity check.
pub const DEFAULT_ASSIGNMENT_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub max_universe: usize,
    pub exhaustive_bound: usize,
    pub assignment_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_universe: DEFAULT_MAX_UNIVERSE,
            exhaustive_bound: DEFAULT_EXHAUSTIVE_BOUND,
            assignment_budget: DEFAULT_ASSIGNMENT_BUDGET,
        }
    }
}

impl Limits {
    /// Defaults overridden by `RYS_MAX_UNIVERSE` and `RYS_EXHAUSTIVE_BOUND`.
    pub fn from_env() -> Result<Limits> {
        let mut limits = Limits::default();
        if let Some(v) = read_env("RYS_MAX_UNIVERSE")? {
            limits.max_universe = v.min(ENCODING_LIMIT);
        }
        if let Some(v) = read_env("RYS_EXHAUSTIVE_BOUND")? {
            limits.exhaustive_bound = v.min(ENCODING_LIMIT);
        }
        Ok(limits)
    }

    pub fn check_universe(&self, size: usize) -> Result<()> {
        if size == 0 {
            return Err(Error::Config("universe must contain at least one atom".into()));
        }
        if size > self.max_universe {
            return Err(Error::Config(format!(
                "universe of {size} atoms exceeds the size guard of {} (set RYS_MAX_UNIVERSE to override)",
                self.max_universe
            )));
        }
        Ok(())
    }

    pub fn allows_exhaustive(&self, size: usize) -> bool {
        size <= self.exhaustive_bound
    }

    pub fn require_exhaustive(&self, size: usize, what: &str) -> Result<()> {
        if self.allows_exhaustive(size) {
            Ok(())
        } else {
            Err(Error::Budget(format!(
                "{what} enumerates all subsets; universe of {size} atoms exceeds the exhaustive bound {}",
                self.exhaustive_bound
            )))
        }
    }
}

fn read_env(key: &str) -> Result<Option<usize>> {
    match std::env::var(key) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{key} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

/// How a universally quantified property is scanned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum ScanMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

impl ScanMode {
    pub fn seed(&self) -> Option<u64> {
        match self {
            ScanMode::Exhaustive => None,
            ScanMode::Sampled { seed, .. } => Some(*seed),
        }
    }
}
