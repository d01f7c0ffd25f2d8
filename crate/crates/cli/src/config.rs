//! Validated run configuration, recorded next to every output.

use std::fs;
use std::path::{Path, PathBuf};

use chordal_core::densities::montecarlo::{MIN_SAMPLES, ZETA3_TERMS};
use chordal_core::enumerate::{CountClass, EngineKind, DEFAULT_DIRECT_CAP, DEFAULT_SLACK};
use chordal_core::exactmath::is_prime;
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

pub const DEFAULT_MC_SAMPLES: u64 = 10_000_000;
pub const DEFAULT_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
pub const DEFAULT_X_GRID: [f64; 5] = [10.0, 30.0, 100.0, 300.0, 1000.0];
pub const DEFAULT_GEOMETRY_SAMPLES: u64 = 100_000;
/// Largest height bound accepted anywhere.
pub const MAX_BOUND: u64 = 1_000_000_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub bounds: Vec<u64>,
    pub classes: Vec<String>,
    pub engine: String,
    pub slack: u32,
    pub direct_cap: u64,
    pub mc_samples: u64,
    pub seed: u64,
    pub primes: Vec<u64>,
    pub x_grid: Vec<f64>,
    pub zeta_terms: u64,
    pub geometry_samples: u64,
    pub out: PathBuf,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            bounds: Vec::new(),
            classes: CountClass::ALL.iter().map(|c| c.label().to_owned()).collect(),
            engine: EngineKind::Pairs.label().to_owned(),
            slack: DEFAULT_SLACK,
            direct_cap: DEFAULT_DIRECT_CAP,
            mc_samples: DEFAULT_MC_SAMPLES,
            seed: 0,
            primes: DEFAULT_PRIMES.to_vec(),
            x_grid: DEFAULT_X_GRID.to_vec(),
            zeta_terms: ZETA3_TERMS,
            geometry_samples: DEFAULT_GEOMETRY_SAMPLES,
            out: PathBuf::from("."),
            workers: default_workers(),
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl RunConfig {
    /// Checks every field; bounds are sorted and deduplicated.
    pub fn validate(mut self) -> Result<Self> {
        self.bounds.sort_unstable();
        self.bounds.dedup();
        if let Some(b) = self.bounds.iter().find(|b| **b == 0 || **b > MAX_BOUND) {
            return Err(usage(format!("bound must be in 1..={MAX_BOUND}, got {b}")));
        }
        if self.classes.is_empty() {
            return Err(usage("at least one class is required"));
        }
        for c in &self.classes {
            CountClass::from_label(c)?;
        }
        self.engine()?;
        if self.slack == 0 {
            return Err(usage("slack must be positive"));
        }
        if self.mc_samples < MIN_SAMPLES {
            return Err(usage(format!("need at least {MIN_SAMPLES} Monte Carlo samples, got {}", self.mc_samples)));
        }
        if self.primes.is_empty() {
            return Err(usage("at least one prime is required"));
        }
        if let Some(p) = self.primes.iter().find(|p| !is_prime(**p)) {
            return Err(usage(format!("{p} is not prime")));
        }
        self.primes.sort_unstable();
        self.primes.dedup();
        if self.x_grid.len() < 4 || self.x_grid.iter().any(|x| !x.is_finite() || *x < 10.0) {
            return Err(usage("the X grid needs at least 4 finite values, each at least 10"));
        }
        if self.zeta_terms < 10 {
            return Err(usage("zeta(3) needs at least 10 terms"));
        }
        if self.geometry_samples == 0 {
            return Err(usage("geometry sample count must be positive"));
        }
        if self.workers == 0 {
            return Err(usage("worker count must be positive"));
        }
        Ok(self)
    }

    pub fn engine(&self) -> Result<EngineKind> {
        Ok(EngineKind::from_label(&self.engine)?)
    }

    pub fn count_classes(&self) -> Result<Vec<CountClass>> {
        let wanted = self.classes.iter().map(|c| CountClass::from_label(c)).collect::<Result<Vec<_>, _>>()?;
        Ok(CountClass::ALL.into_iter().filter(|c| wanted.contains(c)).collect())
    }

    /// Writes `<output>.config.json` next to `output`.
    pub fn write_sidecar(&self, output: &Path) -> Result<PathBuf> {
        let mut name = output.file_stem().unwrap_or_default().to_os_string();
        name.push(".config.json");
        let path = output.with_file_name(name);
        fs::write(&path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(path)
    }
}
