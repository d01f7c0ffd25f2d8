//! The published file formats: `counts.csv`, `constants.json` and
//! `omega_p.csv`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chordal_core::densities::montecarlo::Estimate;
use chordal_core::densities::report::{DensityReport, Derived, ThetaCheck};
use chordal_core::enumerate::{CountClass, CountRecord, EngineKind};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::{CliError, Result};

pub const COUNTS_FILE: &str = "counts.csv";
pub const CONSTANTS_FILE: &str = "constants.json";
pub const OMEGA_P_FILE: &str = "omega_p.csv";

/// One `counts.csv` row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    #[serde(rename = "B")]
    pub bound: u64,
    pub class: String,
    pub count: u64,
    pub engine: String,
    pub elapsed_ms: u64,
}

impl From<&CountRecord> for CountRow {
    fn from(r: &CountRecord) -> Self {
        CountRow {
            bound: r.bound,
            class: r.class.label().to_owned(),
            count: r.count,
            engine: r.engine.label().to_owned(),
            elapsed_ms: r.elapsed_ms,
        }
    }
}

impl CountRow {
    pub fn record(&self) -> Result<CountRecord> {
        Ok(CountRecord {
            bound: self.bound,
            class: CountClass::from_label(&self.class)?,
            count: self.count,
            engine: EngineKind::from_label(&self.engine)?,
            elapsed_ms: self.elapsed_ms,
        })
    }
}

pub fn write_counts<W: Write>(w: W, rows: &[CountRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_counts<R: Read>(r: R) -> Result<Vec<CountRow>> {
    let mut rd = csv::Reader::from_reader(r);
    let header = rd.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != ["B", "class", "count", "engine", "elapsed_ms"] {
        return Err(CliError::Usage(format!("unexpected counts header: {}", header.iter().collect::<Vec<_>>().join(","))));
    }
    rd.deserialize()
        .map(|row| row.map_err(|e| CliError::Usage(format!("malformed counts row: {e}"))))
        .collect()
}

/// A `{value, stderr, n_samples, seed}` entry; exact entries leave the last
/// three empty.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub value: f64,
    pub stderr: Option<f64>,
    pub n_samples: Option<u64>,
    pub seed: Option<u64>,
}

impl Entry {
    pub fn exact(value: f64) -> Self {
        Entry { value, stderr: None, n_samples: None, seed: None }
    }

    fn sampled(e: &Estimate) -> Self {
        Entry { value: e.value, stderr: Some(e.stderr), n_samples: Some(e.n_samples), seed: Some(e.seed) }
    }

    fn derived(d: &Derived, from: &Estimate) -> Self {
        Entry { value: d.value, stderr: Some(d.stderr), n_samples: Some(from.n_samples), seed: Some(from.seed) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaEntry {
    pub theta: f64,
    pub cplus_plus_cminus: f64,
    pub difference: f64,
    pub sigma: f64,
    pub consistent: bool,
}

impl From<ThetaCheck> for ThetaEntry {
    fn from(c: ThetaCheck) -> Self {
        ThetaEntry {
            theta: c.theta,
            cplus_plus_cminus: c.sum,
            difference: c.difference,
            sigma: c.sigma,
            consistent: c.consistent,
        }
    }
}

/// The contents of `constants.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsFile {
    pub zeta3: Entry,
    #[serde(rename = "vol_S1_plus")]
    pub vol_s1_plus: Entry,
    #[serde(rename = "vol_S1_minus")]
    pub vol_s1_minus: Entry,
    pub c18: Entry,
    pub omega_inf_plus1: Entry,
    pub omega_inf_minus1: Entry,
    pub c0: Entry,
    pub cplus: Entry,
    pub cminus: Entry,
    pub tau: Entry,
    pub theta: Entry,
    pub theta_check: ThetaEntry,
    pub config: RunConfig,
}

impl ConstantsFile {
    pub fn new(r: &DensityReport, config: &RunConfig) -> Self {
        ConstantsFile {
            zeta3: Entry::exact(r.zeta3),
            vol_s1_plus: Entry::sampled(&r.vol_s1_plus),
            vol_s1_minus: Entry::sampled(&r.vol_s1_minus),
            c18: Entry::sampled(&r.c18),
            omega_inf_plus1: Entry::sampled(&r.omega_inf_plus1),
            omega_inf_minus1: Entry::sampled(&r.omega_inf_minus1),
            c0: Entry::derived(&r.c0, &r.c18),
            cplus: Entry::derived(&r.cplus, &r.vol_s1_plus),
            cminus: Entry::derived(&r.cminus, &r.vol_s1_minus),
            tau: Entry::derived(&r.tau, &r.omega_inf_plus1),
            theta: Entry::derived(&r.theta, &r.omega_inf_plus1),
            theta_check: r.theta_check().into(),
            config: config.clone(),
        }
    }

    /// The predicted leading constant for a counting class, if any.
    pub fn predicted(&self, class: CountClass) -> Option<Entry> {
        match class {
            CountClass::Zero => Some(self.c0),
            CountClass::Plus => Some(self.cplus),
            CountClass::Minus => Some(self.cminus),
            CountClass::Delta => None,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = File::create(path)?;
        serde_json::to_writer_pretty(&mut f, self)?;
        f.write_all(b"\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
        serde_json::from_reader(f).map_err(|e| CliError::Usage(format!("malformed {}: {e}", path.display())))
    }
}

/// One `omega_p.csv` row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaRow {
    pub p: u64,
    pub epsilon: i64,
    pub numerator: String,
    pub denominator: String,
}

pub fn omega_rows(r: &DensityReport) -> Vec<OmegaRow> {
    r.primes
        .iter()
        .flat_map(|d| {
            d.parts.iter().map(move |(eps, w)| OmegaRow {
                p: d.p,
                epsilon: *eps,
                numerator: w.numer().to_string(),
                denominator: w.denom().to_string(),
            })
        })
        .collect()
}

pub fn write_omega<W: Write>(w: W, rows: &[OmegaRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}
