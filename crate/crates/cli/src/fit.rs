//! Comparison of observed counts with the predicted leading constants.

use std::collections::BTreeMap;
use std::io::Write;

use chordal_core::enumerate::CountClass;
use serde::Serialize;

use crate::output::{ConstantsFile, CountRow};
use crate::{CliError, Result};

/// Minimum number of distinct bounds per class.
pub const MIN_BOUNDS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitRow {
    #[serde(rename = "B")]
    pub bound: u64,
    pub class: String,
    pub count: u64,
    /// `B·log B`, or `√B` for the diagonal class.
    pub normalizer: f64,
    pub ratio: f64,
    pub predicted: Option<f64>,
    pub ratio_to_predicted: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trend {
    pub class: String,
    /// For classes with a prediction: whether `|r/c − 1|` never grows with `B`.
    pub toward_one: Option<bool>,
    /// For the diagonal class: whether `N/√B` stays within a factor 2.
    pub stable: Option<bool>,
    pub last_ratio_to_predicted: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitReport {
    pub rows: Vec<FitRow>,
    pub trends: Vec<Trend>,
}

/// Counts keyed by class then bound. Repeated `(B, class)` rows must agree.
fn collate(rows: &[CountRow]) -> Result<BTreeMap<CountClass, BTreeMap<u64, u64>>> {
    let mut by_class: BTreeMap<CountClass, BTreeMap<u64, u64>> = BTreeMap::new();
    for row in rows {
        let class = CountClass::from_label(&row.class)?;
        if row.bound < 2 {
            return Err(CliError::Usage(format!("bound {} too small to fit", row.bound)));
        }
        let slot = by_class.entry(class).or_default();
        match slot.insert(row.bound, row.count) {
            Some(prev) if prev != row.count => {
                return Err(CliError::Usage(format!(
                    "conflicting counts for B={} class {}: {prev} and {}",
                    row.bound, row.class, row.count
                )))
            }
            _ => {}
        }
    }
    Ok(by_class)
}

pub fn fit(rows: &[CountRow], constants: &ConstantsFile) -> Result<FitReport> {
    let by_class = collate(rows)?;
    if by_class.is_empty() {
        return Err(CliError::Usage("no count rows to fit".into()));
    }
    let mut out = Vec::new();
    let mut trends = Vec::new();
    for (class, counts) in &by_class {
        if counts.len() < MIN_BOUNDS {
            return Err(CliError::Usage(format!(
                "class {} has counts at {} bounds, need at least {MIN_BOUNDS}",
                class.label(),
                counts.len()
            )));
        }
        let predicted = constants.predicted(*class).map(|e| e.value);
        let mut rel = Vec::new();
        let mut ratios = Vec::new();
        for (&b, &n) in counts {
            let bf = b as f64;
            let normalizer = match class {
                CountClass::Delta => bf.sqrt(),
                _ => bf * bf.ln(),
            };
            let ratio = n as f64 / normalizer;
            let ratio_to_predicted = predicted.map(|c| ratio / c);
            rel.extend(ratio_to_predicted);
            ratios.push(ratio);
            out.push(FitRow {
                bound: b,
                class: class.label().to_owned(),
                count: n,
                normalizer,
                ratio,
                predicted,
                ratio_to_predicted,
            });
        }
        trends.push(Trend {
            class: class.label().to_owned(),
            toward_one: predicted.map(|_| moves_toward_one(&rel)),
            stable: match class {
                CountClass::Delta => Some(within_factor_two(&ratios)),
                _ => None,
            },
            last_ratio_to_predicted: rel.last().copied(),
        });
    }
    Ok(FitReport { rows: out, trends })
}

/// `|r_{i+1} − 1| ≤ |r_i − 1|` for consecutive entries.
pub fn moves_toward_one(r: &[f64]) -> bool {
    r.windows(2).all(|w| (w[1] - 1.0).abs() <= (w[0] - 1.0).abs())
}

pub fn within_factor_two(v: &[f64]) -> bool {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(0.0, f64::max);
    lo > 0.0 && hi <= 2.0 * lo
}

impl FitReport {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn verdict_lines(&self) -> Vec<String> {
        self.trends.iter().map(|t| serde_json::to_string(t).expect("trend serializes")).collect()
    }
}
