//! The subcommands, as library functions returning their output text.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use chordal_core::densities::montecarlo::{zeta3_series, Integrand, McPlan};
use chordal_core::densities::report::{assemble_constants, ArchimedeanInputs};
use chordal_core::sym2::point_to_pair;
use chordal_core::variety::{classify as classify_point, deltas, eval_cubic, Point6};

use crate::config::RunConfig;
use crate::fit::{fit as fit_counts, FitReport};
use crate::output::{
    omega_rows, read_counts, write_counts, write_omega, ConstantsFile, CountRow, OmegaRow, CONSTANTS_FILE,
    COUNTS_FILE, OMEGA_P_FILE,
};
use crate::parallel::Runner;
use crate::suites::{self, SuiteReport};
use crate::{CliError, Result};

/// Bound used by `verify geometry` when none is given.
pub const GEOMETRY_BOUND: u64 = 10_000;
/// Bound used by `verify counting` when none is given.
pub const COUNTING_BOUND: u64 = 1_000;
/// Brute-force samples per `(p, ε)` in `verify densities`.
pub const BRUTE_SAMPLES: u64 = 10_000;

fn out_dir(config: &RunConfig) -> Result<&Path> {
    fs::create_dir_all(&config.out)?;
    Ok(&config.out)
}

/// Counts per bound and class; writes `counts.csv` and its sidecar.
pub fn enumerate(config: &RunConfig, runner: &Runner) -> Result<Vec<CountRow>> {
    if config.bounds.is_empty() {
        return Err(CliError::Usage("enumerate needs at least one --bound".into()));
    }
    let engine = config.engine()?;
    let classes = config.count_classes()?;
    let mut rows = Vec::new();
    for &b in &config.bounds {
        for r in runner.count(b, engine, config.slack, config.direct_cap)? {
            if classes.contains(&r.class) {
                rows.push(CountRow::from(&r));
            }
        }
    }
    let path = out_dir(config)?.join(COUNTS_FILE);
    write_counts(BufWriter::new(File::create(&path)?), &rows)?;
    config.write_sidecar(&path)?;
    Ok(rows)
}

/// A report on one point; off-variety points are failures.
pub fn classify(point: &str) -> Result<String> {
    let x: Point6 = point.parse()?;
    let p = eval_cubic(&x);
    if p != 0 {
        return Err(CliError::Failure(format!("point {x} is not on the variety: P = {p}")));
    }
    let d = deltas(&x);
    let class = classify_point(&x)?;
    let pair = point_to_pair(&x)?;
    Ok(format!(
        "point {x}\nP {p}\ndeltas {} {} {}\nepsilon {}\ndiagonal {}\npreimage {pair}\n",
        d.d01, d.d02, d.d12, class.epsilon, class.is_diagonal
    ))
}

/// The density report; writes `constants.json` and `omega_p.csv`.
pub fn constants(config: &RunConfig, runner: &Runner) -> Result<(ConstantsFile, Vec<OmegaRow>)> {
    let run = |i: Integrand| -> Result<_> {
        let plan = McPlan::new(i, config.mc_samples, config.seed)?;
        Ok(Some(runner.estimate(&plan)?))
    };
    let inputs = ArchimedeanInputs {
        vol_s1_plus: run(Integrand::VolPlus)?,
        vol_s1_minus: run(Integrand::VolMinus)?,
        c18: run(Integrand::C18 { grid: config.x_grid.clone() })?,
        omega_inf_plus1: run(Integrand::OmegaPlus)?,
        omega_inf_minus1: run(Integrand::OmegaMinus)?,
    };
    let zeta3 = zeta3_series(config.zeta_terms)?;
    let report = assemble_constants(&config.primes, zeta3, &inputs)?;
    let file = ConstantsFile::new(&report, config);
    let rows = omega_rows(&report);
    let dir = out_dir(config)?;
    file.write(&dir.join(CONSTANTS_FILE))?;
    let omega = dir.join(OMEGA_P_FILE);
    write_omega(BufWriter::new(File::create(&omega)?), &rows)?;
    config.write_sidecar(&omega)?;
    Ok((file, rows))
}

/// A short human-readable view of the constants.
pub fn constants_summary(c: &ConstantsFile) -> String {
    let mut s = String::new();
    let entries = [
        ("zeta3", &c.zeta3),
        ("vol_S1_plus", &c.vol_s1_plus),
        ("vol_S1_minus", &c.vol_s1_minus),
        ("c18", &c.c18),
        ("omega_inf_plus1", &c.omega_inf_plus1),
        ("omega_inf_minus1", &c.omega_inf_minus1),
        ("c0", &c.c0),
        ("cplus", &c.cplus),
        ("cminus", &c.cminus),
        ("tau", &c.tau),
        ("theta", &c.theta),
    ];
    for (name, e) in entries {
        match e.stderr {
            Some(se) => s += &format!("{name:<17} {:.6} +- {:.6}\n", e.value, se),
            None => s += &format!("{name:<17} {:.16}\n", e.value),
        }
    }
    let t = &c.theta_check;
    s += &format!(
        "theta - (cplus + cminus) = {:.6} ({:.2} sigma): {}\n",
        t.difference,
        if t.sigma > 0.0 { t.difference / t.sigma } else { 0.0 },
        if t.consistent { "consistent" } else { "INCONSISTENT" }
    );
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Geometry,
    Densities,
    Counting,
}

pub fn verify(suite: Suite, config: &RunConfig, runner: &Runner) -> Result<SuiteReport> {
    match suite {
        Suite::Geometry => {
            let bound = config.bounds.last().copied().unwrap_or(GEOMETRY_BOUND);
            suites::geometry(runner, bound, config.slack, config.geometry_samples)
        }
        Suite::Densities => suites::densities(&config.primes, config.zeta_terms, BRUTE_SAMPLES),
        Suite::Counting => {
            let bounds = if config.bounds.is_empty() { vec![COUNTING_BOUND] } else { config.bounds.clone() };
            suites::counting(runner, &bounds, config.slack, config.direct_cap)
        }
    }
}

/// Fits `counts` against `constants`; writes `fit.csv` into the output
/// directory.
pub fn fit(config: &RunConfig, counts: &Path, constants: &Path) -> Result<FitReport> {
    let file = File::open(counts).map_err(|e| CliError::Usage(format!("cannot open {}: {e}", counts.display())))?;
    let rows = read_counts(file)?;
    let report = fit_counts(&rows, &ConstantsFile::read(constants)?)?;
    let path = out_dir(config)?.join("fit.csv");
    report.write_csv(BufWriter::new(File::create(&path)?))?;
    config.write_sidecar(&path)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let s = classify("1:1:1:0:0:2").unwrap();
        assert!(s.contains("epsilon -1"), "{s}");
        assert!(s.contains("d = -1"), "{s}");
        let s = classify("1:1:1:2:2:2").unwrap();
        assert!(s.contains("diagonal true"), "{s}");
        assert!(s.contains("{(1:1:1), (1:1:1)}"), "{s}");
        assert!(matches!(classify("1:1:1:1:1:1"), Err(CliError::Failure(m)) if m.contains("P = -2")));
        assert!(matches!(classify("1:1:1"), Err(CliError::Usage(_))));
        assert!(matches!(classify("0:0:0:0:0:0"), Err(CliError::Usage(_))));
    }
}
