use std::path::PathBuf;
use std::process::ExitCode;

use chordal_cli::commands::{self, Suite};
use chordal_cli::config::{
    default_workers, RunConfig, DEFAULT_GEOMETRY_SAMPLES, DEFAULT_MC_SAMPLES, DEFAULT_PRIMES, DEFAULT_X_GRID,
};
use chordal_cli::output::write_counts;
use chordal_cli::parallel::Runner;
use chordal_cli::{CliError, Result};
use chordal_core::densities::montecarlo::ZETA3_TERMS;
use chordal_core::enumerate::{DEFAULT_DIRECT_CAP, DEFAULT_SLACK};
use clap::{Parser, Subcommand};

/// Rational points of bounded height on the chordal cubic fourfold.
#[derive(Parser, Debug)]
#[command(name = "chordal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Height bound; repeat or separate with commas.
    #[arg(short = 'B', long = "bound", global = true, value_delimiter = ',')]
    bounds: Vec<u64>,
    /// `pairs` or `direct`.
    #[arg(long, global = true, default_value = "pairs")]
    engine: String,
    #[arg(long, global = true, default_value_t = DEFAULT_SLACK)]
    slack: u32,
    /// Largest bound the direct engine accepts.
    #[arg(long, global = true, default_value_t = DEFAULT_DIRECT_CAP)]
    direct_cap: u64,
    /// Count classes to write: any of `0`, `+`, `-`, `delta`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    classes: Vec<String>,
    #[arg(long, global = true, default_value_t = DEFAULT_MC_SAMPLES)]
    mc_samples: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Vec<u64>,
    /// Values of X for the expanding-region slope fit.
    #[arg(long, global = true, value_delimiter = ',')]
    x_grid: Vec<f64>,
    #[arg(long, global = true, default_value_t = ZETA3_TERMS)]
    zeta_terms: u64,
    /// Points checked by `verify geometry`.
    #[arg(long, global = true, default_value_t = DEFAULT_GEOMETRY_SAMPLES)]
    geometry_samples: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count points per class and bound into counts.csv.
    Enumerate,
    /// Classify one colon-separated point.
    Classify {
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Compute densities and constants into constants.json and omega_p.csv.
    Constants,
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Compare counts.csv with constants.json.
    Fit {
        #[arg(long)]
        counts: PathBuf,
        #[arg(long)]
        constants: PathBuf,
    },
}

impl Cli {
    fn config(&self) -> Result<RunConfig> {
        let base = RunConfig::default();
        RunConfig {
            bounds: self.bounds.clone(),
            classes: if self.classes.is_empty() { base.classes } else { self.classes.clone() },
            engine: self.engine.clone(),
            slack: self.slack,
            direct_cap: self.direct_cap,
            mc_samples: self.mc_samples,
            seed: self.seed,
            primes: if self.primes.is_empty() { DEFAULT_PRIMES.to_vec() } else { self.primes.clone() },
            x_grid: if self.x_grid.is_empty() { DEFAULT_X_GRID.to_vec() } else { self.x_grid.clone() },
            zeta_terms: self.zeta_terms,
            geometry_samples: self.geometry_samples,
            out: self.out.clone(),
            workers: self.workers.unwrap_or_else(default_workers),
        }
        .validate()
    }
}

fn run(cli: &Cli) -> Result<()> {
    if let Command::Classify { point } = &cli.command {
        print!("{}", commands::classify(point)?);
        return Ok(());
    }
    let config = cli.config()?;
    let runner = Runner::new(config.workers)?;
    match &cli.command {
        Command::Classify { .. } => unreachable!(),
        Command::Enumerate => {
            let rows = commands::enumerate(&config, &runner)?;
            write_counts(std::io::stdout().lock(), &rows)?;
        }
        Command::Constants => {
            let (file, _) = commands::constants(&config, &runner)?;
            print!("{}", commands::constants_summary(&file));
        }
        Command::Verify { suite } => {
            let report = commands::verify(*suite, &config, &runner)?;
            print!("{}", report.json_lines());
            if !report.passed() {
                let names: Vec<_> = report.failed().map(|c| c.check.as_str()).collect();
                return Err(CliError::Failure(format!("failed checks: {}", names.join(", "))));
            }
        }
        Command::Fit { counts, constants } => {
            let report = commands::fit(&config, counts, constants)?;
            report.write_csv(std::io::stdout().lock())?;
            for line in report.verdict_lines() {
                println!("# {line}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
