//! `spectra`: batch front end for the tridiagonal-representation solvers.

mod cmd;
mod config;
mod error;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde::de::DeserializeOwned;

use cmd::Context;
use config::Loaded;
use error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Energy table (k, n, m, gamma, E, lambda).
    Spectrum,
    /// Weight functions of a recursion chain by two estimators.
    Density,
    /// Polynomial values on a z grid.
    Polytable,
    /// |psi|^2 on an (r, theta) grid.
    Wavefunction,
    /// Run the self-verification suites and write a JSON report.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Density => "density",
            Command::Polytable => "polytable",
            Command::Wavefunction => "wavefunction",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "spectra",
    version,
    about = "Spectra, densities and wavefunctions of non-central Coulomb and oscillator problems"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// TOML file with one table per command.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// `key=value` overrides applied to the command's table.
    overrides: Vec<String>,
}

fn load<T: DeserializeOwned>(cli: &Cli) -> CliResult<(Context, T)> {
    let Loaded { table, value } = config::load(&cli.config, cli.command.name(), &cli.overrides)?;
    Ok((
        Context {
            echo: config::echo(&table),
        },
        value,
    ))
}

fn announce(path: &Path) {
    eprintln!("wrote {}", path.display());
}

fn run(cli: &Cli) -> CliResult<()> {
    let out = &cli.out;
    match cli.command {
        Command::Spectrum => {
            let (ctx, cfg) = load(cli)?;
            let csv = cmd::spectrum::run(&ctx, &cfg)?;
            announce(&output::write(out, "spectrum.csv", &csv.render())?);
        }
        Command::Density => {
            let (ctx, cfg) = load(cli)?;
            let res = cmd::density::run(&ctx, &cfg)?;
            announce(&output::write(out, "density.csv", &res.csv.render())?);
            announce(&output::write(out, "density.gp", &res.script)?);
        }
        Command::Polytable => {
            let (ctx, cfg) = load(cli)?;
            let res = cmd::polytable::run(&ctx, &cfg)?;
            announce(&output::write(out, "polytable.csv", &res.csv.render())?);
            announce(&output::write(out, "polytable.gp", &res.script)?);
        }
        Command::Wavefunction => {
            let (ctx, cfg) = load(cli)?;
            let res = cmd::wavefunction::run(&ctx, &cfg)?;
            announce(&output::write(out, "wavefunction.csv", &res.csv.render())?);
            announce(&output::write(out, "wavefunction.gp", &res.script)?);
        }
        Command::Verify => {
            let (_, cfg) = load::<cmd::verify::VerifyConfig>(cli)?;
            let report = cmd::verify::run(&cfg)?;
            let mut json = serde_json::to_string_pretty(&report).map_err(std::io::Error::other)?;
            json.push('\n');
            announce(&output::write(out, "verify.json", &json)?);
            let failed = report.failed();
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!(
                    "FAIL {}: residual {:e} > tolerance {:e}",
                    c.name, c.residual, c.tolerance
                );
            }
            if failed > 0 {
                return Err(CliError::Verification {
                    failed,
                    total: report.checks.len(),
                });
            }
            eprintln!("all {} checks passed", report.checks.len());
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
