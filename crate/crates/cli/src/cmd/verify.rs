use serde::{Deserialize, Serialize};
use spectra_core::verify::{run as run_suite, Suite, VerifyOptions};

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "full")]
    pub suite: String,
    /// Negative control: shifts every closed-form band entry by this amount.
    #[serde(default)]
    pub perturbation: f64,
}

fn full() -> String {
    "full".into()
}

#[derive(Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }
}

pub fn run(cfg: &VerifyConfig) -> CliResult<Report> {
    let suite: Suite = cfg.suite.parse()?;
    if !cfg.perturbation.is_finite() {
        return Err(CliError::config("perturbation must be finite"));
    }
    let checks = run_suite(
        suite,
        VerifyOptions {
            perturbation: cfg.perturbation,
        },
    )?;
    Ok(Report {
        suite: suite.name().to_string(),
        checks: checks
            .into_iter()
            .map(|c| CheckRecord {
                name: c.name,
                residual: c.residual,
                tolerance: c.tolerance,
                pass: c.pass,
            })
            .collect(),
    })
}
