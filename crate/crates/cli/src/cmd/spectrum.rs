use serde::Deserialize;
use spectra_core::angular::AngularPotentialParams;
use spectra_core::assembly::{abm_level_from_gamma, abm_spectrum, bound_state, Regime, SolutionSpaceDescriptor};
use spectra_core::radial::RadialPotential;
use spectra_core::SpectraError;

use super::Context;
use crate::config::BranchName;
use crate::error::{CliError, CliResult};
use crate::output::{real, Csv};

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Potential {
    #[default]
    Coulomb,
    Oscillator,
    /// Coulomb radial term with Aharonov–Bohm flux and a magnetic monopole.
    Abm,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    #[serde(default)]
    pub potential: Potential,
    #[serde(default = "minus_one")]
    pub z: f64,
    #[serde(default = "one")]
    pub omega: f64,
    #[serde(default)]
    pub c_hat: f64,
    #[serde(default)]
    pub c: f64,
    #[serde(default)]
    pub c0: f64,
    #[serde(default)]
    pub branch: BranchName,
    pub gamma: Option<f64>,
    pub free: Option<f64>,
    pub max_level: Option<usize>,
    pub k_max: Option<usize>,
    pub n_max: Option<usize>,
    pub m_max: Option<u32>,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub b: f64,
    #[serde(default = "one")]
    pub zeta: f64,
}

fn one() -> f64 {
    1.0
}
fn minus_one() -> f64 {
    -1.0
}

struct Bounds {
    k: usize,
    n: usize,
    m: i32,
    level: Option<usize>,
}

impl Bounds {
    fn from(cfg: &SpectrumConfig) -> CliResult<Self> {
        let fallback = match cfg.max_level {
            Some(0) => return Err(CliError::config("max_level must be at least 1")),
            Some(l) => l - 1,
            None => 3,
        };
        let m = cfg.m_max.map_or(fallback, |m| m as usize);
        Ok(Bounds {
            k: cfg.k_max.unwrap_or(fallback),
            n: cfg.n_max.unwrap_or(fallback),
            m: i32::try_from(m).map_err(|_| CliError::config("m_max is too large"))?,
            level: cfg.max_level,
        })
    }

    fn keeps(&self, k: usize, n: usize, m: i32) -> bool {
        self.level.is_none_or(|l| k + n + (m.unsigned_abs() as usize) < l)
    }
}

fn columns() -> Vec<String> {
    ["k", "n", "m", "gamma", "energy", "lambda"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

fn push(csv: &mut Csv, k: usize, n: usize, m: i32, gamma: f64, energy: f64, lambda: f64) {
    csv.row(vec![
        k.to_string(),
        n.to_string(),
        m.to_string(),
        real(gamma),
        real(energy),
        real(lambda),
    ]);
}

pub fn run(ctx: &Context, cfg: &SpectrumConfig) -> CliResult<Csv> {
    let bounds = Bounds::from(cfg)?;
    let mut csv = Csv::new("spectrum", columns());
    csv.comment("units: atomic units (hbar = m = 1)");
    csv.comments(ctx.echo.clone());

    if cfg.potential == Potential::Abm {
        for k in 0..=bounds.k {
            for n in 0..=bounds.n {
                for m in -bounds.m..=bounds.m {
                    if !bounds.keeps(k, n, m) {
                        continue;
                    }
                    let level = match cfg.gamma {
                        Some(g) => abm_level_from_gamma(k, n, m, g, cfg.z, cfg.zeta, cfg.b)?,
                        None => abm_spectrum(k, n, m, cfg.z, cfg.zeta, cfg.a, cfg.b)?,
                    };
                    push(&mut csv, k, n, m, level.gamma, level.energy, level.lambda);
                }
            }
        }
        return Ok(csv);
    }

    let pot = AngularPotentialParams::new(cfg.c_hat, cfg.c, cfg.c0)?;
    let radial = match cfg.potential {
        Potential::Oscillator => RadialPotential::Oscillator { omega: cfg.omega },
        _ => RadialPotential::Coulomb { z: cfg.z },
    };
    let desc = SolutionSpaceDescriptor::new(pot, radial, cfg.gamma, cfg.branch.into(), cfg.free)?;
    csv.comment(format!("regime: {:?}", desc.regime));

    if desc.regime == Regime::DiagA {
        if cfg.gamma.is_some() {
            return Err(CliError::config(
                "gamma is fixed by (n, m) in the diagonal regime; remove the gamma key",
            ));
        }
        for k in 0..=bounds.k {
            for n in 0..=bounds.n {
                for m in -bounds.m..=bounds.m {
                    if !bounds.keeps(k, n, m) {
                        continue;
                    }
                    match bound_state(&desc, k, n, m) {
                        Ok(s) => push(&mut csv, k, n, m, s.gamma, s.energy, s.lambda),
                        Err(SpectraError::ImaginaryParameter { .. }) => continue,
                        Err(e) => return Err(e.into()),
                    }
                }
            }
        }
        return Ok(csv);
    }

    let book = desc.book.as_ref().expect("series regimes carry a book");
    if book.is_empty() {
        let msg = format!("no admissible (n, m) at gamma = {}; the table is empty", book.gamma);
        eprintln!("warning: {msg}");
        csv.comment(format!("warning: {msg}"));
        return Ok(csv);
    }
    let entries = book.entries();
    for k in 0..=bounds.k {
        for &(n, m) in &entries {
            let s = bound_state(&desc, k, n, m)?;
            push(&mut csv, k, n, m, s.gamma, s.energy, s.lambda);
        }
    }
    Ok(csv)
}
