use std::f64::consts::PI;

use serde::Deserialize;
use spectra_core::angular::{basis_params, chi_eval, AngularCase, AngularPotentialParams};
use spectra_core::assembly::{
    abm_level_from_gamma, abm_potential_map, abm_radial, abm_spectrum, bound_state, scattering_state,
    special_bound_psi, special_scattering_psi, CompleteState, SolutionSpaceDescriptor,
};
use spectra_core::par;
use spectra_core::radial::{RadialPotential, ScatteringOptions, Summation};
use spectra_core::{Result as CoreResult, SpectraError};

use super::spectrum::Potential;
use super::Context;
use crate::config::BranchName;
use crate::error::{CliError, CliResult};
use crate::output::{gnuplot_preamble, real, Csv};

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    #[default]
    Bound,
    Scattering,
    /// Superposition states of the `Ĉ = C = 0`, `C₀ ≠ 0` case.
    SpecialBound,
    SpecialScattering,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveConfig {
    #[serde(default)]
    pub state: StateKind,
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
    #[serde(default)]
    pub k: usize,
    #[serde(default)]
    pub n: usize,
    #[serde(default)]
    pub m: i32,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub b: f64,
    #[serde(default = "one")]
    pub zeta: f64,
    #[serde(default)]
    pub j: usize,
    #[serde(default)]
    pub eta: f64,
    #[serde(default = "half")]
    pub e: f64,
    #[serde(default = "one")]
    pub lambda: f64,
    #[serde(default = "hundred")]
    pub terms: usize,
    /// Plain partial sums instead of the smooth window.
    #[serde(default)]
    pub partial_sums: bool,
    #[serde(default = "r_max")]
    pub r_max: f64,
    #[serde(default = "r_points")]
    pub r_points: usize,
    #[serde(default = "theta_points")]
    pub theta_points: usize,
}

fn one() -> f64 {
    1.0
}
fn minus_one() -> f64 {
    -1.0
}
fn half() -> f64 {
    0.5
}
fn hundred() -> usize {
    100
}
fn r_max() -> f64 {
    20.0
}
fn r_points() -> usize {
    200
}
fn theta_points() -> usize {
    48
}

/// `(|ψ|², R, Θ)` at one grid node; `R` and `Θ` are `None` for
/// superpositions that do not factor.
type Sample = (f64, Option<f64>, Option<f64>);
type Eval = Box<dyn Fn(f64, f64) -> CoreResult<Sample> + Sync>;

fn single(state: CompleteState) -> Eval {
    Box::new(move |r, theta| {
        let rad = state.radial.value(r)?;
        let ang = state.angular.value(theta.cos().clamp(-1.0, 1.0))?;
        let psi_sq = (rad * ang / r).powi(2) / (2.0 * PI);
        Ok((psi_sq, Some(rad), Some(ang)))
    })
}

fn build(cfg: &WaveConfig) -> CliResult<(Eval, Option<f64>, bool)> {
    let opts = ScatteringOptions {
        k_max: cfg.terms,
        summation: if cfg.partial_sums {
            Summation::Partial
        } else {
            ScatteringOptions::default().summation
        },
    };
    if cfg.potential == Potential::Abm {
        if cfg.state != StateKind::Bound {
            return Err(CliError::config("the abm potential only has bound states here"));
        }
        let level = match cfg.gamma {
            Some(g) => abm_level_from_gamma(cfg.k, cfg.n, cfg.m, g, cfg.z, cfg.zeta, cfg.b)?,
            None => abm_spectrum(cfg.k, cfg.n, cfg.m, cfg.z, cfg.zeta, cfg.a, cfg.b)?,
        };
        let pot = abm_potential_map(cfg.a, cfg.b, cfg.zeta, cfg.m, cfg.z).angular()?;
        let bp = basis_params(AngularCase::Diagonal, &pot, cfg.m, false, None)?;
        let n = cfg.n;
        let eval: Eval = Box::new(move |r, theta| {
            let rad = abm_radial(&level, r)?;
            let ang = chi_eval(n, &bp, theta.cos().clamp(-1.0, 1.0))?;
            Ok(((rad * ang / r).powi(2) / (2.0 * PI), Some(rad), Some(ang)))
        });
        return Ok((eval, Some(level.energy), true));
    }
    match cfg.state {
        StateKind::Bound | StateKind::Scattering => {
            let pot = AngularPotentialParams::new(cfg.c_hat, cfg.c, cfg.c0)?;
            let radial = match cfg.potential {
                Potential::Oscillator => RadialPotential::Oscillator { omega: cfg.omega },
                _ => RadialPotential::Coulomb { z: cfg.z },
            };
            let desc = SolutionSpaceDescriptor::new(pot, radial, cfg.gamma, cfg.branch.into(), cfg.free)?;
            let bound = cfg.state == StateKind::Bound;
            let state = if bound {
                bound_state(&desc, cfg.k, cfg.n, cfg.m)?
            } else {
                scattering_state(&desc, cfg.e, cfg.lambda, opts, cfg.n, cfg.m)?
            };
            let energy = state.energy;
            Ok((single(state), Some(energy), bound))
        }
        StateKind::SpecialBound => {
            let (k, j, eta, z, c0) = (cfg.k, cfg.j, cfg.eta, cfg.z, cfg.c0);
            let (_, energy) = special_bound_psi(k, j, eta, z, c0, (1.0, 1.0, 0.0))?;
            let phis = phi_rule(j);
            let eval: Eval = Box::new(move |r, theta| {
                let mut acc = 0.0;
                for &phi in &phis {
                    acc += special_bound_psi(k, j, eta, z, c0, (r, theta, phi))?.0.norm_sqr();
                }
                Ok((acc / phis.len() as f64, None, None))
            });
            Ok((eval, Some(energy), true))
        }
        StateKind::SpecialScattering => {
            let (j, eta, z, c0, e, lambda) = (cfg.j, cfg.eta, cfg.z, cfg.c0, cfg.e, cfg.lambda);
            special_scattering_psi(j, eta, z, c0, e, lambda, (1.0, 1.0, 0.0), opts)?;
            let phis = phi_rule(j);
            let eval: Eval = Box::new(move |r, theta| {
                let mut acc = 0.0;
                for &phi in &phis {
                    acc += special_scattering_psi(j, eta, z, c0, e, lambda, (r, theta, phi), opts)?.norm_sqr();
                }
                Ok((acc / phis.len() as f64, None, None))
            });
            Ok((eval, Some(e), false))
        }
    }
}

/// Uniform φ nodes that average `|Σ_{|m|≤j} c_m e^{imφ}|²` exactly.
fn phi_rule(j: usize) -> Vec<f64> {
    let n = 2 * j + 1;
    (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
}

pub struct WaveOutput {
    pub csv: Csv,
    pub script: String,
}

pub fn run(ctx: &Context, cfg: &WaveConfig) -> CliResult<WaveOutput> {
    if !(cfg.r_max > 0.0) || cfg.r_points < 1 || cfg.theta_points < 1 {
        return Err(CliError::config("need r_max > 0, r_points >= 1 and theta_points >= 1"));
    }
    let (eval, energy, bound) = build(cfg)?;
    let dr = cfg.r_max / cfg.r_points as f64;
    let dt = PI / cfg.theta_points as f64;
    let rs: Vec<f64> = (0..cfg.r_points).map(|i| (i as f64 + 0.5) * dr).collect();
    let thetas: Vec<f64> = (0..cfg.theta_points).map(|i| (i as f64 + 0.5) * dt).collect();
    let rows = par::map(&rs, |&r| -> CoreResult<Vec<Sample>> {
        thetas.iter().map(|&t| eval(r, t)).collect()
    });
    let rows: Vec<_> = rows.into_iter().collect::<CoreResult<_>>()?;
    if rows.iter().flatten().any(|v| !v.0.is_finite()) {
        return Err(SpectraError::NonFinite("wavefunction grid contains a non-finite value".into()).into());
    }

    let factored = rows.first().and_then(|row| row.first()).is_some_and(|v| v.1.is_some());
    let mut columns: Vec<String> = ["r", "theta", "psi_sq"].iter().map(|s| s.to_string()).collect();
    if factored {
        columns.push("radial".into());
        columns.push("angular".into());
    }
    let mut csv = Csv::new("wavefunction", columns);
    csv.comment("units: atomic units; psi_sq is |psi|^2 averaged over phi; radial is R(r) with psi = R Theta Phi / r");
    csv.comment("grid: midpoint nodes (norm uses cell-exact r^2 and sin(theta) weights) r_i = (i + 1/2) r_max / r_points, theta_j = (j + 1/2) pi / theta_points");
    csv.comments(ctx.echo.clone());
    if let Some(e) = energy {
        csv.comment(format!("energy: {}", real(e)));
    }
    if bound {
        // cell-exact integrals of r² and sin θ around each midpoint node
        let wt = |t: f64| 2.0 * t.sin() * (0.5 * dt).sin();
        let wr = |r: f64| (r * r + dr * dr / 12.0) * dr;
        let norm: f64 = 2.0
            * PI
            * rows
                .iter()
                .zip(&rs)
                .map(|(row, &r)| wr(r) * row.iter().zip(&thetas).map(|(v, &t)| v.0 * wt(t)).sum::<f64>())
                .sum::<f64>();
        csv.comment(format!("norm_on_grid: {}", real(norm)));
    }
    for (i, (row, r)) in rows.iter().zip(&rs).enumerate() {
        if i > 0 {
            csv.block_break();
        }
        for (v, t) in row.iter().zip(&thetas) {
            let mut cells = vec![real(*r), real(*t), real(v.0)];
            if let (Some(rad), Some(ang)) = (v.1, v.2) {
                cells.push(real(rad));
                cells.push(real(ang));
            }
            csv.row(cells);
        }
    }
    let mut script = gnuplot_preamble("wavefunction.svg", "r", "theta");
    script.push_str("set pm3d map\nset cblabel '|psi|^2'\nsplot 'wavefunction.csv' using 1:2:3 with pm3d notitle\n");
    Ok(WaveOutput { csv, script })
}
