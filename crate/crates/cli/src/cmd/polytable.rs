use serde::Deserialize;
use spectra_core::angular::{h_poly_all, h_recurrence, q_poly_all, q_recurrence};
use spectra_core::orthopoly::{
    hyperbolic_mp_eval_all, jacobi_eval_all, jacobi_recurrence, laguerre_eval_all, mp_eval_all, JacobiParams,
    LaguerreParams, MPParams,
};
use spectra_core::recursion::linspace;

use super::Context;
use crate::error::{CliError, CliResult};
use crate::output::{gnuplot_preamble, real, Csv};

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    #[default]
    Jacobi,
    H,
    Q,
    Laguerre,
    Mp,
    HyperbolicMp,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyConfig {
    #[serde(default)]
    pub family: Family,
    #[serde(default)]
    pub mu: f64,
    #[serde(default)]
    pub nu: f64,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default = "one")]
    pub tau: f64,
    #[serde(default = "half_pi")]
    pub phi: f64,
    #[serde(default = "ten")]
    pub n_max: usize,
    #[serde(default = "minus_one")]
    pub z_min: f64,
    #[serde(default = "one")]
    pub z_max: f64,
    #[serde(default = "points")]
    pub points: usize,
}

fn one() -> f64 {
    1.0
}
fn minus_one() -> f64 {
    -1.0
}
fn half_pi() -> f64 {
    std::f64::consts::FRAC_PI_2
}
fn ten() -> usize {
    10
}
fn points() -> usize {
    101
}

/// Values `p_0..p_N` at `z` plus the family's `(A_n, B_n, C_n)` with
/// `z p_n = A_n p_n + B_n p_{n−1} + C_n p_{n+1}`.
trait Family3 {
    fn values(&self, n: usize, z: f64) -> CliResult<Vec<f64>>;
    fn coeffs(&self, n: usize) -> (f64, f64, f64);
}

struct Jac(JacobiParams);
struct Hf(f64, JacobiParams);
struct Qf(f64, JacobiParams);
struct Lag(LaguerreParams);
struct Mp(MPParams, bool);

impl Family3 for Jac {
    fn values(&self, n: usize, z: f64) -> CliResult<Vec<f64>> {
        Ok(jacobi_eval_all(n, self.0, z))
    }
    fn coeffs(&self, n: usize) -> (f64, f64, f64) {
        jacobi_recurrence(n, self.0)
    }
}

impl Family3 for Hf {
    fn values(&self, n: usize, z: f64) -> CliResult<Vec<f64>> {
        Ok(h_poly_all(n, self.0, self.1, z))
    }
    fn coeffs(&self, n: usize) -> (f64, f64, f64) {
        h_recurrence(n, self.0, self.1)
    }
}

impl Family3 for Qf {
    fn values(&self, n: usize, z: f64) -> CliResult<Vec<f64>> {
        Ok(q_poly_all(n, self.0, self.1, z)?)
    }
    fn coeffs(&self, n: usize) -> (f64, f64, f64) {
        q_recurrence(n, self.0, self.1)
    }
}

impl Family3 for Lag {
    fn values(&self, n: usize, z: f64) -> CliResult<Vec<f64>> {
        Ok(laguerre_eval_all(n, self.0, z))
    }
    fn coeffs(&self, n: usize) -> (f64, f64, f64) {
        let k = n as f64;
        (2.0 * k + self.0.nu + 1.0, -(k + self.0.nu), -(k + 1.0))
    }
}

impl Family3 for Mp {
    fn values(&self, n: usize, z: f64) -> CliResult<Vec<f64>> {
        Ok(if self.1 {
            hyperbolic_mp_eval_all(n, self.0, z)?
        } else {
            mp_eval_all(n, self.0, z)?
        })
    }
    fn coeffs(&self, n: usize) -> (f64, f64, f64) {
        let (c, s) = if self.1 {
            (self.0.phi.cosh(), self.0.phi.sinh())
        } else {
            (self.0.phi.cos(), self.0.phi.sin())
        };
        let k = n as f64;
        let mu = self.0.mu;
        (
            -(k + mu) * c / s,
            (k + 2.0 * mu - 1.0) / (2.0 * s),
            (k + 1.0) / (2.0 * s),
        )
    }
}

/// Largest scaled recurrence residual over `n < N` at one `z`.
fn residual(f: &dyn Family3, z: f64, p: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for n in 0..p.len().saturating_sub(1) {
        let (a, b, c) = f.coeffs(n);
        let prev = if n == 0 { 0.0 } else { p[n - 1] };
        let terms = [a * p[n], b * prev, c * p[n + 1]];
        let lhs = z * p[n];
        let scale = 1.0 + lhs.abs() + terms.iter().map(|t| t.abs()).sum::<f64>();
        worst = worst.max((lhs - terms.iter().sum::<f64>()).abs() / scale);
    }
    worst
}

pub struct PolyOutput {
    pub csv: Csv,
    pub script: String,
}

pub fn run(ctx: &Context, cfg: &PolyConfig) -> CliResult<PolyOutput> {
    if cfg.points < 1 {
        return Err(CliError::config("points must be at least 1"));
    }
    if !(cfg.z_max >= cfg.z_min) {
        return Err(CliError::config(format!(
            "z_max {} is below z_min {}",
            cfg.z_max, cfg.z_min
        )));
    }
    let family: Box<dyn Family3> = match cfg.family {
        Family::Jacobi => Box::new(Jac(JacobiParams::new(cfg.mu, cfg.nu)?)),
        Family::H => Box::new(Hf(cfg.sigma, JacobiParams::new(cfg.mu, cfg.nu)?)),
        Family::Q => Box::new(Qf(cfg.tau * cfg.tau, JacobiParams::new(cfg.mu, cfg.nu)?)),
        Family::Laguerre => Box::new(Lag(LaguerreParams::new(cfg.nu)?)),
        Family::Mp => {
            let p = MPParams::new(cfg.mu, cfg.phi)?;
            mp_eval_all(0, p, 0.0)?;
            Box::new(Mp(p, false))
        }
        Family::HyperbolicMp => {
            let p = MPParams::new(cfg.mu, cfg.phi)?;
            hyperbolic_mp_eval_all(0, p, 0.0)?;
            Box::new(Mp(p, true))
        }
    };
    let mut columns = vec!["z".to_string()];
    columns.extend((0..=cfg.n_max).map(|n| format!("p{n}")));
    columns.push("residual".into());
    let mut csv = Csv::new("polytable", columns);
    csv.comments(ctx.echo.clone());
    for z in linspace(cfg.z_min, cfg.z_max, cfg.points) {
        let p = family.values(cfg.n_max, z)?;
        let mut row = vec![real(z)];
        row.extend(p.iter().map(|v| real(*v)));
        row.push(real(residual(&*family, z, &p)));
        csv.row(row);
    }
    let mut script = gnuplot_preamble("polytable.svg", "z", "p_n(z)");
    script.push_str(&format!(
        "plot for [i=2:{}] 'polytable.csv' using 1:i with lines\n",
        cfg.n_max + 2
    ));
    Ok(PolyOutput { csv, script })
}
