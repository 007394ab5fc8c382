use std::f64::consts::PI;
use std::path::PathBuf;

use serde::Deserialize;
use spectra_core::angular::{HChain, QChain};
use spectra_core::orthopoly::{quadrature_from_recursion, JacobiChain, JacobiParams};
use spectra_core::recursion::{
    asymptotic_coeffs, default_epsilon, density_cf, density_quadrature_on, kernel_peak, linspace, ChainClass,
    ConstantChain, RecursionCoeffs, TabulatedChain, TerminatorParams, KERNEL_REACH,
};

use super::Context;
use crate::config::OneOrMany;
use crate::error::{CliError, CliResult};
use crate::output::{gnuplot_preamble, real, Csv};

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    #[default]
    Q,
    H,
    Jacobi,
    Constant,
    File,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    #[serde(default)]
    pub chain: ChainKind,
    #[serde(default)]
    pub mu: f64,
    #[serde(default)]
    pub nu: f64,
    pub sigma: Option<OneOrMany>,
    pub tau: Option<OneOrMany>,
    #[serde(default)]
    pub a: f64,
    #[serde(default = "half")]
    pub b: f64,
    pub path: Option<PathBuf>,
    /// Highest coefficient index kept, so `coefficients + 1` pairs are used.
    #[serde(default = "fifty")]
    pub coefficients: usize,
    pub epsilon: Option<f64>,
    pub bandwidth: Option<f64>,
    pub z_min: Option<f64>,
    pub z_max: Option<f64>,
    #[serde(default = "points")]
    pub points: usize,
    #[serde(default = "agreement")]
    pub agreement_tol: f64,
    #[serde(default = "asymptotic_n")]
    pub asymptotic_n: usize,
}

fn half() -> f64 {
    0.5
}
fn fifty() -> usize {
    50
}
fn points() -> usize {
    2001
}
fn agreement() -> f64 {
    5e-2
}
fn asymptotic_n() -> usize {
    200
}

/// One density trace: the tabulated chain and, when known, the infinite one
/// used for the asymptotic report.
struct Trace {
    label: String,
    table: TabulatedChain,
    full: Option<Box<dyn RecursionCoeffs>>,
}

fn traces(cfg: &DensityConfig) -> CliResult<Vec<Trace>> {
    let len = cfg.coefficients + 1;
    if cfg.coefficients < 1 {
        return Err(CliError::config("coefficients must be at least 1"));
    }
    let jp = || JacobiParams::new(cfg.mu, cfg.nu);
    let make = |label: String, chain: Box<dyn RecursionCoeffs>| Trace {
        label,
        table: TabulatedChain::from_chain(&*chain, len),
        full: Some(chain),
    };
    Ok(match cfg.chain {
        ChainKind::Q => {
            let taus = cfg
                .tau
                .as_ref()
                .ok_or_else(|| CliError::config("chain = \"q\" needs tau"))?;
            let p = jp()?;
            taus.values()
                .into_iter()
                .map(|t| {
                    make(
                        format!("tau={t}"),
                        Box::new(QChain {
                            tau_sq: t * t,
                            params: p,
                        }),
                    )
                })
                .collect()
        }
        ChainKind::H => {
            let sigmas = cfg
                .sigma
                .as_ref()
                .ok_or_else(|| CliError::config("chain = \"h\" needs sigma"))?;
            let p = jp()?;
            sigmas
                .values()
                .into_iter()
                .map(|s| make(format!("sigma={s}"), Box::new(HChain { sigma: s, params: p })))
                .collect()
        }
        ChainKind::Jacobi => vec![make("jacobi".into(), Box::new(JacobiChain::new(jp()?)))],
        ChainKind::Constant => {
            if !(cfg.b > 0.0) {
                return Err(CliError::config(format!("constant chain needs b > 0, got {}", cfg.b)));
            }
            vec![make("constant".into(), Box::new(ConstantChain { a: cfg.a, b: cfg.b }))]
        }
        ChainKind::File => {
            let path = cfg
                .path
                .as_ref()
                .ok_or_else(|| CliError::config("chain = \"file\" needs path"))?;
            let (a, b) = read_coefficients(path)?;
            if a.len() < len {
                return Err(CliError::config(format!(
                    "{} holds {} coefficient pairs, {len} requested",
                    path.display(),
                    a.len()
                )));
            }
            let table = TabulatedChain::new(a[..len].to_vec(), b[..len].to_vec())?;
            vec![Trace {
                label: "file".into(),
                table,
                full: None,
            }]
        }
    })
}

/// Reads `a,b` pairs, one per line, with `#` comments.
fn read_coefficients(path: &PathBuf) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)?;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let field = |j: usize| -> CliResult<f64> {
            rec.get(j)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| CliError::config(format!("{} line {}: expected two numbers", path.display(), i + 1)))
        };
        a.push(field(0)?);
        b.push(field(1)?);
    }
    Ok((a, b))
}

pub struct DensityOutput {
    pub csv: Csv,
    pub script: String,
}

pub fn run(ctx: &Context, cfg: &DensityConfig) -> CliResult<DensityOutput> {
    if cfg.points < 2 {
        return Err(CliError::config("points must be at least 2"));
    }
    if let Some(e) = cfg.epsilon {
        if !(e > 0.0) {
            return Err(CliError::config(format!("epsilon must be positive, got {e}")));
        }
    }
    let traces = traces(cfg)?;
    let depth = cfg.coefficients;
    let size = cfg.coefficients + 1;

    struct Prepared {
        t: TerminatorParams,
        eps: f64,
        h: f64,
        nodes: Vec<f64>,
        weights: Vec<f64>,
    }
    let mut prepared = Vec::new();
    for tr in &traces {
        let t = TerminatorParams::local(&tr.table, depth);
        let eps = cfg.epsilon.unwrap_or_else(|| default_epsilon(t));
        let h = cfg.bandwidth.unwrap_or(PI * eps * kernel_peak());
        if !(h > 0.0) {
            return Err(CliError::config(format!("bandwidth must be positive, got {h}")));
        }
        let (nodes, weights) = quadrature_from_recursion(&tr.table, size)?;
        prepared.push(Prepared {
            t,
            eps,
            h,
            nodes,
            weights,
        });
    }
    let lo = cfg.z_min.unwrap_or_else(|| {
        prepared
            .iter()
            .map(|p| p.nodes[0] - KERNEL_REACH * p.h)
            .fold(f64::INFINITY, f64::min)
    });
    let hi = cfg.z_max.unwrap_or_else(|| {
        prepared
            .iter()
            .map(|p| p.nodes[p.nodes.len() - 1] + KERNEL_REACH * p.h)
            .fold(f64::NEG_INFINITY, f64::max)
    });
    if !(hi > lo) {
        return Err(CliError::config(format!("empty z range [{lo}, {hi}]")));
    }
    let grid = linspace(lo, hi, cfg.points);

    let mut columns = vec!["z".to_string()];
    for tr in &traces {
        columns.push(format!("cf[{}]", tr.label));
        columns.push(format!("quad[{}]", tr.label));
    }
    let mut csv = Csv::new("density", columns);
    csv.comment("units: dimensionless spectral variable z; rho normalized to unit mass");
    csv.comments(ctx.echo.clone());

    let mut series = Vec::new();
    for (tr, p) in traces.iter().zip(&prepared) {
        let cf = density_cf(&tr.table, &grid, depth, p.t, Some(p.eps))?;
        let quad = density_quadrature_on(&tr.table, size, p.h, &grid)?;
        let sup = cf
            .rho
            .iter()
            .zip(&quad.rho)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let mass = tr.table.total_mass();
        let below: f64 = p
            .nodes
            .iter()
            .zip(&p.weights)
            .filter(|(z, _)| **z < 0.0)
            .fold(0.0, |acc, (_, w)| acc + w / mass);
        let (band_lo, band_hi) = p.t.band();
        csv.comment(format!(
            "trace {}: terminator a_inf = {}, b_inf = {}, band = [{}, {}], epsilon = {}, bandwidth = {}",
            tr.label,
            real(p.t.a_inf),
            real(p.t.b_inf),
            real(band_lo),
            real(band_hi),
            real(p.eps),
            real(p.h)
        ));
        csv.comment(format!(
            "trace {}: mass cf = {}, mass quad = {}, cf mass below 0 = {}, node weight below 0 = {}, clipped points = {}, pole points = {}",
            tr.label,
            real(cf.mass()),
            real(quad.mass()),
            real(cf.mass_below(0.0)),
            real(below),
            cf.diagnostics.clipped_points,
            cf.diagnostics.pole_points.len()
        ));
        csv.comment(format!("trace {}: sup |cf - quad| = {}", tr.label, real(sup)));
        if sup > cfg.agreement_tol {
            let msg = format!(
                "estimator disagreement for {}: sup |cf - quad| = {} exceeds {}",
                tr.label,
                real(sup),
                real(cfg.agreement_tol)
            );
            eprintln!("warning: {msg}");
            csv.comment(format!("warning: {msg}"));
        }
        if let Some(full) = &tr.full {
            if cfg.asymptotic_n >= 10 {
                let rep = asymptotic_coeffs(&**full, cfg.asymptotic_n)?;
                let class = match rep.class {
                    ChainClass::BoundedBand { .. } => "bounded band",
                    ChainClass::Unbounded => "unbounded",
                };
                csv.comment(format!(
                    "trace {}: asymptotics N = {}: a_N = {}, b_N = {}, a_N/N^2 = {}, b_N/N^2 = {}, class = {class}",
                    tr.label,
                    rep.n,
                    real(rep.a_n),
                    real(rep.b_n),
                    real(rep.a_over_n2),
                    real(rep.b_over_n2)
                ));
            }
        }
        series.push((cf.rho, quad.rho));
    }
    for (i, z) in grid.iter().enumerate() {
        let mut row = vec![real(*z)];
        for (cf, quad) in &series {
            row.push(real(cf[i]));
            row.push(real(quad[i]));
        }
        csv.row(row);
    }

    let mut script = gnuplot_preamble("density.svg", "z", "rho(z)");
    script.push_str(&format!(
        "plot for [i=2:{}] 'density.csv' using 1:i with lines lw 1.5\n",
        1 + 2 * traces.len()
    ));
    Ok(DensityOutput { csv, script })
}
