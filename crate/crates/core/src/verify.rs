//! Self-verification suites: every check compares a closed form against an
//! independent computation and reports the residual next to its tolerance.

use std::str::FromStr;

use crate::angular::{
    basis_params, h_poly_all, matrix_element, matrix_element_by_quadrature, q_poly_all, AngularCase,
    AngularPotentialParams,
};
use crate::error::{Result, SpectraError};
use crate::orthopoly::{
    gauss_jacobi, gauss_laguerre, jacobi_eval_all, jacobi_norm, laguerre_eval_all, laguerre_norm,
    quadrature_from_recursion, JacobiParams, LaguerreParams,
};
use crate::radial::{
    coulomb_bound_spectrum, coulomb_matrix, coulomb_matrix_by_quadrature, oscillator_matrix,
    oscillator_matrix_by_quadrature, oscillator_spectrum, Branch,
};
use crate::recursion::{
    density_cf, generate_polynomials, linspace, ConstantChain, RecursionCoeffs, TabulatedChain, TerminatorParams,
};

/// One verification result.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Full,
    Tridiagonality,
    Orthogonality,
    Limits,
    Diagonalization,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Full => "full",
            Suite::Tridiagonality => "tridiagonality",
            Suite::Orthogonality => "orthogonality",
            Suite::Limits => "limits",
            Suite::Diagonalization => "diagonalization",
        }
    }
}

impl FromStr for Suite {
    type Err = SpectraError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "full" => Suite::Full,
            "tridiagonality" => Suite::Tridiagonality,
            "orthogonality" => Suite::Orthogonality,
            "limits" => Suite::Limits,
            "diagonalization" => Suite::Diagonalization,
            other => return Err(SpectraError::domain(format!("unknown verification suite '{other}'"))),
        })
    }
}

/// Options for a verification run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VerifyOptions {
    /// Added to every closed-form band entry before comparison. Zero in
    /// normal runs; a nonzero value is a negative control.
    pub perturbation: f64,
}

/// Runs a suite and returns its checks in a fixed order.
pub fn run(suite: Suite, opts: VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Full | Suite::Tridiagonality) {
        tridiagonality(&mut out, opts)?;
    }
    if matches!(suite, Suite::Full | Suite::Orthogonality) {
        orthogonality(&mut out)?;
    }
    if matches!(suite, Suite::Full | Suite::Limits) {
        limits(&mut out)?;
    }
    if matches!(suite, Suite::Full | Suite::Diagonalization) {
        diagonalization(&mut out)?;
    }
    Ok(out)
}

const BAND_TOL: f64 = 1e-8;
const OFF_TOL: f64 = 1e-10;
const SIZE: usize = 9;

/// Max band mismatch (relative to `1 + |formula|`) and max off-band magnitude.
fn band_residuals<F, O>(formula: F, oracle: O, delta: f64) -> Result<(f64, f64)>
where
    F: Fn(usize, usize) -> f64,
    O: Fn(usize, usize) -> Result<f64>,
{
    let (mut band, mut off) = (0.0f64, 0.0f64);
    for i in 0..SIZE {
        for j in 0..SIZE {
            let o = oracle(i, j)?;
            if i.abs_diff(j) <= 1 {
                let f = formula(i, j) + delta;
                band = band.max((o - f).abs() / (1.0 + f.abs()));
            } else {
                off = off.max(o.abs());
            }
        }
    }
    Ok((band, off))
}

fn push_pair(out: &mut Vec<Check>, name: &str, (band, off): (f64, f64)) {
    out.push(Check::new(format!("{name}/band"), band, BAND_TOL));
    out.push(Check::new(format!("{name}/off_band"), off, OFF_TOL));
}

fn tridiagonality(out: &mut Vec<Check>, opts: VerifyOptions) -> Result<()> {
    let d = opts.perturbation;
    for (i, &(ch, c, c0, m, g)) in [(1.3, 0.4, 0.7, 1, 2.3), (0.2, -0.1, -1.1, 2, 1.7)].iter().enumerate() {
        let pot = AngularPotentialParams::new(ch, c, c0)?;
        let bp = basis_params(AngularCase::A, &pot, m, false, None)?;
        let r = band_residuals(
            |a, b| matrix_element(&bp, a, b, g, c0),
            |a, b| matrix_element_by_quadrature(&bp, a, b, g, c0),
            d,
        )?;
        push_pair(out, &format!("angular_case_a/{i}"), r);
    }
    for (case, label) in [(AngularCase::B, "angular_case_b"), (AngularCase::C, "angular_case_c")] {
        for (i, &(ch, c, m, free, g)) in [(1.3, 0.4, 1, 0.8, 2.3), (0.5, 0.9, 0, 1.7, 3.1)].iter().enumerate() {
            let sign = if case == AngularCase::C { -1.0 } else { 1.0 };
            let pot = AngularPotentialParams::new(ch, sign * c, 0.0)?;
            let bp = basis_params(case, &pot, m, false, Some(free))?;
            let r = band_residuals(
                |a, b| matrix_element(&bp, a, b, g, 0.0),
                |a, b| matrix_element_by_quadrature(&bp, a, b, g, 0.0),
                d,
            )?;
            push_pair(out, &format!("{label}/{i}"), r);
        }
    }
    for (i, &(alpha, lambda, e, z)) in [(1.7, 1.3, -0.2, -1.1), (3.0, 0.6, 0.4, 0.8)].iter().enumerate() {
        let r = band_residuals(
            |a, b| coulomb_matrix(a, b, alpha, lambda, e, z),
            |a, b| coulomb_matrix_by_quadrature(a, b, alpha, lambda, e, z),
            d,
        )?;
        push_pair(out, &format!("coulomb/{i}"), r);
    }
    for (i, &(nu, lambda, omega, e)) in [(1.9, 1.2, 0.9, 2.3), (0.5, 0.7, 1.4, 0.3)].iter().enumerate() {
        let r = band_residuals(
            |a, b| oscillator_matrix(a, b, nu, lambda, omega, e),
            |a, b| oscillator_matrix_by_quadrature(a, b, nu, lambda, omega, e),
            d,
        )?;
        push_pair(out, &format!("oscillator/{i}"), r);
    }
    Ok(())
}

fn identity_residual(gram: impl Fn(usize, usize) -> f64, size: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..size {
        for j in 0..size {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram(i, j) - target).abs());
        }
    }
    worst
}

fn orthogonality(out: &mut Vec<Check>) -> Result<()> {
    let n = 16;
    let p = JacobiParams::new(0.6, 1.4)?;
    let (xs, ws) = gauss_jacobi(n + 2, p)?;
    let vals: Vec<Vec<f64>> = xs.iter().map(|&x| jacobi_eval_all(n - 1, p, x)).collect();
    let r = identity_residual(
        |i, j| {
            vals.iter().zip(&ws).map(|(v, w)| w * v[i] * v[j]).sum::<f64>()
                / (jacobi_norm(i, p) * jacobi_norm(j, p)).sqrt()
        },
        n,
    );
    out.push(Check::new("jacobi_orthonormality", r, 1e-10));

    let lp = LaguerreParams::new(1.3)?;
    let (ys, wl) = gauss_laguerre(n + 2, lp)?;
    let vals: Vec<Vec<f64>> = ys.iter().map(|&y| laguerre_eval_all(n - 1, lp, y)).collect();
    let r = identity_residual(
        |i, j| {
            vals.iter().zip(&wl).map(|(v, w)| w * v[i] * v[j]).sum::<f64>()
                / (laguerre_norm(i, lp) * laguerre_norm(j, lp)).sqrt()
        },
        n,
    );
    out.push(Check::new("laguerre_orthonormality", r, 1e-10));

    let q = crate::angular::QChain {
        tau_sq: 1.0,
        params: JacobiParams::new(1.0, 1.5)?,
    };
    out.push(Check::new(
        "q_chain_discrete_orthonormality",
        discrete_orthonormality(&q, n)?,
        1e-8,
    ));
    let c = ConstantChain { a: 0.3, b: 0.8 };
    out.push(Check::new(
        "constant_chain_discrete_orthonormality",
        discrete_orthonormality(&c, n)?,
        1e-8,
    ));
    Ok(())
}

/// Max deviation from the identity of `Σ w_i p_n(x_i) p_m(x_i)` for the
/// chain's orthonormal polynomials under its own Gauss rule.
pub fn discrete_orthonormality<C: RecursionCoeffs + ?Sized>(c: &C, size: usize) -> Result<f64> {
    let (xs, ws) = quadrature_from_recursion(c, size + 1)?;
    let mass = c.total_mass();
    let f0 = mass.sqrt().recip();
    let vals: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| generate_polynomials(c, f0, x, size - 1))
        .collect::<Result<_>>()?;
    Ok(identity_residual(
        |i, j| vals.iter().zip(&ws).map(|(v, w)| w * v[i] * v[j]).sum::<f64>(),
        size,
    ))
}

/// `max_{n ≤ 10, z}|H_n^σ(z) − P_n(z)|` on an 81-point grid over `[−1, 1]`.
pub fn h_limit_error(sigma: f64, p: JacobiParams) -> f64 {
    linspace(-1.0, 1.0, 81)
        .iter()
        .map(|&z| {
            let h = h_poly_all(10, sigma, p, z);
            let j = jacobi_eval_all(10, p, z);
            h.iter().zip(&j).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// `max_{n ≤ 6, z}|Q_n^τ(−τ²(1+z)/2) − P_n(z)|` on an 81-point grid.
pub fn q_limit_error(tau: f64, p: JacobiParams) -> Result<f64> {
    let mut worst = 0.0f64;
    for z in linspace(-1.0, 1.0, 81) {
        let q = q_poly_all(6, tau * tau, p, -tau * tau * (1.0 + z) / 2.0)?;
        let j = jacobi_eval_all(6, p, z);
        for (a, b) in q.iter().zip(&j) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

/// Sup-norm error of the continued-fraction density of a constant chain
/// against the semicircle, over the inner 90% of the band.
pub fn semicircle_error(a: f64, b: f64, points: usize) -> Result<f64> {
    let c = ConstantChain { a, b };
    let t = TerminatorParams::new(a, b)?;
    let grid = linspace(a - 1.8 * b, a + 1.8 * b, points);
    let est = density_cf(&c, &grid, 20, t, None)?;
    Ok(grid
        .iter()
        .zip(&est.rho)
        .map(|(&z, &r)| {
            let exact = (4.0 * b * b - (z - a).powi(2)).max(0.0).sqrt() / (2.0 * std::f64::consts::PI * b * b);
            (r - exact).abs()
        })
        .fold(0.0, f64::max))
}

fn limits(out: &mut Vec<Check>) -> Result<()> {
    let p = JacobiParams::new(1.0, 1.5)?;
    let errs: Vec<f64> = [1e-1, 1e-2, 1e-3, 1e-4].iter().map(|&s| h_limit_error(s, p)).collect();
    let mono = if errs.windows(2).all(|w| w[0] > w[1]) { 0.0 } else { 1.0 };
    out.push(Check::new("h_to_jacobi/monotone", mono, 0.0));
    // first-order approach: a tenfold smaller σ shrinks the error about tenfold
    out.push(Check::new("h_to_jacobi/rate_ratio", errs[3] / errs[2], 0.2));
    let errs: Vec<f64> = [10.0, 100.0, 1000.0]
        .iter()
        .map(|&t| q_limit_error(t, p))
        .collect::<Result<_>>()?;
    let mono = if errs[0] > errs[1] && errs[1] > errs[2] {
        0.0
    } else {
        1.0
    };
    out.push(Check::new("q_to_jacobi/monotone", mono, 0.0));
    out.push(Check::new("q_to_jacobi/tau_1e3", errs[2], 1e-2));
    out.push(Check::new(
        "semicircle/sup_inner_90",
        semicircle_error(0.3, 0.8, 801)?,
        1e-3,
    ));
    let tab = TabulatedChain::from_chain(&crate::orthopoly::JacobiChain::new(p), 60);
    let (a, b) = (tab.a(59), tab.b(58));
    out.push(Check::new(
        "jacobi_chain/band_limit",
        (a.abs()).max((b - 0.5).abs()),
        1e-2,
    ));
    Ok(())
}

fn diagonalization(out: &mut Vec<Check>) -> Result<()> {
    let mut worst = 0.0f64;
    for &g in &[0.0, 0.7, 2.0, 3.4] {
        for &z in &[-0.5, -1.0, -2.3] {
            for k in 0..=10 {
                for (branch, gg) in [(Branch::Plus, g), (Branch::Minus, -g - 1.0)] {
                    let lv = coulomb_bound_spectrum(k, gg, branch, z)?;
                    worst = worst
                        .max(coulomb_matrix(k, k, lv.alpha, lv.lambda_k, lv.energy, z).abs())
                        .max(coulomb_matrix(k, k + 1, lv.alpha, lv.lambda_k, lv.energy, z).abs());
                }
            }
        }
    }
    out.push(Check::new("coulomb_levels", worst, 1e-12));
    let mut worst = 0.0f64;
    for &g in &[0.0, 0.7, 2.0] {
        for &w in &[0.5, 1.0, 1.7] {
            for k in 0..=10 {
                let e = oscillator_spectrum(k, g, Branch::Plus, w)?;
                let nu = g + 1.0 - 0.5;
                worst = worst
                    .max(oscillator_matrix(k, k, nu, w, w, e).abs())
                    .max(oscillator_matrix(k, k + 1, nu, w, w, e).abs());
            }
        }
    }
    out.push(Check::new("oscillator_levels", worst, 1e-12));
    let mut worst = 0.0f64;
    for big_n in 1..=5usize {
        for k in 0..big_n {
            let lv = coulomb_bound_spectrum(k, (big_n - 1 - k) as f64, Branch::Plus, -1.0)?;
            worst = worst.max((lv.energy + 0.5 / (big_n * big_n) as f64).abs());
        }
    }
    out.push(Check::new("hydrogen_spectrum", worst, 1e-14));
    Ok(())
}
