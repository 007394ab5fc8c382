//! Angular sector: the Jacobi-weighted basis `χ_n`, the three tridiagonal
//! cases, the H and Q polynomial families, quantum-number bookkeeping and
//! the angular series.
//!
//! Throughout, `x = cos θ` and the separation constant is stored through
//! `γ` with `2E_θ = γ(γ+1)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, SpectraError};
use crate::orthopoly::{
    gauss_jacobi, jacobi_deriv, jacobi_deriv2, jacobi_eval_all, jacobi_norm, jacobi_offdiag, jacobi_recurrence,
    ln_jacobi_norm, JacobiParams,
};
use crate::recursion::RecursionCoeffs;

/// Potential parameters `(Ĉ, C, C₀)` of the angular term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularPotentialParams {
    pub c_hat: f64,
    pub c: f64,
    pub c0: f64,
}

impl AngularPotentialParams {
    pub fn new(c_hat: f64, c: f64, c0: f64) -> Result<Self> {
        for (name, v) in [("C_hat", c_hat), ("C", c), ("C0", c0)] {
            if !v.is_finite() {
                return Err(SpectraError::domain(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(AngularPotentialParams { c_hat, c, c0 })
    }

    /// `m² + Ĉ + C`.
    pub fn radicand_plus(&self, m: i32) -> f64 {
        (m as f64).powi(2) + self.c_hat + self.c
    }

    /// `m² + Ĉ − C`.
    pub fn radicand_minus(&self, m: i32) -> f64 {
        (m as f64).powi(2) + self.c_hat - self.c
    }
}

/// Which tridiagonal (or diagonal) structure the angular basis carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AngularCase {
    /// `α = μ/2, β = ν/2`, with the `C₀ cos θ` coupling.
    A,
    /// `α = μ/2, β = (ν+1)/2`, `ν` free.
    B,
    /// `α = (μ+1)/2, β = ν/2`, `μ` free (mirror of B).
    C,
    /// Case A with `C₀ = 0`, where the basis diagonalizes `H_θ`.
    Diagonal,
}

/// Basis parameters of `χ_n(x) = A_n (1−x)^α (1+x)^β P_n^{(μ,ν)}(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularBasisParams {
    pub case: AngularCase,
    pub mu: f64,
    pub nu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub m: i32,
    /// True when a negative root in `(−1, 0)` was selected.
    pub special_branch: bool,
    /// `C₁ = m² + Ĉ − C` for case B, `C₂ = m² + Ĉ + C` for case C.
    pub coupling: Option<f64>,
}

impl AngularBasisParams {
    pub fn jacobi(&self) -> JacobiParams {
        JacobiParams {
            mu: self.mu,
            nu: self.nu,
        }
    }
}

/// Smallest integer strictly greater than `√v`.
fn first_above_sqrt(v: f64) -> u32 {
    (v.abs().sqrt() + 1e-12).floor() as u32 + 1
}

/// The threshold `M` of the `|m|` range for a case.
pub fn threshold_m(case: AngularCase, pot: &AngularPotentialParams) -> u32 {
    let (p, q) = (pot.c_hat + pot.c, pot.c_hat - pot.c);
    match case {
        AngularCase::A | AngularCase::Diagonal => first_above_sqrt(p.abs().max(q.abs())),
        AngularCase::B => first_above_sqrt(p),
        AngularCase::C => first_above_sqrt(q),
    }
}

/// First admissible `|m|`: 0 when the governing radicand constant is
/// non-negative, `M` otherwise.
pub fn first_m(case: AngularCase, pot: &AngularPotentialParams) -> u32 {
    let (p, q) = (pot.c_hat + pot.c, pot.c_hat - pot.c);
    let governing = match case {
        AngularCase::A | AngularCase::Diagonal => p.max(q),
        AngularCase::B => p,
        AngularCase::C => q,
    };
    if governing >= 0.0 {
        0
    } else {
        threshold_m(case, pot)
    }
}

fn root(radicand: f64, m: i32, sign: char, special: bool) -> Result<(f64, bool)> {
    if radicand < 0.0 {
        return Err(SpectraError::ImaginaryParameter { m, sign, radicand });
    }
    if special && radicand > 0.0 && radicand < 1.0 {
        Ok((-radicand.sqrt(), true))
    } else {
        Ok((radicand.sqrt(), false))
    }
}

fn check_free(free: Option<f64>, which: &str) -> Result<f64> {
    match free {
        Some(v) if v.is_finite() && v > -1.0 => Ok(v),
        Some(v) => Err(SpectraError::domain(format!(
            "free parameter {which} must be > -1, got {v}"
        ))),
        None => Err(SpectraError::domain(format!(
            "free parameter {which} is required for this case"
        ))),
    }
}

/// Basis parameters for azimuthal number `m`.
///
/// `free` is the caller's free parameter: `ν` for case B, `μ` for case C;
/// it is ignored for A and Diagonal. With `allow_special`, at `|m| = M − 1`
/// a radicand in `(0, 1)` selects the negative root.
pub fn basis_params(
    case: AngularCase,
    pot: &AngularPotentialParams,
    m: i32,
    allow_special: bool,
    free: Option<f64>,
) -> Result<AngularBasisParams> {
    let big_m = threshold_m(case, pot);
    let special = allow_special && big_m >= 1 && m.unsigned_abs() == big_m - 1;
    let (rp, rm) = (pot.radicand_plus(m), pot.radicand_minus(m));
    match case {
        AngularCase::A | AngularCase::Diagonal => {
            let (mu, s1) = root(rp, m, '+', special)?;
            let (nu, s2) = root(rm, m, '-', special)?;
            Ok(AngularBasisParams {
                case,
                mu,
                nu,
                alpha: mu / 2.0,
                beta: nu / 2.0,
                m,
                special_branch: s1 || s2,
                coupling: None,
            })
        }
        AngularCase::B => {
            let nu = check_free(free, "nu")?;
            let (mu, s) = root(rp, m, '+', special)?;
            Ok(AngularBasisParams {
                case,
                mu,
                nu,
                alpha: mu / 2.0,
                beta: (nu + 1.0) / 2.0,
                m,
                special_branch: s,
                coupling: Some(rm),
            })
        }
        AngularCase::C => {
            let mu = check_free(free, "mu")?;
            let (nu, s) = root(rm, m, '-', special)?;
            Ok(AngularBasisParams {
                case,
                mu,
                nu,
                alpha: (mu + 1.0) / 2.0,
                beta: nu / 2.0,
                m,
                special_branch: s,
                coupling: Some(rp),
            })
        }
    }
}

/// Admissible `(n, m)` pairs for a given `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularQuantumBook {
    pub case: AngularCase,
    pub gamma: f64,
    /// Threshold `M` of the `|m|` range.
    pub m_threshold: u32,
    /// First admissible `|m|` (0 or `M`).
    pub m_first: u32,
    /// Largest admitted `|m|`, if any.
    pub j: Option<u32>,
    /// `N_m`, the largest admitted `n` for each admitted `m`.
    pub n_max: BTreeMap<i32, usize>,
    /// Free parameter used for case B/C.
    pub free: Option<f64>,
}

impl AngularQuantumBook {
    pub fn is_empty(&self) -> bool {
        self.n_max.is_empty()
    }

    /// `(n, m)` pairs in ascending `n`, then ascending `m`.
    pub fn entries(&self) -> Vec<(usize, i32)> {
        let mut v: Vec<(usize, i32)> = self
            .n_max
            .iter()
            .flat_map(|(&m, &nm)| (0..=nm).map(move |n| (n, m)))
            .collect();
        v.sort();
        v
    }

    pub fn admits(&self, n: usize, m: i32) -> bool {
        self.n_max.get(&m).is_some_and(|&nm| n <= nm)
    }

    pub fn len(&self) -> usize {
        self.n_max.values().map(|n| n + 1).sum()
    }
}

const GATE_SLACK: f64 = 1e-12;

/// Real-valued upper bound on `n` for basis `bp` at `γ`. `n` is admitted iff
/// `n ≤ bound` (up to a 1e−12 slack).
pub fn n_bound(bp: &AngularBasisParams, gamma: f64) -> f64 {
    let g = (gamma + 0.5).abs();
    match bp.case {
        AngularCase::A | AngularCase::Diagonal => g - (bp.mu + bp.nu + 1.0) / 2.0,
        AngularCase::B | AngularCase::C => g - (bp.mu + bp.nu) / 2.0 - 1.0,
    }
}

/// Builds the book of admissible quantum numbers. Special-branch solutions
/// are never included.
pub fn allowed_quantum_numbers(
    case: AngularCase,
    pot: &AngularPotentialParams,
    gamma: f64,
    free: Option<f64>,
) -> Result<AngularQuantumBook> {
    if !gamma.is_finite() {
        return Err(SpectraError::domain(format!("gamma must be finite, got {gamma}")));
    }
    if matches!(case, AngularCase::B | AngularCase::C) {
        check_free(free, if case == AngularCase::B { "nu" } else { "mu" })?;
    }
    let m_threshold = threshold_m(case, pot);
    let m_first = first_m(case, pot);
    let reach = (gamma + 0.5).abs() + (pot.c_hat.abs() + pot.c.abs()).sqrt() + 2.0;
    let m_last = m_first as i64 + reach.ceil() as i64;
    let mut n_max = BTreeMap::new();
    for am in m_first as i64..=m_last {
        for m in if am == 0 {
            vec![0]
        } else {
            vec![-(am as i32), am as i32]
        } {
            let Ok(bp) = basis_params(case, pot, m, false, free) else {
                continue;
            };
            let bound = n_bound(&bp, gamma);
            if bound >= -GATE_SLACK {
                n_max.insert(m, (bound + GATE_SLACK).floor() as usize);
            }
        }
    }
    let j = n_max.keys().map(|m| m.unsigned_abs()).max();
    Ok(AngularQuantumBook {
        case,
        gamma,
        m_threshold,
        m_first,
        j,
        n_max,
        free,
    })
}

fn endpoint_factor(exponent: f64, base: f64, which: &str) -> Result<f64> {
    if base > 0.0 {
        return Ok(exponent * base.ln());
    }
    if exponent > 0.0 {
        Ok(f64::NEG_INFINITY)
    } else if exponent == 0.0 {
        Ok(0.0)
    } else {
        Err(SpectraError::domain(format!(
            "basis function is unbounded at x = {which} (exponent {exponent})"
        )))
    }
}

/// `χ_0(x), …, χ_n(x)` for basis `bp`.
pub fn chi_eval_all(n: usize, bp: &AngularBasisParams, x: f64) -> Result<Vec<f64>> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(SpectraError::domain(format!("x must lie in [-1, 1], got {x}")));
    }
    let p = bp.jacobi();
    let lw = endpoint_factor(bp.alpha, 1.0 - x, "+1")? + endpoint_factor(bp.beta, 1.0 + x, "-1")?;
    let polys = jacobi_eval_all(n, p, x);
    Ok(polys
        .iter()
        .enumerate()
        .map(|(k, &pk)| {
            if lw == f64::NEG_INFINITY {
                0.0
            } else {
                (lw - 0.5 * ln_jacobi_norm(k, p)).exp() * pk
            }
        })
        .collect())
}

/// `χ_n(x) = A_n (1−x)^α (1+x)^β P_n^{(μ,ν)}(x)`, `A_n = 1/√h_n`.
pub fn chi_eval(n: usize, bp: &AngularBasisParams, x: f64) -> Result<f64> {
    Ok(chi_eval_all(n, bp, x)?[n])
}

/// Entry `(n, n′)` of `⟨χ_n|H_θ − E_θ|χ_{n′}⟩` for case A.
///
/// In the orthonormal case-A basis the `−C₀x/2` term is `−C₀/2` times the
/// orthonormal Jacobi matrix, and the rest is diagonal.
pub fn matrix_elements_case_a(n: usize, np: usize, bp: &AngularBasisParams, gamma: f64, c0: f64) -> f64 {
    let p = bp.jacobi();
    let s = bp.mu + bp.nu;
    if n == np {
        let nf = n as f64;
        -0.5 * c0 * jacobi_recurrence(n, p).0 + 0.5 * (nf + (s + 1.0) / 2.0).powi(2) - 0.5 * (gamma + 0.5).powi(2)
    } else if n.abs_diff(np) == 1 {
        -0.5 * c0 * jacobi_offdiag(n.min(np), p)
    } else {
        0.0
    }
}

fn q_bracket(k: f64, s: f64, tau_sq: f64) -> f64 {
    (k + s / 2.0 + 1.0).powi(2) - tau_sq
}

/// Entry `(n, n′)` of `⟨χ_n|H_θ − E_θ|χ_{n′}⟩` for case B, with `τ² = (γ+½)²`.
pub fn matrix_elements_case_b(n: usize, np: usize, bp: &AngularBasisParams, tau_sq: f64, c1: f64) -> f64 {
    let p = bp.jacobi();
    let s = bp.mu + bp.nu;
    if n == np {
        c1 / 4.0 - ((bp.nu + 1.0) / 2.0).powi(2) + q_recurrence(n, tau_sq, p).0
    } else if n.abs_diff(np) == 1 {
        let k = n.min(np);
        0.5 * jacobi_offdiag(k, p) * q_bracket(k as f64, s, tau_sq)
    } else {
        0.0
    }
}

/// Entry `(n, n′)` for case C, from case B under `μ ↔ ν`, `C₁ → C₂`, `x → −x`.
/// The reflection contributes the sign `(−1)^{n+n′}`.
pub fn matrix_elements_case_c(n: usize, np: usize, bp: &AngularBasisParams, tau_sq: f64, c2: f64) -> f64 {
    let mirrored = AngularBasisParams {
        mu: bp.nu,
        nu: bp.mu,
        ..*bp
    };
    let v = matrix_elements_case_b(n, np, &mirrored, tau_sq, c2);
    if (n + np) % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Matrix element for whichever case `bp` carries.
pub fn matrix_element(bp: &AngularBasisParams, n: usize, np: usize, gamma: f64, c0: f64) -> f64 {
    let tau_sq = (gamma + 0.5).powi(2);
    match bp.case {
        AngularCase::A => matrix_elements_case_a(n, np, bp, gamma, c0),
        AngularCase::Diagonal => matrix_elements_case_a(n, np, bp, gamma, 0.0),
        AngularCase::B => matrix_elements_case_b(n, np, bp, tau_sq, bp.coupling.unwrap_or(0.0)),
        AngularCase::C => matrix_elements_case_c(n, np, bp, tau_sq, bp.coupling.unwrap_or(0.0)),
    }
}

/// The same matrix element computed by applying the differential operator
/// to `χ_{n′}` and integrating against `χ_n` with an exact Gauss–Jacobi rule.
///
/// `(1−x²)(H_θ − E_θ)χ_{n′} / ((1−x)^α(1+x)^β)` is a polynomial, so the
/// integrand is a polynomial times `(1−x)^{2α−1}(1+x)^{2β−1}`.
pub fn matrix_element_by_quadrature(bp: &AngularBasisParams, n: usize, np: usize, gamma: f64, c0: f64) -> Result<f64> {
    let (a, b) = (bp.alpha, bp.beta);
    if a <= 0.0 || b <= 0.0 {
        return Err(SpectraError::domain("quadrature oracle needs alpha, beta > 0"));
    }
    let p = bp.jacobi();
    let m2 = (bp.m as f64).powi(2);
    // m² + Ĉ ± C for the potential implied by the case relations.
    let (p_plus, p_minus, coupling) = match bp.case {
        AngularCase::A => (bp.mu * bp.mu, bp.nu * bp.nu, c0),
        AngularCase::Diagonal => (bp.mu * bp.mu, bp.nu * bp.nu, 0.0),
        AngularCase::B => (bp.mu * bp.mu, bp.coupling.unwrap_or(m2), 0.0),
        AngularCase::C => (bp.coupling.unwrap_or(m2), bp.nu * bp.nu, 0.0),
    };
    let two_e = gamma * (gamma + 1.0);
    let op = |x: f64| {
        let s2 = 1.0 - x * x;
        let pv = crate::orthopoly::jacobi_eval(np, p, x);
        let d1 = jacobi_deriv(np, p, x);
        let d2 = jacobi_deriv2(np, p, x);
        let su = -a * (1.0 + x) + b * (1.0 - x);
        let s2u2 = (a * a - a) * (1.0 + x).powi(2) + (b * b - b) * (1.0 - x).powi(2) - 2.0 * a * b * s2;
        let bracket = s2 * s2 * d2 + 2.0 * s2 * su * d1 + s2u2 * pv
            - 2.0 * x * (s2 * d1 + su * pv)
            - 0.5 * (p_plus * (1.0 + x) + p_minus * (1.0 - x)) * pv
            + coupling * x * s2 * pv
            + two_e * s2 * pv;
        -0.5 * bracket
    };
    let rule = JacobiParams::new(2.0 * a - 1.0, 2.0 * b - 1.0)?;
    let size = (n + np) / 2 + 8;
    let (xs, ws) = gauss_jacobi(size, rule)?;
    let sum: f64 = xs
        .iter()
        .zip(&ws)
        .map(|(&x, &w)| w * crate::orthopoly::jacobi_eval(n, p, x) * op(x))
        .sum();
    Ok(sum * (-0.5 * (ln_jacobi_norm(n, p) + ln_jacobi_norm(np, p))).exp())
}

/// Non-symmetric coefficients `(A_n, B_n, C_n)` of the H recurrence
/// `z H_n = A_n H_n + B_n H_{n−1} + C_n H_{n+1}`.
pub fn h_recurrence(n: usize, sigma: f64, p: JacobiParams) -> (f64, f64, f64) {
    let (a, b, c) = jacobi_recurrence(n, p);
    let s = p.mu + p.nu;
    (a + sigma * (n as f64 + (s + 1.0) / 2.0).powi(2), b, c)
}

/// Non-symmetric coefficients `(A_n, B_n, C_n)` of the Q recurrence.
pub fn q_recurrence(n: usize, tau_sq: f64, p: JacobiParams) -> (f64, f64, f64) {
    let (mu, nu) = (p.mu, p.nu);
    let s = mu + nu;
    let (_, bj, cj) = jacobi_recurrence(n, p);
    let nf = n as f64;
    let a = if n == 0 {
        (nu + 1.0) / (s + 2.0) * q_bracket(0.0, s, tau_sq)
    } else {
        let t = 2.0 * nf + s;
        -nf * (nf + mu) / t + (2.0 * nf * (nf + s + 1.0) + s * (nu + 1.0)) / (t * (t + 2.0)) * q_bracket(nf, s, tau_sq)
    };
    let b = if n == 0 {
        0.0
    } else {
        0.5 * bj * q_bracket(nf - 1.0, s, tau_sq)
    };
    (a, b, 0.5 * cj * q_bracket(nf, s, tau_sq))
}

/// `H_0^σ(z), …, H_n^σ(z)`.
pub fn h_poly_all(n: usize, sigma: f64, p: JacobiParams, z: f64) -> Vec<f64> {
    let mut out = vec![1.0];
    let mut prev = 0.0;
    for k in 0..n {
        let (a, b, c) = h_recurrence(k, sigma, p);
        let next = ((z - a) * out[k] - b * prev) / c;
        prev = out[k];
        out.push(next);
    }
    out
}

/// `H_n^σ(z; μ, ν)`, defined by its recurrence and `H_0 = 1`.
pub fn h_poly(n: usize, sigma: f64, p: JacobiParams, z: f64) -> f64 {
    h_poly_all(n, sigma, p, z)[n]
}

/// `Q_0^τ(z), …, Q_n^τ(z)`. Fails if a forward coefficient `C_k` vanishes.
pub fn q_poly_all(n: usize, tau_sq: f64, p: JacobiParams, z: f64) -> Result<Vec<f64>> {
    let mut out = vec![1.0];
    let mut prev = 0.0;
    for k in 0..n {
        let (a, b, c) = q_recurrence(k, tau_sq, p);
        if c == 0.0 {
            return Err(SpectraError::Structural { what: "C_n", index: k });
        }
        let next = ((z - a) * out[k] - b * prev) / c;
        prev = out[k];
        out.push(next);
    }
    Ok(out)
}

/// `Q_n^τ(z; μ, ν)`, defined by its recurrence and `Q_0 = 1`.
pub fn q_poly(n: usize, tau_sq: f64, p: JacobiParams, z: f64) -> Result<f64> {
    Ok(q_poly_all(n, tau_sq, p, z)?[n])
}

/// Scale `k_n` between the polynomials and the expansion coefficients,
/// `f_n = k_n H_n` (or `k_n Q_n`); `k_n² = 2^{μ+ν+1} / h_n`.
pub fn coefficient_scale(n: usize, p: JacobiParams) -> f64 {
    (0.5 * ((p.mu + p.nu + 1.0) * std::f64::consts::LN_2 - ln_jacobi_norm(n, p))).exp()
}

/// Symmetric (orthonormal) form of the H recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HChain {
    pub sigma: f64,
    pub params: JacobiParams,
}

impl RecursionCoeffs for HChain {
    fn a(&self, n: usize) -> f64 {
        h_recurrence(n, self.sigma, self.params).0
    }
    fn b(&self, n: usize) -> f64 {
        jacobi_offdiag(n, self.params)
    }
    /// `1/f_0²`, the mass under which the expansion coefficients are orthonormal.
    fn total_mass(&self) -> f64 {
        coefficient_scale(0, self.params).powi(-2)
    }
}

/// Symmetric (orthonormal) form of the Q recurrence; `b_n = √(C_n B_{n+1}) ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QChain {
    pub tau_sq: f64,
    pub params: JacobiParams,
}

impl RecursionCoeffs for QChain {
    fn a(&self, n: usize) -> f64 {
        q_recurrence(n, self.tau_sq, self.params).0
    }
    fn b(&self, n: usize) -> f64 {
        let s = self.params.mu + self.params.nu;
        0.5 * jacobi_offdiag(n, self.params) * q_bracket(n as f64, s, self.tau_sq).abs()
    }
    fn total_mass(&self) -> f64 {
        coefficient_scale(0, self.params).powi(-2)
    }
}

/// Polynomial family and parameter of an angular series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesKind {
    /// Case A: `H^σ` polynomials.
    H { sigma: f64 },
    /// Case B or C: `Q^τ` polynomials with `τ² = (γ+½)²`.
    Q { tau_sq: f64 },
}

/// The series kind and spectral variable `z` for case A or B/C at given `γ`.
///
/// Case A: `σ = −1/C₀`, `z = −(γ+½)²/C₀`. Case B: `z = ((ν+1)/2)² − C₁/4`.
/// Case C: `z̃ = ((μ+1)/2)² − C₂/4`.
pub fn series_variable(bp: &AngularBasisParams, gamma: f64, c0: f64) -> Result<(SeriesKind, f64)> {
    let g2 = (gamma + 0.5).powi(2);
    match bp.case {
        AngularCase::A => {
            if c0 == 0.0 {
                return Err(SpectraError::WrongRegime(
                    "case A series needs C0 != 0; use the diagonal representation".into(),
                ));
            }
            Ok((SeriesKind::H { sigma: -1.0 / c0 }, -g2 / c0))
        }
        AngularCase::B => {
            let c1 = bp.coupling.unwrap_or(0.0);
            Ok((SeriesKind::Q { tau_sq: g2 }, ((bp.nu + 1.0) / 2.0).powi(2) - c1 / 4.0))
        }
        AngularCase::C => {
            let c2 = bp.coupling.unwrap_or(0.0);
            Ok((SeriesKind::Q { tau_sq: g2 }, ((bp.mu + 1.0) / 2.0).powi(2) - c2 / 4.0))
        }
        AngularCase::Diagonal => Err(SpectraError::WrongRegime(
            "the diagonal representation has no series".into(),
        )),
    }
}

/// Expansion coefficients `f_0 … f_N` of the angular series in the `χ_n` basis.
///
/// Case C uses `Q(z̃; ν, μ)` with the sign `(−1)^n`.
pub fn series_coefficients(bp: &AngularBasisParams, kind: SeriesKind, n_max: usize, z: f64) -> Result<Vec<f64>> {
    let p = bp.jacobi();
    let polys = match (kind, bp.case) {
        (SeriesKind::H { sigma }, AngularCase::A | AngularCase::Diagonal) => h_poly_all(n_max, sigma, p, z),
        (SeriesKind::Q { tau_sq }, AngularCase::B) => q_poly_all(n_max, tau_sq, p, z)?,
        (SeriesKind::Q { tau_sq }, AngularCase::C) => q_poly_all(n_max, tau_sq, p.swapped(), z)?,
        _ => {
            return Err(SpectraError::WrongRegime(format!(
                "series kind {kind:?} does not match case {:?}",
                bp.case
            )))
        }
    };
    Ok(polys
        .iter()
        .enumerate()
        .map(|(n, q)| {
            let sign = if bp.case == AngularCase::C && n % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            sign * coefficient_scale(n, p) * q
        })
        .collect())
}

/// Value of the angular series `√ρ · Σ_{n ≤ N} f_n(z) χ_n(x)`.
///
/// `rho_value` is the density of the series' polynomial family at `z`
/// (with total mass `1/f_0²`), supplied by the caller.
pub fn theta_series(
    bp: &AngularBasisParams,
    kind: SeriesKind,
    n_max: usize,
    z: f64,
    x: f64,
    rho_value: f64,
) -> Result<f64> {
    if !(rho_value >= 0.0) {
        return Err(SpectraError::domain(format!(
            "density value must be >= 0, got {rho_value}"
        )));
    }
    let coeffs = series_coefficients(bp, kind, n_max, z)?;
    let chis = chi_eval_all(n_max, bp, x)?;
    Ok(rho_value.sqrt() * coeffs.iter().zip(&chis).map(|(c, x)| c * x).sum::<f64>())
}

/// `∫_{−1}^{1} (Σ c_n χ_n)² dx`, exact via a Gauss–Jacobi rule with
/// exponents `(2α, 2β)`.
pub fn series_norm_sq(bp: &AngularBasisParams, coeffs: &[f64]) -> Result<f64> {
    if coeffs.is_empty() {
        return Err(SpectraError::domain("empty coefficient list"));
    }
    let p = bp.jacobi();
    let rule = JacobiParams::new(2.0 * bp.alpha, 2.0 * bp.beta)?;
    let (xs, ws) = gauss_jacobi(coeffs.len() + 2, rule)?;
    let scales: Vec<f64> = (0..coeffs.len()).map(|n| (-0.5 * ln_jacobi_norm(n, p)).exp()).collect();
    Ok(xs
        .iter()
        .zip(&ws)
        .map(|(&x, &w)| {
            let ps = jacobi_eval_all(coeffs.len() - 1, p, x);
            let v: f64 = ps.iter().zip(coeffs).zip(&scales).map(|((pk, c), a)| pk * c * a).sum();
            w * v * v
        })
        .sum())
}

/// Diagonal representation: `χ_n(x; μ_m, ν_m)` with `γ^± = −½ ± (n + (μ_m+ν_m+1)/2)`.
pub fn diagonal_theta(n: usize, m: i32, pot: &AngularPotentialParams, x: f64) -> Result<(f64, f64, f64)> {
    if pot.c0 != 0.0 {
        return Err(SpectraError::WrongRegime(format!(
            "the diagonal representation requires C0 = 0, got {}",
            pot.c0
        )));
    }
    let bp = basis_params(AngularCase::Diagonal, pot, m, false, None)?;
    let (gp, gm) = diagonal_gammas(n, &bp);
    Ok((chi_eval(n, &bp, x)?, gp, gm))
}

/// `(γ⁺, γ⁻)` for the diagonal representation.
pub fn diagonal_gammas(n: usize, bp: &AngularBasisParams) -> (f64, f64) {
    let k = n as f64 + (bp.mu + bp.nu + 1.0) / 2.0;
    (-0.5 + k, -0.5 - k)
}

/// `Φ_m(φ) = e^{imφ}/√(2π)`.
pub fn phi_component(m: i32, phi: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), m as f64 * phi)
}

/// Azimuthal separation constant `E_φ = m²/2`.
pub fn e_phi(m: i32) -> f64 {
    0.5 * (m as f64).powi(2)
}

/// Unit-mass normalization helper for Jacobi weights, used by the chain
/// density conversions.
pub fn jacobi_mass(p: JacobiParams) -> f64 {
    jacobi_norm(0, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::{composite_legendre, gauss_legendre, jacobi_eval};
    use crate::recursion::{asymptotic_coeffs, generate_polynomials};

    fn pot(a: f64, b: f64, c: f64) -> AngularPotentialParams {
        AngularPotentialParams::new(a, b, c).unwrap()
    }

    #[test]
    fn basis_params_examples() {
        let bp = basis_params(AngularCase::A, &pot(0.0, 0.0, 0.0), 3, false, None).unwrap();
        assert_eq!((bp.mu, bp.nu), (3.0, 3.0));
        let bp = basis_params(AngularCase::A, &pot(5.0, 3.0, 0.0), 0, false, None).unwrap();
        assert!((bp.mu - 8f64.sqrt()).abs() < 1e-15 && (bp.nu - 2f64.sqrt()).abs() < 1e-15);
        let p = pot(-2.0, 0.0, 0.0);
        assert_eq!(
            basis_params(AngularCase::A, &p, 1, false, None),
            Err(SpectraError::ImaginaryParameter {
                m: 1,
                sign: '+',
                radicand: -1.0
            })
        );
        assert_eq!(threshold_m(AngularCase::A, &p), 2);
        assert!(basis_params(AngularCase::B, &p, 2, false, None).is_err());
        let b = basis_params(AngularCase::B, &pot(1.0, 2.0, 0.0), 1, false, Some(0.5)).unwrap();
        assert_eq!((b.alpha, b.beta, b.coupling), (1.0, 0.75, Some(0.0)));
        let c = basis_params(AngularCase::C, &pot(1.0, -2.0, 0.0), 1, false, Some(0.5)).unwrap();
        assert_eq!((c.nu, c.alpha, c.beta, c.coupling), (2.0, 0.75, 1.0, Some(0.0)));
    }

    #[test]
    fn special_branch_is_opt_in() {
        let p = pot(0.3, 0.2, 0.0);
        let plain = basis_params(AngularCase::A, &p, 0, false, None).unwrap();
        assert!(!plain.special_branch && plain.mu > 0.0);
        let sp = basis_params(AngularCase::A, &p, 0, true, None).unwrap();
        assert!(sp.special_branch && sp.mu < 0.0 && sp.mu > -1.0 && sp.nu < 0.0);
        let book = allowed_quantum_numbers(AngularCase::A, &p, 2.0, None).unwrap();
        assert!(book.admits(0, 0));
    }

    #[test]
    fn book_examples() {
        let book = allowed_quantum_numbers(AngularCase::A, &pot(0.0, 0.0, 0.0), 2.0, None).unwrap();
        assert_eq!(book.j, Some(2));
        for m in -2..=2 {
            assert_eq!(book.n_max[&m], (2 - m.abs()) as usize);
        }
        assert_eq!(book.n_max.len(), 5);
        let book = allowed_quantum_numbers(AngularCase::A, &pot(0.0, 0.0, 0.0), 0.0, None).unwrap();
        assert_eq!(book.entries(), vec![(0, 0)]);
        let book = allowed_quantum_numbers(AngularCase::A, &pot(-2.0, 0.5, 0.0), 4.0, None).unwrap();
        assert_eq!(book.m_first, book.m_threshold);
        assert!(book.n_max.keys().all(|m| m.unsigned_abs() >= book.m_threshold));
        let empty = allowed_quantum_numbers(AngularCase::B, &pot(0.0, 3.0, 0.0), 0.1, Some(0.5)).unwrap();
        assert!(empty.is_empty() && empty.j.is_none());
        assert!(allowed_quantum_numbers(AngularCase::B, &pot(0.0, 3.0, 0.0), 3.0, None).is_err());
    }

    #[test]
    fn book_is_exactly_the_gate() {
        let p = pot(1.3, 0.4, 0.7);
        for &g in &[0.5, 2.3, 4.1, -5.2] {
            let book = allowed_quantum_numbers(AngularCase::A, &p, g, None).unwrap();
            for m in -8..=8 {
                let bp = basis_params(AngularCase::A, &p, m, false, None).unwrap();
                for n in 0..10 {
                    let lhs = (n as f64 + (bp.mu + bp.nu + 1.0) / 2.0).powi(2);
                    let ok = lhs <= (g + 0.5).powi(2);
                    assert_eq!(book.admits(n, m), ok, "g={g} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn chi_orthonormal_case_a() {
        let bp = basis_params(AngularCase::A, &pot(1.3, 0.4, 0.0), 1, false, None).unwrap();
        let rule = JacobiParams::new(2.0 * bp.alpha, 2.0 * bp.beta).unwrap();
        let (xs, ws) = gauss_jacobi(40, rule).unwrap();
        let p = bp.jacobi();
        for n in 0..=10 {
            for m in 0..=10 {
                let s: f64 = xs
                    .iter()
                    .zip(&ws)
                    .map(|(&x, &w)| {
                        w * jacobi_eval(n, p, x) * jacobi_eval(m, p, x) / (jacobi_norm(n, p) * jacobi_norm(m, p)).sqrt()
                    })
                    .sum();
                assert!((s - if n == m { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
        }
        // direct evaluation agrees with the weighted form
        let x = 0.3;
        let direct = chi_eval(2, &bp, x).unwrap();
        let manual =
            (1.0 - x).powf(bp.alpha) * (1.0 + x).powf(bp.beta) * jacobi_eval(2, p, x) / jacobi_norm(2, p).sqrt();
        assert!((direct - manual).abs() < 1e-14);
    }

    #[test]
    fn chi_trivial_and_symmetry() {
        let bp = basis_params(AngularCase::A, &pot(0.0, 0.0, 0.0), 0, false, None).unwrap();
        assert!((chi_eval(0, &bp, 0.4).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        let bp = AngularBasisParams {
            case: AngularCase::A,
            mu: 1.7,
            nu: 0.6,
            alpha: 0.85,
            beta: 0.3,
            m: 1,
            special_branch: false,
            coupling: None,
        };
        let sw = AngularBasisParams {
            mu: 0.6,
            nu: 1.7,
            alpha: 0.3,
            beta: 0.85,
            ..bp
        };
        for n in 0..6 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let a = chi_eval(n, &sw, -0.35).unwrap();
            let b = sign * chi_eval(n, &bp, 0.35).unwrap();
            assert!((a - b).abs() < 1e-13);
        }
        assert_eq!(chi_eval(3, &bp, 1.0).unwrap(), 0.0);
        let neg = AngularBasisParams { alpha: -0.2, ..bp };
        assert!(chi_eval(1, &neg, 1.0).is_err());
    }

    #[test]
    fn case_a_elements_match_oracle() {
        let p = pot(1.3, 0.4, 0.7);
        let bp = basis_params(AngularCase::A, &p, 1, false, None).unwrap();
        for n in 0..=8 {
            for np in 0..=8 {
                let o = matrix_element_by_quadrature(&bp, n, np, 2.3, 0.7).unwrap();
                let f = matrix_elements_case_a(n, np, &bp, 2.3, 0.7);
                if n.abs_diff(np) <= 1 {
                    assert!((o - f).abs() < 1e-8, "({n},{np}) {o} vs {f}");
                } else {
                    assert!(o.abs() < 1e-10, "({n},{np}) {o}");
                    assert_eq!(f, 0.0);
                }
                assert_eq!(f, matrix_elements_case_a(np, n, &bp, 2.3, 0.7));
            }
        }
    }

    #[test]
    fn case_a_without_coupling_is_diagonal() {
        let bp = basis_params(AngularCase::A, &pot(0.5, 0.2, 0.0), 2, false, None).unwrap();
        assert_eq!(matrix_elements_case_a(2, 3, &bp, 1.0, 0.0), 0.0);
        let s = bp.mu + bp.nu;
        let d = matrix_elements_case_a(2, 2, &bp, 1.0, 0.0);
        assert!((d - (0.5 * (2.0 + (s + 1.0) / 2.0).powi(2) - 0.5 * 1.5f64.powi(2))).abs() < 1e-14);
        let (gp, _) = diagonal_gammas(2, &bp);
        assert!(matrix_elements_case_a(2, 2, &bp, gp, 0.0).abs() < 1e-13);
    }

    #[test]
    fn case_b_and_c_elements_match_oracle() {
        let p = pot(1.3, 0.4, 0.0);
        let b = basis_params(AngularCase::B, &p, 1, false, Some(0.8)).unwrap();
        let c = basis_params(AngularCase::C, &p, 1, false, Some(0.8)).unwrap();
        for bp in [b, c] {
            for n in 0..=8 {
                for np in 0..=8 {
                    let o = matrix_element_by_quadrature(&bp, n, np, 2.3, 0.0).unwrap();
                    let f = matrix_element(&bp, n, np, 2.3, 0.0);
                    if n.abs_diff(np) <= 1 {
                        assert!(
                            (o - f).abs() < 1e-8 * (1.0 + f.abs()),
                            "{:?} ({n},{np}) {o} vs {f}",
                            bp.case
                        );
                    } else {
                        assert!(o.abs() < 1e-10, "{:?} ({n},{np}) {o}", bp.case);
                    }
                }
            }
        }
        // n = n' = 0 closed form for case B
        let (mu, nu) = (b.mu, b.nu);
        let s = mu + nu;
        let tau_sq = 2.8f64.powi(2);
        let c1 = b.coupling.unwrap();
        let expect = c1 / 4.0 - ((nu + 1.0) / 2.0).powi(2)
            + (nu + 1.0) * s / (s * (s + 2.0)) * ((s / 2.0 + 1.0).powi(2) - tau_sq);
        assert!((matrix_elements_case_b(0, 0, &b, tau_sq, c1) - expect).abs() < 1e-13);
    }

    #[test]
    fn h_reduces_to_jacobi() {
        let p = JacobiParams::new(0.7, 1.2).unwrap();
        for &z in &[-0.9, -0.2, 0.4, 0.95] {
            for n in 0..=10 {
                assert_eq!(h_poly(n, 0.0, p, z), jacobi_eval(n, p, z));
            }
        }
        let c = HChain { sigma: 0.0, params: p };
        let j = crate::orthopoly::JacobiChain::new(p);
        for n in 0..20 {
            assert_eq!(c.a(n), j.a(n));
            assert_eq!(c.b(n), j.b(n));
        }
        // first step
        let sigma = 0.3;
        let s = p.mu + p.nu;
        let z = 0.25;
        let a0 = (p.nu - p.mu) / (s + 2.0) + sigma * ((s + 1.0) / 2.0).powi(2);
        assert!((h_poly(1, sigma, p, z) - (z - a0) * (s + 2.0) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn coefficients_satisfy_symmetric_recursion() {
        // f_n = k_n H_n solves the recursion built from the signed matrix.
        let p = pot(0.8, 0.3, 1.4);
        let bp = basis_params(AngularCase::A, &p, 1, false, None).unwrap();
        let gamma = 3.1;
        let (kind, z) = series_variable(&bp, gamma, 1.4).unwrap();
        let f = series_coefficients(&bp, kind, 8, z).unwrap();
        for n in 0..8usize {
            let mut row = 0.0;
            for np in n.saturating_sub(1)..=n + 1 {
                row += matrix_elements_case_a(n, np, &bp, gamma, 1.4) * f[np];
            }
            assert!(row.abs() < 1e-10 * (1.0 + f[n].abs()), "n={n}: {row}");
        }
        let b = basis_params(AngularCase::B, &p, 1, false, Some(0.4)).unwrap();
        let (kind, z) = series_variable(&b, gamma, 0.0).unwrap();
        let f = series_coefficients(&b, kind, 6, z).unwrap();
        for n in 0..6usize {
            let row: f64 = (n.saturating_sub(1)..=n + 1)
                .map(|np| matrix_element(&b, n, np, gamma, 0.0) * f[np])
                .sum();
            assert!(row.abs() < 1e-9 * (1.0 + f[n].abs()), "B n={n}: {row}");
        }
        let c = basis_params(AngularCase::C, &pot(0.8, -0.3, 0.0), 1, false, Some(0.4)).unwrap();
        let (kind, z) = series_variable(&c, gamma, 0.0).unwrap();
        let f = series_coefficients(&c, kind, 6, z).unwrap();
        for n in 0..6usize {
            let row: f64 = (n.saturating_sub(1)..=n + 1)
                .map(|np| matrix_element(&c, n, np, gamma, 0.0) * f[np])
                .sum();
            assert!(row.abs() < 1e-9 * (1.0 + f[n].abs()), "C n={n}: {row}");
        }
    }

    #[test]
    fn chain_polynomials_match_scaled_family() {
        let p = JacobiParams::new(1.0, 1.5).unwrap();
        let chain = QChain {
            tau_sq: 0.25,
            params: p,
        };
        let z = 3.7;
        let f0 = coefficient_scale(0, p);
        let f = generate_polynomials(&chain, f0, z, 10).unwrap();
        let q = q_poly_all(10, 0.25, p, z).unwrap();
        for n in 0..=10 {
            // the orthonormal chain uses |b_n|, so signs may differ
            let expect = coefficient_scale(n, p) * q[n];
            assert!(
                (f[n].abs() - expect.abs()).abs() < 1e-10 * (1.0 + expect.abs()),
                "n={n}"
            );
        }
        assert!((chain.total_mass() * f0 * f0 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn q_limit_approaches_jacobi() {
        let p = JacobiParams::new(1.0, 1.5).unwrap();
        let zs: Vec<f64> = (0..21).map(|i| -1.0 + 0.1 * i as f64).collect();
        let mut prev = f64::INFINITY;
        for &tau in &[10.0f64, 100.0, 1000.0, 10000.0] {
            let mut worst: f64 = 0.0;
            for &z in &zs {
                let arg = -tau * tau * (1.0 + z) / 2.0;
                let q = q_poly_all(6, tau * tau, p, arg).unwrap();
                let j = jacobi_eval_all(6, p, z);
                for n in 0..=6 {
                    worst = worst.max((q[n] - j[n]).abs());
                }
            }
            assert!(worst < prev, "tau={tau}: {worst} >= {prev}");
            prev = worst;
        }
        // the approach is quadratic in 1/τ
        assert!(prev < 1e-4, "{prev}");
    }

    #[test]
    fn chain_asymptotics() {
        let p = JacobiParams::new(1.0, 1.5).unwrap();
        let r = asymptotic_coeffs(&QChain { tau_sq: 1.0, params: p }, 200).unwrap();
        assert!((r.a_over_n2 - 0.5).abs() < 0.025 && (r.b_over_n2 - 0.25).abs() < 0.0125);
        let r = asymptotic_coeffs(&HChain { sigma: 0.2, params: p }, 200).unwrap();
        assert!((r.a_over_n2 - 0.2).abs() < 0.01 && (r.b_n - 0.5).abs() < 0.025);
    }

    #[test]
    fn case_c_mirrors_case_b() {
        let (mu, nu) = (0.9, 1.6);
        let b = AngularBasisParams {
            case: AngularCase::B,
            mu: nu,
            nu: mu,
            alpha: nu / 2.0,
            beta: (mu + 1.0) / 2.0,
            m: 0,
            special_branch: false,
            coupling: Some(2.0),
        };
        let c = AngularBasisParams {
            case: AngularCase::C,
            mu,
            nu,
            alpha: (mu + 1.0) / 2.0,
            beta: nu / 2.0,
            m: 0,
            special_branch: false,
            coupling: Some(2.0),
        };
        let tau_sq = 9.0;
        let (kb, zb) = series_variable(&b, 2.5, 0.0).unwrap();
        let (kc, zc) = series_variable(&c, 2.5, 0.0).unwrap();
        assert_eq!((kb, zb), (kc, zc));
        assert_eq!(kb, SeriesKind::Q { tau_sq });
        for &x in &[-0.7, 0.1, 0.6] {
            let vb = theta_series(&b, kb, 3, zb, -x, 0.3).unwrap();
            let vc = theta_series(&c, kc, 3, zc, x, 0.3).unwrap();
            assert!((vb - vc).abs() < 1e-12, "x={x}: {vb} vs {vc}");
        }
    }

    #[test]
    fn single_term_series() {
        let bp = basis_params(AngularCase::A, &pot(0.0, 0.0, 2.0), 0, false, None).unwrap();
        let (kind, z) = series_variable(&bp, 0.2, 2.0).unwrap();
        let v = theta_series(&bp, kind, 0, z, 0.3, 0.49).unwrap();
        let expect = 0.7 * coefficient_scale(0, bp.jacobi()) * chi_eval(0, &bp, 0.3).unwrap();
        assert!((v - expect).abs() < 1e-15);
    }

    #[test]
    fn series_norm_matches_coefficients_for_case_a() {
        let bp = basis_params(AngularCase::A, &pot(0.4, 0.1, 0.0), 1, false, None).unwrap();
        let c = [0.3, -1.2, 0.7, 0.05];
        let exact: f64 = c.iter().map(|v| v * v).sum();
        assert!((series_norm_sq(&bp, &c).unwrap() - exact).abs() < 1e-12);
    }

    #[test]
    fn diagonal_theta_properties() {
        let p = pot(0.0, 0.0, 0.0);
        let (_, gp, gm) = diagonal_theta(1, 2, &p, 0.2).unwrap();
        assert_eq!((gp, gm), (3.0, -4.0));
        assert!(diagonal_theta(0, 0, &pot(0.0, 0.0, 0.5), 0.1).is_err());
        let (xs, ws) = composite_legendre(40, 60, -1.0, 1.0).unwrap();
        let q = pot(1.1, 0.3, 0.0);
        let norm: f64 = xs
            .iter()
            .zip(&ws)
            .map(|(&x, &w)| w * diagonal_theta(2, 1, &q, x).unwrap().0.powi(2))
            .sum();
        assert!((norm - 1.0).abs() < 1e-8, "{norm}");
    }

    #[test]
    fn phi_component_basics() {
        assert!((phi_component(0, 1.3) - Complex64::new(1.0 / (2.0 * PI).sqrt(), 0.0)).norm() < 1e-15);
        assert!((phi_component(3, 0.4) - phi_component(3, 0.4 + 2.0 * PI)).norm() < 1e-14);
        let (xs, ws) = gauss_legendre(40, 0.0, 2.0 * PI).unwrap();
        let n: f64 = xs
            .iter()
            .zip(&ws)
            .map(|(&p, &w)| w * phi_component(-2, p).norm_sqr())
            .sum();
        assert!((n - 1.0).abs() < 1e-13);
        assert_eq!(e_phi(-3), 4.5);
    }
}
