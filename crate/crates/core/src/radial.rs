//! Radial sector: the Laguerre basis `ξ_n`, the Coulomb tridiagonal
//! representation with its bound spectrum and Meixner–Pollaczek scattering
//! series, and the three-dimensional oscillator.

use crate::error::{Result, SpectraError};
use crate::orthopoly::{
    gauss_laguerre, laguerre_deriv, laguerre_deriv2, laguerre_eval, laguerre_eval_all, ln_laguerre_norm, ln_mp_weight,
    mp_eval_all, LaguerreParams, MPParams,
};
use crate::special::{ln_gamma, smooth_window};

/// Radial potential `V_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialPotential {
    /// `V_r = Z/r`.
    Coulomb { z: f64 },
    /// `V_r = ω⁴r²/2`.
    Oscillator { omega: f64 },
}

impl RadialPotential {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RadialPotential::Coulomb { z } if !z.is_finite() => Err(SpectraError::domain(format!(
                "Coulomb coupling must be finite, got {z}"
            ))),
            RadialPotential::Oscillator { omega } if !(omega > 0.0 && omega.is_finite()) => Err(SpectraError::domain(
                format!("oscillator frequency must be > 0, got {omega}"),
            )),
            _ => Ok(()),
        }
    }
}

/// Which root `γ^±` of `2E_θ = γ(γ+1)` labels the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialKind {
    Coulomb,
    Oscillator,
}

/// How the basis variable depends on `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    /// `y = λr`
    Linear,
    /// `y = (λr)²`
    Quadratic,
}

/// Parameters of `ξ_n(y) = B_n y^α e^{−y/2} L_n^ν(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialBasisParams {
    pub lambda: f64,
    pub alpha: f64,
    pub nu: f64,
    pub coordinate: Coordinate,
}

impl RadialBasisParams {
    pub fn new(lambda: f64, alpha: f64, nu: f64, coordinate: Coordinate) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(SpectraError::domain(format!("lambda must be > 0, got {lambda}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(SpectraError::domain(format!("alpha must be > 0, got {alpha}")));
        }
        if !(nu > -1.0 && nu.is_finite()) {
            return Err(SpectraError::domain(format!("nu must be > -1, got {nu}")));
        }
        Ok(RadialBasisParams {
            lambda,
            alpha,
            nu,
            coordinate,
        })
    }

    /// Coulomb basis: `y = λr`, `ν = 2α − 1`.
    pub fn coulomb(alpha: f64, lambda: f64) -> Result<Self> {
        Self::new(lambda, alpha, 2.0 * alpha - 1.0, Coordinate::Linear)
    }

    /// Oscillator basis: `y = (λr)²`, `ν = 2α − ½`.
    pub fn oscillator(alpha: f64, lambda: f64) -> Result<Self> {
        Self::new(lambda, alpha, 2.0 * alpha - 0.5, Coordinate::Quadratic)
    }

    fn y(&self, r: f64) -> f64 {
        match self.coordinate {
            Coordinate::Linear => self.lambda * r,
            Coordinate::Quadratic => (self.lambda * r).powi(2),
        }
    }

    fn ln_b(&self, n: usize) -> f64 {
        let lead = match self.coordinate {
            Coordinate::Linear => self.lambda.ln(),
            Coordinate::Quadratic => (2.0 * self.lambda).ln(),
        };
        0.5 * (lead - ln_laguerre_norm(n, LaguerreParams { nu: self.nu }))
    }
}

/// `ξ_n(r)`, with `B_n = √(λ n!/Γ(n+ν+1))` for the linear coordinate and
/// `√(2λ n!/Γ(n+ν+1))` for the quadratic one.
pub fn xi_eval(n: usize, bp: &RadialBasisParams, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(SpectraError::domain(format!("r must be > 0, got {r}")));
    }
    let y = bp.y(r);
    let envelope = (bp.ln_b(n) + bp.alpha * y.ln() - 0.5 * y).exp();
    Ok(envelope * laguerre_eval(n, LaguerreParams { nu: bp.nu }, y))
}

/// `α` from `γ` and the branch.
///
/// Coulomb: `α = γ + 1` (plus, `γ ≥ 0`) or `α = −γ` (minus, `γ ≤ −1`).
/// Oscillator: half of those.
pub fn alpha_from_gamma(gamma: f64, branch: Branch, kind: RadialKind) -> Result<f64> {
    let twice = match branch {
        Branch::Plus if gamma >= 0.0 => gamma + 1.0,
        Branch::Minus if gamma <= -1.0 => -gamma,
        _ => {
            return Err(SpectraError::domain(format!(
                "gamma = {gamma} is not valid for the {branch:?} branch"
            )))
        }
    };
    if !twice.is_finite() {
        return Err(SpectraError::domain(format!("gamma must be finite, got {gamma}")));
    }
    Ok(match kind {
        RadialKind::Coulomb => twice,
        RadialKind::Oscillator => twice / 2.0,
    })
}

/// Entry `(k, k′)` of `(2/λ²)⟨ξ_k|H_r − E|ξ_{k′}⟩` for `V_r = Z/r`.
pub fn coulomb_matrix(k: usize, kp: usize, alpha: f64, lambda: f64, e: f64, z: f64) -> f64 {
    let t = 2.0 * e / (lambda * lambda);
    if k == kp {
        2.0 * (k as f64 + alpha) * (0.25 - t) + 2.0 * z / lambda
    } else if k.abs_diff(kp) == 1 {
        let hi = k.max(kp) as f64;
        (0.25 + t) * (hi * (hi + 2.0 * alpha - 1.0)).sqrt()
    } else {
        0.0
    }
}

/// The same entry computed by applying the radial operator to `ξ_{k′}` and
/// integrating with Gauss–Laguerre in `y = λr`.
pub fn coulomb_matrix_by_quadrature(k: usize, kp: usize, alpha: f64, lambda: f64, e: f64, z: f64) -> Result<f64> {
    let bp = RadialBasisParams::coulomb(alpha, lambda)?;
    let lp = LaguerreParams::new(bp.nu)?;
    let (ys, ws) = gauss_laguerre((k + kp) / 2 + 6, lp)?;
    let l2 = lambda * lambda;
    let sum: f64 = ys
        .iter()
        .zip(&ws)
        .map(|(&y, &w)| {
            let (l, d1, d2) = (
                laguerre_eval(kp, lp, y),
                laguerre_deriv(kp, lp, y),
                laguerre_deriv2(kp, lp, y),
            );
            // y·(H − E) applied to y^α e^{−y/2} L, divided by the envelope
            let op =
                -0.5 * l2 * (y * d2 + (2.0 * alpha - y) * d1 + (0.25 * y - alpha) * l) + z * lambda * l - e * y * l;
            w * laguerre_eval(k, lp, y) * op
        })
        .sum();
    Ok(sum * (bp.ln_b(k) + bp.ln_b(kp)).exp() / lambda * 2.0 / l2)
}

/// Discrete Coulomb level: `λ_k = −2Z/(k+α)`, `E_k = −Z²/(2(k+α)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundLevel {
    pub k: usize,
    pub alpha: f64,
    pub energy: f64,
    pub lambda_k: f64,
}

/// Level `k` for `V_r = Z/r`, `Z < 0`, at which both off-diagonal and
/// diagonal entries of [`coulomb_matrix`] vanish.
pub fn coulomb_bound_spectrum(k: usize, gamma: f64, branch: Branch, z: f64) -> Result<BoundLevel> {
    if !(z < 0.0) {
        return Err(SpectraError::NoBoundStates(format!(
            "bound states need an attractive Coulomb coupling (Z < 0), got Z = {z}"
        )));
    }
    let alpha = alpha_from_gamma(gamma, branch, RadialKind::Coulomb)?;
    Ok(level_from_alpha(k, alpha, z))
}

pub(crate) fn level_from_alpha(k: usize, alpha: f64, z: f64) -> BoundLevel {
    let q = k as f64 + alpha;
    BoundLevel {
        k,
        alpha,
        energy: -z * z / (2.0 * q * q),
        lambda_k: -2.0 * z / q,
    }
}

/// Unit-norm bound radial function `ξ_k(λ_k r)/√(2k+ν+1)` for a level.
///
/// The linear Laguerre basis is not orthonormal; its diagonal overlap is
/// `2k+ν+1`, which the division removes.
pub fn coulomb_bound_radial(level: &BoundLevel, r: f64) -> Result<f64> {
    let bp = RadialBasisParams::coulomb(level.alpha, level.lambda_k)?;
    Ok(xi_eval(level.k, &bp, r)? / (2.0 * level.k as f64 + bp.nu + 1.0).sqrt())
}

/// How the scattering series is summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Summation {
    /// Term `k` is weighted by a smooth window of `k/(K+1)` that equals 1 up
    /// to `plateau` and rolls off to 0 at 1.
    Smooth { plateau: f64 },
    /// Plain partial sum `Σ_{k ≤ K}`.
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringOptions {
    pub k_max: usize,
    pub summation: Summation,
}

impl Default for ScatteringOptions {
    fn default() -> Self {
        ScatteringOptions {
            k_max: 100,
            summation: Summation::Smooth { plateau: 0.25 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringDiagnostics {
    pub terms: usize,
    /// Magnitude of the unweighted term `k = K`.
    pub last_term: f64,
    /// MP angle `φ = arccos[(E − λ²/8)/(E + λ²/8)]`.
    pub phi: f64,
    /// MP argument `−Z/√(2E)`.
    pub z_mp: f64,
    /// `𝒩 = √(λ|Z|ρ(z)/(2E)^{3/2})`.
    pub normalization: f64,
    /// Scale `c(λ)` that makes `series / c(λ)` independent of `λ`.
    pub abel_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringValue {
    /// `𝒩 · series`.
    pub value: f64,
    /// The bare (weighted) series.
    pub series: f64,
    pub diagnostics: ScatteringDiagnostics,
}

impl ScatteringValue {
    /// Series divided by `c(λ)`; basis-scale independent in the limit.
    pub fn abel_normalized(&self) -> f64 {
        self.series / self.diagnostics.abel_scale
    }
}

/// Scattering radial solution at `E > 0` for `V_r = Z/r`:
/// `Σ_k Γ(k+1)/Γ(k+2α) P_k^α(z; φ) y^α e^{−y/2} L_k^{2α−1}(y)`, `y = λr`.
pub fn coulomb_scattering_radial(
    e: f64,
    gamma: f64,
    branch: Branch,
    lambda: f64,
    z: f64,
    r: f64,
    opts: ScatteringOptions,
) -> Result<ScatteringValue> {
    Ok(coulomb_scattering_grid(e, gamma, branch, lambda, z, &[r], opts)?.remove(0))
}

/// Grid version of [`coulomb_scattering_radial`]; the MP polynomials are
/// evaluated once and reused across radii.
pub fn coulomb_scattering_grid(
    e: f64,
    gamma: f64,
    branch: Branch,
    lambda: f64,
    z: f64,
    radii: &[f64],
    opts: ScatteringOptions,
) -> Result<Vec<ScatteringValue>> {
    if !(e > 0.0 && e.is_finite()) {
        return Err(SpectraError::domain(format!(
            "scattering needs E > 0, got {e}; use the bound-state path"
        )));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(SpectraError::domain(format!("lambda must be > 0, got {lambda}")));
    }
    if !z.is_finite() {
        return Err(SpectraError::domain(format!("Z must be finite, got {z}")));
    }
    if opts.k_max < 1 {
        return Err(SpectraError::domain("truncation index K must be >= 1"));
    }
    if let Summation::Smooth { plateau } = opts.summation {
        if !(0.0..1.0).contains(&plateau) {
            return Err(SpectraError::domain(format!(
                "window plateau must lie in [0, 1), got {plateau}"
            )));
        }
    }
    let mu = alpha_from_gamma(gamma, branch, RadialKind::Coulomb)?;
    let q = lambda * lambda / 8.0;
    let phi = ((e - q) / (e + q)).acos();
    assert!(
        phi > 0.0 && phi < std::f64::consts::PI,
        "MP angle outside (0, pi) for E > 0"
    );
    let z_mp = -z / (2.0 * e).sqrt();
    let mp = MPParams::new(mu, phi)?;
    let poly = mp_eval_all(opts.k_max, mp, z_mp)?;
    let ln_rho = ln_mp_weight(mp, z_mp)?;
    let normalization = (0.5 * ((lambda * z.abs()).ln() + ln_rho - 1.5 * (2.0 * e).ln())).exp();
    let abel_scale = (mu * lambda.ln() - 2.0 * mu * (2.0 * (phi / 2.0).sin()).ln()
        + (std::f64::consts::PI - phi) * z_mp
        - ln_gamma(2.0 * mu))
    .exp();
    let kk = opts.k_max;
    let coeff: Vec<f64> = (0..=kk)
        .map(|k| {
            let w = match opts.summation {
                Summation::Smooth { plateau } => smooth_window(k as f64 / (kk as f64 + 1.0), plateau),
                Summation::Partial => 1.0,
            };
            (ln_gamma(k as f64 + 1.0) - ln_gamma(k as f64 + 2.0 * mu)).exp() * poly[k] * w
        })
        .collect();
    let lp = LaguerreParams::new(2.0 * mu - 1.0)?;
    let values = crate::par::map(radii, |&r| {
        if !(r > 0.0 && r.is_finite()) {
            return Err(SpectraError::domain(format!("r must be > 0, got {r}")));
        }
        let y = lambda * r;
        let env = (mu * y.ln() - 0.5 * y).exp();
        let lag = laguerre_eval_all(kk, lp, y);
        let series = env * coeff.iter().zip(&lag).map(|(c, l)| c * l).sum::<f64>();
        if !series.is_finite() {
            return Err(SpectraError::NonFinite(format!("scattering series at r = {r}")));
        }
        let last_term =
            ((ln_gamma(kk as f64 + 1.0) - ln_gamma(kk as f64 + 2.0 * mu)).exp() * poly[kk] * env * lag[kk]).abs();
        Ok(ScatteringValue {
            value: normalization * series,
            series,
            diagnostics: ScatteringDiagnostics {
                terms: kk + 1,
                last_term,
                phi,
                z_mp,
                normalization,
                abel_scale,
            },
        })
    });
    values.into_iter().collect()
}

/// Entry `(k, k′)` of the oscillator matrix in the quadratic basis.
pub fn oscillator_matrix(k: usize, kp: usize, nu: f64, lambda: f64, omega: f64, e: f64) -> f64 {
    let ratio = (omega / lambda).powi(4);
    if k == kp {
        (2.0 * k as f64 + nu + 1.0) * (ratio + 1.0) - 2.0 * e / (lambda * lambda)
    } else if k.abs_diff(kp) == 1 {
        let hi = k.max(kp) as f64;
        -(ratio - 1.0) * (hi * (hi + nu)).sqrt()
    } else {
        0.0
    }
}

/// `(2/λ²)⟨ξ_k|H_r − E|ξ_{k′}⟩` for `V_r = ω⁴r²/2`, by Gauss–Laguerre in `y = (λr)²`.
pub fn oscillator_matrix_by_quadrature(k: usize, kp: usize, nu: f64, lambda: f64, omega: f64, e: f64) -> Result<f64> {
    let alpha = (nu + 0.5) / 2.0;
    let bp = RadialBasisParams::oscillator(alpha, lambda)?;
    let lp = LaguerreParams::new(nu)?;
    let (ys, ws) = gauss_laguerre((k + kp) / 2 + 6, lp)?;
    let l2 = lambda * lambda;
    let w4 = omega.powi(4);
    let sum: f64 = ys
        .iter()
        .zip(&ws)
        .map(|(&y, &w)| {
            let (l, d1, d2) = (
                laguerre_eval(kp, lp, y),
                laguerre_deriv(kp, lp, y),
                laguerre_deriv2(kp, lp, y),
            );
            let op = -0.5 * l2 * (4.0 * y * d2 + (8.0 * alpha - 4.0 * y + 2.0) * d1 + (y - 4.0 * alpha - 1.0) * l)
                + 0.5 * w4 * y / l2 * l
                - e * l;
            w * laguerre_eval(k, lp, y) * op
        })
        .sum();
    Ok(sum * (bp.ln_b(k) + bp.ln_b(kp)).exp() / (2.0 * lambda) * 2.0 / l2)
}

/// Oscillator level `E_k = ω²(2k + ν + 1)`: `ω²(2k+γ+3/2)` on the plus
/// branch, `ω²(2k−γ+½)` on the minus branch.
pub fn oscillator_spectrum(k: usize, gamma: f64, branch: Branch, omega: f64) -> Result<f64> {
    RadialPotential::Oscillator { omega }.validate()?;
    let alpha = alpha_from_gamma(gamma, branch, RadialKind::Oscillator)?;
    Ok(omega * omega * (2.0 * k as f64 + 2.0 * alpha + 0.5))
}

/// Unit-norm oscillator bound radial function `ξ_k` at `λ = ω`.
pub fn oscillator_bound_radial(k: usize, gamma: f64, branch: Branch, omega: f64, r: f64) -> Result<f64> {
    RadialPotential::Oscillator { omega }.validate()?;
    let alpha = alpha_from_gamma(gamma, branch, RadialKind::Oscillator)?;
    xi_eval(k, &RadialBasisParams::oscillator(alpha, omega)?, r)
}
