//! Complete solutions `ψ(r,θ,φ) = r⁻¹ R(r) Θ(cos θ) Φ(φ)`: regime
//! selection, bound and scattering states, the `Ĉ = C = 0`, `C₀ ≠ 0`
//! superposition and the Aharonov–Bohm plus monopole mapping.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::angular::{
    allowed_quantum_numbers, basis_params, chi_eval_all, coefficient_scale, diagonal_gammas, h_poly_all, phi_component,
    series_coefficients, series_norm_sq, series_variable, AngularBasisParams, AngularCase, AngularPotentialParams,
    AngularQuantumBook,
};
use crate::error::{Result, SpectraError};
use crate::orthopoly::{composite_legendre, gauss_legendre, JacobiParams};
use crate::radial::{
    alpha_from_gamma, coulomb_bound_radial, coulomb_scattering_radial, level_from_alpha, xi_eval, BoundLevel, Branch,
    RadialBasisParams, RadialKind, RadialPotential, ScatteringDiagnostics, ScatteringOptions,
};

/// Parameter regime of the angular sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `C₀ ≠ 0`: tridiagonal case A with the H series.
    C0Nonzero,
    /// `C₀ = 0` with `Ĉ ± C` of equal sign: diagonal representation.
    DiagA,
    /// `C > Ĉ ≥ −C`: tridiagonal case B.
    TridiagB,
    /// `−C > Ĉ ≥ C`: tridiagonal case C.
    TridiagC,
}

impl Regime {
    pub fn angular_case(self) -> AngularCase {
        match self {
            Regime::C0Nonzero => AngularCase::A,
            Regime::DiagA => AngularCase::Diagonal,
            Regime::TridiagB => AngularCase::B,
            Regime::TridiagC => AngularCase::C,
        }
    }
}

/// Total classification. Ties at `Ĉ = |C|` go to the diagonal regime.
pub fn classify(pot: &AngularPotentialParams) -> Regime {
    let (p, q) = (pot.c_hat + pot.c, pot.c_hat - pot.c);
    if pot.c0 != 0.0 {
        Regime::C0Nonzero
    } else if (p >= 0.0) == (q >= 0.0) {
        Regime::DiagA
    } else if pot.c_hat >= -pot.c {
        Regime::TridiagB
    } else {
        Regime::TridiagC
    }
}

/// Everything needed to build states in one solution space.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSpaceDescriptor {
    pub regime: Regime,
    pub pot: AngularPotentialParams,
    pub radial: RadialPotential,
    /// `γ` for the series regimes; unused (and `None`) for `DiagA`, where
    /// each `(n, m)` fixes its own `γ^±`.
    pub gamma: Option<f64>,
    pub branch: Branch,
    /// Free parameter for case B (`ν`) or C (`μ`).
    pub free: Option<f64>,
    pub book: Option<AngularQuantumBook>,
}

impl SolutionSpaceDescriptor {
    pub fn new(
        pot: AngularPotentialParams,
        radial: RadialPotential,
        gamma: Option<f64>,
        branch: Branch,
        free: Option<f64>,
    ) -> Result<Self> {
        radial.validate()?;
        let regime = classify(&pot);
        let book = match (regime, gamma) {
            (Regime::DiagA, _) => None,
            (_, None) => {
                return Err(SpectraError::domain(format!(
                    "regime {regime:?} needs gamma to be supplied"
                )))
            }
            (_, Some(g)) => Some(allowed_quantum_numbers(regime.angular_case(), &pot, g, free)?),
        };
        Ok(SolutionSpaceDescriptor {
            regime,
            pot,
            radial,
            gamma,
            branch,
            free,
            book,
        })
    }
}

/// Radial factor of a complete state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialComponent {
    CoulombBound(BoundLevel),
    OscillatorBound {
        k: usize,
        alpha: f64,
        omega: f64,
    },
    CoulombScattering {
        e: f64,
        gamma: f64,
        branch: Branch,
        lambda: f64,
        z: f64,
        opts: ScatteringOptions,
    },
}

impl RadialComponent {
    pub fn value(&self, r: f64) -> Result<f64> {
        match *self {
            RadialComponent::CoulombBound(level) => coulomb_bound_radial(&level, r),
            RadialComponent::OscillatorBound { k, alpha, omega } => {
                xi_eval(k, &RadialBasisParams::oscillator(alpha, omega)?, r)
            }
            RadialComponent::CoulombScattering {
                e,
                gamma,
                branch,
                lambda,
                z,
                opts,
            } => Ok(coulomb_scattering_radial(e, gamma, branch, lambda, z, r, opts)?.value),
        }
    }

    /// Series diagnostics at `r`, for scattering components.
    pub fn diagnostics(&self, r: f64) -> Result<Option<ScatteringDiagnostics>> {
        match *self {
            RadialComponent::CoulombScattering {
                e,
                gamma,
                branch,
                lambda,
                z,
                opts,
            } => Ok(Some(
                coulomb_scattering_radial(e, gamma, branch, lambda, z, r, opts)?.diagnostics,
            )),
            _ => Ok(None),
        }
    }
}

/// Angular factor `scale · Σ c_n χ_n(x)`, unit-normalized on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularComponent {
    pub basis: AngularBasisParams,
    pub coeffs: Vec<f64>,
    pub scale: f64,
}

impl AngularComponent {
    pub fn value(&self, x: f64) -> Result<f64> {
        let chis = chi_eval_all(self.coeffs.len() - 1, &self.basis, x)?;
        Ok(self.scale * self.coeffs.iter().zip(&chis).map(|(c, v)| c * v).sum::<f64>())
    }
}

/// A complete separable state.
#[derive(Debug, Clone, PartialEq)]
pub struct CompleteState {
    pub regime: Regime,
    pub k: usize,
    pub n: usize,
    pub m: i32,
    pub gamma: f64,
    pub branch: Branch,
    pub energy: f64,
    pub lambda: f64,
    pub radial: RadialComponent,
    pub angular: AngularComponent,
}

impl CompleteState {
    pub fn azimuthal(&self, phi: f64) -> Complex64 {
        phi_component(self.m, phi)
    }

    /// `ψ(r, θ, φ) = R(r) Θ(cos θ) Φ(φ) / r`.
    pub fn psi(&self, r: f64, theta: f64, phi: f64) -> Result<Complex64> {
        let rad = self.radial.value(r)?;
        let ang = self.angular.value(theta.cos().clamp(-1.0, 1.0))?;
        Ok(self.azimuthal(phi) * (rad * ang / r))
    }
}

fn angular_component(desc: &SolutionSpaceDescriptor, n: usize, m: i32) -> Result<(AngularComponent, f64)> {
    let case = desc.regime.angular_case();
    let bp = basis_params(case, &desc.pot, m, false, desc.free)?;
    if desc.regime == Regime::DiagA {
        let (gp, gm) = diagonal_gammas(n, &bp);
        let gamma = if desc.branch == Branch::Plus { gp } else { gm };
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        return Ok((
            AngularComponent {
                basis: bp,
                coeffs,
                scale: 1.0,
            },
            gamma,
        ));
    }
    let gamma = desc.gamma.expect("series regimes carry gamma");
    let book = desc.book.as_ref().expect("series regimes carry a book");
    if !book.admits(n, m) {
        return Err(SpectraError::QuantumNumber {
            n,
            m,
            reason: format!("not admitted by the angular book at gamma = {gamma}"),
        });
    }
    let (kind, z) = series_variable(&bp, gamma, desc.pot.c0)?;
    let coeffs = series_coefficients(&bp, kind, n, z)?;
    let norm = series_norm_sq(&bp, &coeffs)?;
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(SpectraError::NonFinite(format!(
            "angular norm {norm} for (n, m) = ({n}, {m})"
        )));
    }
    Ok((
        AngularComponent {
            basis: bp,
            coeffs,
            scale: norm.sqrt().recip(),
        },
        gamma,
    ))
}

/// Bound state `(k, n, m)` in a solution space.
///
/// For `DiagA`, `n` labels the diagonal angular state and fixes `γ^±`. For
/// the series regimes, `γ` comes from the descriptor and `n ≤ N_m` selects
/// the truncation of the angular series.
pub fn bound_state(desc: &SolutionSpaceDescriptor, k: usize, n: usize, m: i32) -> Result<CompleteState> {
    if let RadialPotential::Coulomb { z } = desc.radial {
        if !(z < 0.0) {
            return Err(SpectraError::NoBoundStates(format!(
                "bound states need an attractive Coulomb coupling (Z < 0), got Z = {z}"
            )));
        }
    }
    let (angular, gamma) = angular_component(desc, n, m)?;
    let (radial, energy, lambda) = match desc.radial {
        RadialPotential::Coulomb { z } => {
            let alpha = alpha_from_gamma(gamma, desc.branch, RadialKind::Coulomb)?;
            let level = level_from_alpha(k, alpha, z);
            (RadialComponent::CoulombBound(level), level.energy, level.lambda_k)
        }
        RadialPotential::Oscillator { omega } => {
            let alpha = alpha_from_gamma(gamma, desc.branch, RadialKind::Oscillator)?;
            let energy = omega * omega * (2.0 * k as f64 + 2.0 * alpha + 0.5);
            (RadialComponent::OscillatorBound { k, alpha, omega }, energy, omega)
        }
    };
    Ok(CompleteState {
        regime: desc.regime,
        k,
        n,
        m,
        gamma,
        branch: desc.branch,
        energy,
        lambda,
        radial,
        angular,
    })
}

/// Coulomb scattering state at `E > 0` with angular labels `(n, m)`.
pub fn scattering_state(
    desc: &SolutionSpaceDescriptor,
    e: f64,
    lambda: f64,
    opts: ScatteringOptions,
    n: usize,
    m: i32,
) -> Result<CompleteState> {
    let RadialPotential::Coulomb { z } = desc.radial else {
        return Err(SpectraError::WrongRegime(
            "scattering states are only built for the Coulomb radial term".into(),
        ));
    };
    if !(e > 0.0) {
        return Err(SpectraError::domain(format!("scattering needs E > 0, got {e}")));
    }
    let (angular, gamma) = angular_component(desc, n, m)?;
    alpha_from_gamma(gamma, desc.branch, RadialKind::Coulomb)?;
    let radial = RadialComponent::CoulombScattering {
        e,
        gamma,
        branch: desc.branch,
        lambda,
        z,
        opts,
    };
    radial.value(1.0)?;
    Ok(CompleteState {
        regime: desc.regime,
        k: opts.k_max,
        n,
        m,
        gamma,
        branch: desc.branch,
        energy: e,
        lambda,
        radial,
        angular,
    })
}

/// `(n, m)` pairs of the special superposition: `n ≤ j`, `|m| ≤ j − n`.
pub fn special_index_set(j: usize) -> Vec<(usize, i32)> {
    let mut out = Vec::new();
    for n in 0..=j {
        let span = (j - n) as i32;
        for m in -span..=span {
            out.push((n, m));
        }
    }
    out
}

fn check_special(eta: f64, c0: f64) -> Result<()> {
    if c0 == 0.0 || !c0.is_finite() {
        return Err(SpectraError::WrongRegime(format!(
            "the special superposition needs a finite C0 != 0, got {c0}"
        )));
    }
    if !(0.0..1.0).contains(&eta) {
        return Err(SpectraError::domain(format!("eta must lie in [0, 1), got {eta}")));
    }
    Ok(())
}

/// Coefficients of the angular factor for one `m` in the special
/// superposition, from the recurrence with `σ = 1/C₀`,
/// `z = (j+η+½)²/C₀` and the sign `(−1)^n`.
pub fn special_angular_coeffs(j: usize, eta: f64, c0: f64, m: i32) -> Result<Vec<f64>> {
    check_special(eta, c0)?;
    let am = m.unsigned_abs() as usize;
    if am > j {
        return Err(SpectraError::QuantumNumber {
            n: 0,
            m,
            reason: format!("|m| exceeds j = {j}"),
        });
    }
    let p = JacobiParams {
        mu: am as f64,
        nu: am as f64,
    };
    let z = (j as f64 + eta + 0.5).powi(2) / c0;
    let h = h_poly_all(j - am, 1.0 / c0, p, z);
    Ok(h.iter()
        .enumerate()
        .map(|(n, v)| if n % 2 == 1 { -1.0 } else { 1.0 } * coefficient_scale(n, p) * v)
        .collect())
}

/// Unit-norm angular factor for one `m` of the special superposition.
pub fn special_angular_factor(j: usize, eta: f64, c0: f64, m: i32, x: f64) -> Result<f64> {
    let c = special_angular_coeffs(j, eta, c0, m)?;
    let bp = special_basis(m);
    let chis = chi_eval_all(c.len() - 1, &bp, x)?;
    let norm: f64 = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(c.iter().zip(&chis).map(|(a, b)| a * b).sum::<f64>() / norm)
}

fn special_basis(m: i32) -> AngularBasisParams {
    let am = m.unsigned_abs() as f64;
    AngularBasisParams {
        case: AngularCase::A,
        mu: am,
        nu: am,
        alpha: am / 2.0,
        beta: am / 2.0,
        m,
        special_branch: false,
        coupling: None,
    }
}

/// `Σ_m Θ_m(x) Φ_m(φ)` with the whole superposition unit-normalized on the sphere.
fn special_angular_sum(j: usize, eta: f64, c0: f64, theta: f64, phi: f64) -> Result<Complex64> {
    let x = theta.cos().clamp(-1.0, 1.0);
    let ji = j as i32;
    let mut total = Complex64::new(0.0, 0.0);
    let mut norm = 0.0;
    for m in -ji..=ji {
        let c = special_angular_coeffs(j, eta, c0, m)?;
        let chis = chi_eval_all(c.len() - 1, &special_basis(m), x)?;
        norm += c.iter().map(|v| v * v).sum::<f64>();
        total += phi_component(m, phi) * c.iter().zip(&chis).map(|(a, b)| a * b).sum::<f64>();
    }
    Ok(total / norm.sqrt())
}

/// Scattering wavefunction of the `Ĉ = C = 0`, `C₀ ≠ 0` special case at
/// `γ⁺ = j + η`.
#[allow(clippy::too_many_arguments)]
pub fn special_scattering_psi(
    j: usize,
    eta: f64,
    z: f64,
    c0: f64,
    e: f64,
    lambda: f64,
    point: (f64, f64, f64),
    opts: ScatteringOptions,
) -> Result<Complex64> {
    check_special(eta, c0)?;
    let (r, theta, phi) = point;
    let gamma = j as f64 + eta;
    let rad = coulomb_scattering_radial(e, gamma, Branch::Plus, lambda, z, r, opts)?.value;
    Ok(special_angular_sum(j, eta, c0, theta, phi)? * (rad / r))
}

/// Bound wavefunction of the special case, with
/// `E_kj = −Z²/(2(k+j+η+1)²)` and `λ_kj = −2Z/(k+j+η+1)`.
pub fn special_bound_psi(
    k: usize,
    j: usize,
    eta: f64,
    z: f64,
    c0: f64,
    point: (f64, f64, f64),
) -> Result<(Complex64, f64)> {
    check_special(eta, c0)?;
    if !(z < 0.0) {
        return Err(SpectraError::NoBoundStates(format!("Z must be < 0, got {z}")));
    }
    let level = level_from_alpha(k, j as f64 + eta + 1.0, z);
    let (r, theta, phi) = point;
    let rad = coulomb_bound_radial(&level, r)?;
    Ok((special_angular_sum(j, eta, c0, theta, phi)? * (rad / r), level.energy))
}

/// Mapped angular parameters of the Aharonov–Bohm flux plus monopole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbmMap {
    pub c_hat: f64,
    pub c: f64,
    pub c0: f64,
    /// Coefficient `B = −ζ²b²` of the extra `1/(2r²)` radial barrier.
    pub barrier: f64,
    pub z: f64,
}

impl AbmMap {
    pub fn angular(&self) -> Result<AngularPotentialParams> {
        AngularPotentialParams::new(self.c_hat, self.c, self.c0)
    }

    /// `V_r(r) = Z/r + B/(2r²)`.
    pub fn radial_potential(&self, r: f64) -> f64 {
        self.z / r + self.barrier / (2.0 * r * r)
    }
}

/// `Ĉ = ζ[ζ(a²+b²) − 2ma]`, `C = 2ζb(m − ζa)`, `C₀ = 0`, `B = −ζ²b²`.
pub fn abm_potential_map(a: f64, b: f64, zeta: f64, m: i32, z: f64) -> AbmMap {
    let mf = m as f64;
    AbmMap {
        c_hat: zeta * (zeta * (a * a + b * b) - 2.0 * mf * a),
        c: 2.0 * zeta * b * (mf - zeta * a),
        c0: 0.0,
        barrier: -(zeta * b).powi(2),
        z,
    }
}

/// Bound level of the Aharonov–Bohm plus monopole system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbmLevel {
    pub k: usize,
    pub n: usize,
    pub m: i32,
    pub gamma: f64,
    pub nu_nm: f64,
    pub energy: f64,
    pub lambda: f64,
    level: BoundLevel,
}

/// `μ_m = |m − ζa + ζb|`, `ν_m = |m − ζa − ζb|`.
pub fn abm_angular_exponents(a: f64, b: f64, zeta: f64, m: i32) -> (f64, f64) {
    let mf = m as f64;
    ((mf - zeta * a + zeta * b).abs(), (mf - zeta * a - zeta * b).abs())
}

/// `E = −Z²/(2(k+ν_nm+1)²)` with `ν_nm = −½ + √((γ_nm+½)² − ζ²b²)` and
/// `γ_nm = n + (μ_m + ν_m)/2` from the diagonal angular states.
pub fn abm_spectrum(k: usize, n: usize, m: i32, z: f64, zeta: f64, a: f64, b: f64) -> Result<AbmLevel> {
    let (mu, nu) = abm_angular_exponents(a, b, zeta, m);
    abm_level_from_gamma(k, n, m, n as f64 + (mu + nu) / 2.0, z, zeta, b)
}

/// Level for an explicit `γ`. Fails below the barrier, `|γ+½| < ζ|b|`.
///
/// With the mapped exponents, `μ_m + ν_m ≥ 2ζ|b|` so [`abm_spectrum`]
/// always clears the barrier; this entry point exposes the threshold.
pub fn abm_level_from_gamma(k: usize, n: usize, m: i32, gamma: f64, z: f64, zeta: f64, b: f64) -> Result<AbmLevel> {
    if !(z < 0.0) {
        return Err(SpectraError::NoBoundStates(format!("Z must be < 0, got {z}")));
    }
    let lhs = (gamma + 0.5).abs();
    let rhs = (zeta * b).abs();
    if lhs < rhs {
        return Err(SpectraError::BelowBarrier { n, m, lhs, rhs });
    }
    let nu_nm = -0.5 + (lhs * lhs - rhs * rhs).sqrt();
    let level = level_from_alpha(k, nu_nm + 1.0, z);
    Ok(AbmLevel {
        k,
        n,
        m,
        gamma,
        nu_nm,
        energy: level.energy,
        lambda: level.lambda_k,
        level,
    })
}

/// Unit-norm radial factor `∝ (λr)^{1+ν_nm} e^{−λr/2} L_k^{2ν_nm+1}(λr)`.
pub fn abm_radial(level: &AbmLevel, r: f64) -> Result<f64> {
    coulomb_bound_radial(&level.level, r)
}

/// `∫|ψ|² d³r` by product quadrature: 128 radial Gauss–Legendre nodes on
/// `[0, r_max]`, 64 nodes in `cos θ`, and a uniform `φ` rule with
/// `phi_points` nodes (exact for trigonometric polynomials of degree below
/// `phi_points`).
pub fn integrate_density_3d<F>(psi: F, r_max: f64, phi_points: usize) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> Result<Complex64> + Sync,
{
    let (rs, wr) = composite_legendre(16, 8, 0.0, r_max)?;
    let (xs, wx) = gauss_legendre(64, -1.0, 1.0)?;
    let np = phi_points.max(1);
    let dphi = 2.0 * PI / np as f64;
    let partial = crate::par::map_range(crate::par::Exec::default(), rs.len(), |i| -> Result<f64> {
        let r = rs[i];
        let mut acc = 0.0;
        for (x, w) in xs.iter().zip(&wx) {
            let theta = x.acos();
            for p in 0..np {
                acc += w * dphi * psi(r, theta, p as f64 * dphi)?.norm_sqr();
            }
        }
        Ok(wr[i] * r * r * acc)
    });
    partial.into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::{diagonal_theta, h_poly};

    fn pot(a: f64, b: f64, c: f64) -> AngularPotentialParams {
        AngularPotentialParams::new(a, b, c).unwrap()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&pot(1.0, 0.0, 2.0)), Regime::C0Nonzero);
        assert_eq!(classify(&pot(0.0, 0.0, 0.0)), Regime::DiagA);
        assert_eq!(classify(&pot(0.0, 3.0, 0.0)), Regime::TridiagB);
        assert_eq!(classify(&pot(0.0, -3.0, 0.0)), Regime::TridiagC);
        assert_eq!(classify(&pot(2.0, 2.0, 0.0)), Regime::DiagA);
        assert_eq!(classify(&pot(-2.0, 2.0, 0.0)), Regime::TridiagB);
        assert_eq!(classify(&pot(-2.0, -2.0, 0.0)), Regime::TridiagC);
        assert_eq!(classify(&pot(-3.0, 1.0, 0.0)), Regime::DiagA);
    }

    #[test]
    fn hydrogen_energies() {
        let d = SolutionSpaceDescriptor::new(
            pot(0.0, 0.0, 0.0),
            RadialPotential::Coulomb { z: -1.0 },
            None,
            Branch::Plus,
            None,
        )
        .unwrap();
        for k in 0..3 {
            for n in 0..3 {
                for m in -2..=2 {
                    let s = bound_state(&d, k, n, m).unwrap();
                    let big_n = (k + n + m.unsigned_abs() as usize + 1) as f64;
                    assert!((s.energy + 0.5 / (big_n * big_n)).abs() < 1e-15);
                }
            }
        }
        let repulsive = SolutionSpaceDescriptor::new(
            pot(0.0, 0.0, 0.0),
            RadialPotential::Coulomb { z: 1.0 },
            None,
            Branch::Plus,
            None,
        )
        .unwrap();
        assert!(matches!(
            bound_state(&repulsive, 0, 0, 0),
            Err(SpectraError::NoBoundStates(_))
        ));
    }

    #[test]
    fn diag_states_are_normalized_and_orthogonal() {
        let d = SolutionSpaceDescriptor::new(
            pot(0.0, 0.0, 0.0),
            RadialPotential::Coulomb { z: -1.0 },
            None,
            Branch::Plus,
            None,
        )
        .unwrap();
        let a = bound_state(&d, 0, 1, 1).unwrap();
        let b = bound_state(&d, 1, 0, 1).unwrap();
        for s in [&a, &b] {
            let n = integrate_density_3d(|r, t, p| s.psi(r, t, p), 60.0, 1).unwrap();
            assert!((n - 1.0).abs() < 1e-8, "{n}");
        }
        // same m, so the φ integral is trivial
        let (rs, wr) = composite_legendre(16, 8, 0.0, 60.0).unwrap();
        let (xs, wx) = gauss_legendre(64, -1.0, 1.0).unwrap();
        let mut overlap = 0.0;
        for (r, w1) in rs.iter().zip(&wr) {
            for (x, w2) in xs.iter().zip(&wx) {
                let t = x.acos();
                overlap +=
                    w1 * w2 * 2.0 * PI * r * r * (a.psi(*r, t, 0.0).unwrap().conj() * b.psi(*r, t, 0.0).unwrap()).re;
            }
        }
        assert!(overlap.abs() < 1e-8, "{overlap}");
    }

    #[test]
    fn series_regimes_build_normalized_states() {
        for (p, free) in [
            (pot(0.4, 0.2, 0.9), None),
            (pot(0.0, 2.0, 0.0), Some(0.5)),
            (pot(0.0, -2.0, 0.0), Some(0.5)),
        ] {
            let d = SolutionSpaceDescriptor::new(
                p,
                RadialPotential::Oscillator { omega: 1.0 },
                Some(3.2),
                Branch::Plus,
                free,
            )
            .unwrap();
            let book = d.book.clone().unwrap();
            let (n, m) = *book.entries().last().unwrap();
            let s = bound_state(&d, 1, n, m).unwrap();
            let norm = integrate_density_3d(|r, t, ph| s.psi(r, t, ph), 12.0, 1).unwrap();
            assert!((norm - 1.0).abs() < 1e-6, "{:?}: {norm}", d.regime);
            let nm = book.n_max[&m];
            assert!(matches!(
                bound_state(&d, 0, nm + 1, m),
                Err(SpectraError::QuantumNumber { .. })
            ));
        }
        assert!(SolutionSpaceDescriptor::new(
            pot(0.0, 2.0, 0.0),
            RadialPotential::Coulomb { z: -1.0 },
            None,
            Branch::Plus,
            Some(0.5)
        )
        .is_err());
    }

    #[test]
    fn scattering_state_factorizes() {
        let d = SolutionSpaceDescriptor::new(
            pot(0.0, 0.0, 0.0),
            RadialPotential::Coulomb { z: -1.0 },
            None,
            Branch::Plus,
            None,
        )
        .unwrap();
        let s = scattering_state(&d, 0.5, 1.5, ScatteringOptions::default(), 1, 1).unwrap();
        let (r, t, p) = (1.3, 0.7, 0.4);
        let direct = s.psi(r, t, p).unwrap();
        let manual = s.radial.value(r).unwrap() * s.angular.value(t.cos()).unwrap() / r * phi_component(1, p);
        assert!((direct - manual).norm() < 1e-15);
        assert!((s.psi(r, t, p + 2.0 * PI).unwrap() - direct).norm() < 1e-13);
        let s2 = scattering_state(&d, 0.5 * (1.0 + 1e-6), 1.5, ScatteringOptions::default(), 1, 1).unwrap();
        let diff = (s2.psi(r, t, p).unwrap() - direct).norm();
        assert!(diff < 1e-5 * (1.0 + direct.norm()), "{diff}");
        let osc = SolutionSpaceDescriptor::new(
            pot(0.0, 0.0, 0.0),
            RadialPotential::Oscillator { omega: 1.0 },
            None,
            Branch::Plus,
            None,
        )
        .unwrap();
        assert!(matches!(
            scattering_state(&osc, 0.5, 1.0, ScatteringOptions::default(), 0, 0),
            Err(SpectraError::WrongRegime(_))
        ));
    }

    #[test]
    fn special_index_ranges() {
        assert_eq!(special_index_set(0), vec![(0, 0)]);
        let set = special_index_set(2);
        let ms: Vec<i32> = set.iter().filter(|(n, _)| *n == 1).map(|(_, m)| *m).collect();
        assert_eq!(ms, vec![-1, 0, 1]);
        assert!(set.iter().all(|(n, _)| *n <= 2));
    }

    #[test]
    fn special_coefficients_match_corrected_series() {
        // printed recurrence with (−1)^n equals the corrected case-A series
        let (j, eta, c0) = (3usize, 0.3, 0.8);
        let gamma = j as f64 + eta;
        for m in -3i32..=3 {
            let c = special_angular_coeffs(j, eta, c0, m).unwrap();
            let bp = basis_params(AngularCase::A, &pot(0.0, 0.0, c0), m, false, None).unwrap();
            let (kind, z) = series_variable(&bp, gamma, c0).unwrap();
            let f = series_coefficients(&bp, kind, j - m.unsigned_abs() as usize, z).unwrap();
            for (a, b) in c.iter().zip(&f) {
                assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "m={m}: {a} vs {b}");
            }
            // at μ = ν the printed coefficients reduce to the H recurrence with σ = 1/C₀
            let p = JacobiParams {
                mu: m.abs() as f64,
                nu: m.abs() as f64,
            };
            let zz = (gamma + 0.5).powi(2) / c0;
            for n in 0..=8 {
                let mf = m.abs() as f64;
                let mut prev = 0.0;
                let mut cur = 1.0;
                for i in 0..n {
                    let fi = i as f64;
                    let a = (fi + mf + 0.5).powi(2) / c0;
                    let b = (fi + mf) / (2.0 * (fi + mf + 0.5));
                    let cc = (fi + 1.0) * (fi + 2.0 * mf + 1.0) / (2.0 * (fi + mf + 0.5) * (fi + mf + 1.0));
                    let next = ((zz - a) * cur - b * prev) / cc;
                    prev = cur;
                    cur = next;
                }
                let h = h_poly(n, 1.0 / c0, p, zz);
                assert!((cur - h).abs() < 1e-10 * (1.0 + h.abs()), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn special_bound_energy_and_norm() {
        let (v, e) = special_bound_psi(0, 0, 0.0, -1.0, 1.5, (1.0, 0.3, 0.2)).unwrap();
        assert_eq!(e, -0.5);
        assert!(v.norm() > 0.0);
        let (_, e) = special_bound_psi(1, 2, 0.4, -2.0, 1.5, (1.0, 0.3, 0.2)).unwrap();
        assert!((e + 4.0 / (2.0 * 4.4f64.powi(2))).abs() < 1e-14);
        for j in [0usize, 1, 2] {
            let n = integrate_density_3d(
                |r, t, p| special_bound_psi(1, j, 0.3, -1.0, 0.7, (r, t, p)).map(|v| v.0),
                90.0,
                2 * j + 2,
            )
            .unwrap();
            assert!((n - 1.0).abs() < 1e-6, "j={j}: {n}");
        }
        assert!(matches!(
            special_bound_psi(0, 0, 0.0, -1.0, 0.0, (1.0, 0.3, 0.2)),
            Err(SpectraError::WrongRegime(_))
        ));
        assert!(special_scattering_psi(
            1,
            0.2,
            -1.0,
            0.0,
            0.5,
            1.0,
            (1.0, 0.3, 0.2),
            ScatteringOptions::default()
        )
        .is_err());
    }

    #[test]
    fn special_scattering_j0_is_s_wave() {
        let opts = ScatteringOptions::default();
        let a = special_scattering_psi(0, 0.0, -1.0, 0.8, 0.5, 1.0, (1.0, 0.3, 0.2), opts).unwrap();
        let b = special_scattering_psi(0, 0.0, -1.0, 0.8, 0.5, 1.0, (1.0, 2.1, 1.4), opts).unwrap();
        assert!((a - b).norm() < 1e-14);
        let rad = coulomb_scattering_radial(0.5, 0.0, Branch::Plus, 1.0, -1.0, 1.0, opts)
            .unwrap()
            .value;
        let expect = rad / (4.0 * PI).sqrt();
        assert!((a.re - expect).abs() < 1e-13 && a.im.abs() < 1e-15);
    }

    #[test]
    fn special_angular_approaches_diagonal_states() {
        let (j, eta) = (3usize, 0.0);
        let xs = [-0.8, -0.3, 0.2, 0.6, 0.9];
        for m in [0i32, 1, -2] {
            let nstar = j - m.unsigned_abs() as usize;
            let mut prev = f64::INFINITY;
            for c0 in [1.0, 0.1, 0.01] {
                let mut err: f64 = 0.0;
                let sign = {
                    let c = special_angular_coeffs(j, eta, c0, m).unwrap();
                    c[nstar].signum()
                };
                for &x in &xs {
                    let a = special_angular_factor(j, eta, c0, m, x).unwrap();
                    let d = diagonal_theta(nstar, m, &pot(0.0, 0.0, 0.0), x).unwrap().0;
                    err = err.max((sign * a - d).abs());
                }
                assert!(err < prev, "m={m} c0={c0}: {err} >= {prev}");
                prev = err;
            }
            assert!(prev < 1e-3, "m={m}: {prev}");
        }
    }

    #[test]
    fn abm_map_examples() {
        let p = abm_potential_map(0.7, 0.0, 1.3, 2, -1.0);
        assert_eq!(p.c, 0.0);
        assert_eq!(p.barrier, 0.0);
        assert!((p.c_hat - 1.3 * 0.7 * (1.3 * 0.7 - 4.0)).abs() < 1e-14);
        let p = abm_potential_map(0.0, 0.0, 1.0, 3, -1.0);
        assert_eq!((p.c_hat, p.c, p.c0, p.barrier), (0.0, 0.0, 0.0, 0.0));
        let p = abm_potential_map(1.0, 1.0, 1.0, 0, -1.0);
        assert_eq!((p.c_hat, p.c, p.c0), (2.0, -2.0, 0.0));
        for m in -3..=3 {
            let p = abm_potential_map(0.4, 0.9, 1.2, m, -1.0).angular().unwrap();
            let (mu, nu) = abm_angular_exponents(0.4, 0.9, 1.2, m);
            assert!((p.radicand_plus(m) - mu * mu).abs() < 1e-13);
            assert!((p.radicand_minus(m) - nu * nu).abs() < 1e-13);
        }
    }

    #[test]
    fn abm_spectrum_reductions() {
        for (n, m) in [(0usize, 0i32), (1, 2), (2, -1)] {
            let lv = abm_spectrum(1, n, m, -1.0, 1.0, 0.4, 0.0).unwrap();
            let p = abm_potential_map(0.4, 0.0, 1.0, m, -1.0).angular().unwrap();
            let bp = basis_params(AngularCase::Diagonal, &p, m, false, None).unwrap();
            let (gp, _) = diagonal_gammas(n, &bp);
            let c = crate::radial::coulomb_bound_spectrum(1, gp, Branch::Plus, -1.0).unwrap();
            assert_eq!(lv.energy, c.energy);
            for &r in &[0.5, 2.0, 7.0] {
                let a = abm_radial(&lv, r).unwrap();
                let b = coulomb_bound_radial(&c, r).unwrap();
                assert!((a - b).abs() < 1e-12);
            }
        }
        // radicand → 0
        let lv = abm_level_from_gamma(2, 0, 0, 0.5, -1.0, 1.0, 1.0 - 1e-12).unwrap();
        assert!((lv.nu_nm + 0.5).abs() < 1e-5);
        assert!((lv.energy + 1.0 / (2.0 * 2.5f64.powi(2))).abs() < 1e-5);
        assert!(matches!(
            abm_level_from_gamma(0, 1, 2, 0.5, -1.0, 1.0, 1.2),
            Err(SpectraError::BelowBarrier { n: 1, m: 2, .. })
        ));
        // the mapped exponents always clear the barrier
        for m in -4..=4 {
            assert!(abm_spectrum(0, 0, m, -1.0, 1.7, 0.3, 5.0).is_ok());
        }
        for k in 0..5 {
            let lv = abm_spectrum(k, 1, 1, -1.3, 0.8, 0.3, 0.6).unwrap();
            assert!((lv.lambda * (k as f64 + lv.nu_nm + 1.0) - 2.6).abs() < 1e-13);
            assert!((lv.lambda - 2.0 * (-2.0 * lv.energy).sqrt()).abs() < 1e-13);
        }
    }

    #[test]
    fn abm_radial_norm_and_nodes() {
        let (rs, wr) = composite_legendre(24, 200, 0.0, 200.0).unwrap();
        for k in 0..4 {
            let lv = abm_spectrum(k, 1, 0, -1.0, 1.0, 0.3, 0.8).unwrap();
            let n: f64 = rs
                .iter()
                .zip(&wr)
                .map(|(&r, &w)| w * abm_radial(&lv, r).unwrap().powi(2))
                .sum();
            assert!((n - 1.0).abs() < 1e-10, "k={k}: {n}");
            let mut nodes = 0;
            let mut prev = abm_radial(&lv, 1e-3).unwrap();
            for i in 1..3000 {
                let v = abm_radial(&lv, 1e-3 + i as f64 * 0.05).unwrap();
                if v * prev < 0.0 {
                    nodes += 1;
                }
                prev = v;
            }
            assert_eq!(nodes, k);
        }
    }
}
