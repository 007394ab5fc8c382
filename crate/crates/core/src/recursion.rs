//! Generic three-term recursion machinery.
//!
//! A chain of coefficients `{a_n, b_n}` defines the symmetric tridiagonal
//! (Jacobi) matrix
//!
//! ```text
//! z f_n = a_n f_n + b_{n-1} f_{n-1} + b_n f_{n+1}
//! ```
//!
//! From it we build the orthonormal polynomials, the continued-fraction
//! resolvent `G(z)` (optionally closed by a square-root terminator) and two
//! estimators of the orthogonality density.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Result, SpectraError};
use crate::orthopoly::quadrature_from_recursion;
use crate::par;
use crate::special::smooth_window;

/// A (possibly infinite) sequence of recursion coefficients.
///
/// Providers must be deterministic in `n` and safe to share across threads.
pub trait RecursionCoeffs: Sync {
    /// Diagonal coefficient `a_n`.
    fn a(&self, n: usize) -> f64;
    /// Off-diagonal coefficient `b_n`, coupling `n` and `n + 1`.
    fn b(&self, n: usize) -> f64;
    /// Total mass of the orthogonality measure, i.e. `∫ρ` when `p_0 = 1`.
    fn total_mass(&self) -> f64 {
        1.0
    }
}

impl<T: RecursionCoeffs + ?Sized> RecursionCoeffs for &T {
    fn a(&self, n: usize) -> f64 {
        (**self).a(n)
    }
    fn b(&self, n: usize) -> f64 {
        (**self).b(n)
    }
    fn total_mass(&self) -> f64 {
        (**self).total_mass()
    }
}

/// The homogeneous chain `a_n = a`, `b_n = b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantChain {
    pub a: f64,
    pub b: f64,
}

impl RecursionCoeffs for ConstantChain {
    fn a(&self, _n: usize) -> f64 {
        self.a
    }
    fn b(&self, _n: usize) -> f64 {
        self.b
    }
}

/// A finite table of coefficients, extended by its last entries.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedChain {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub mass: f64,
}

impl TabulatedChain {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(SpectraError::domain("tabulated chain needs at least one a and one b"));
        }
        Ok(TabulatedChain { a, b, mass: 1.0 })
    }

    /// Copies the first `len` coefficients of another chain.
    pub fn from_chain<C: RecursionCoeffs + ?Sized>(c: &C, len: usize) -> Self {
        let len = len.max(1);
        TabulatedChain {
            a: (0..len).map(|n| c.a(n)).collect(),
            b: (0..len).map(|n| c.b(n)).collect(),
            mass: c.total_mass(),
        }
    }
}

impl RecursionCoeffs for TabulatedChain {
    fn a(&self, n: usize) -> f64 {
        self.a[n.min(self.a.len() - 1)]
    }
    fn b(&self, n: usize) -> f64 {
        self.b[n.min(self.b.len() - 1)]
    }
    fn total_mass(&self) -> f64 {
        self.mass
    }
}

/// Generates `[f_0, …, f_N]` from the recursion at a real point `z`.
pub fn generate_polynomials<C: RecursionCoeffs + ?Sized>(c: &C, f0: f64, z: f64, n_max: usize) -> Result<Vec<f64>> {
    let mut f = Vec::with_capacity(n_max + 1);
    f.push(f0);
    for n in 0..n_max {
        let bn = c.b(n);
        if bn == 0.0 {
            return Err(SpectraError::Structural { what: "b_n", index: n });
        }
        let prev = if n == 0 { 0.0 } else { c.b(n - 1) * f[n - 1] };
        let next = ((z - c.a(n)) * f[n] - prev) / bn;
        f.push(next);
    }
    Ok(f)
}

/// Asymptotic (tail) coefficients closing the continued fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminatorParams {
    pub a_inf: f64,
    pub b_inf: f64,
}

impl TerminatorParams {
    pub fn new(a_inf: f64, b_inf: f64) -> Result<Self> {
        if !(b_inf >= 0.0) || !a_inf.is_finite() {
            return Err(SpectraError::domain(format!(
                "terminator needs finite a_inf and b_inf >= 0, got ({a_inf}, {b_inf})"
            )));
        }
        Ok(TerminatorParams { a_inf, b_inf })
    }

    /// Local terminator taken at the truncation depth: `a_inf = a_N`,
    /// `b_inf = b_{N-1}`. This is the practical closure for chains whose
    /// coefficients have no limit.
    pub fn local<C: RecursionCoeffs + ?Sized>(c: &C, depth: usize) -> Self {
        let depth = depth.max(1);
        TerminatorParams {
            a_inf: c.a(depth),
            b_inf: c.b(depth - 1).abs(),
        }
    }

    /// Band edges `a_inf ∓ 2 b_inf`.
    pub fn band(&self) -> (f64, f64) {
        (self.a_inf - 2.0 * self.b_inf, self.a_inf + 2.0 * self.b_inf)
    }
}

/// Square-root terminator `T(z)`, the solution of `T = b²/(z − a − T)`.
///
/// The branch is chosen so that `T` is analytic in the upper half-plane,
/// decays like `b²/z` at infinity and has `Im T ≤ 0` there, which makes the
/// resulting density non-negative. At the band centre `T(a + i0⁺) = −i b`.
pub fn terminator(z: Complex64, t: TerminatorParams) -> Result<Complex64> {
    if t.b_inf == 0.0 {
        return Err(SpectraError::DegenerateTerminator);
    }
    Ok(terminator_unchecked(z, t))
}

/// Like [`terminator`] but returns 0 for a degenerate tail (`b_inf = 0`).
pub fn terminator_or_zero(z: Complex64, t: TerminatorParams) -> Complex64 {
    if t.b_inf == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        terminator_unchecked(z, t)
    }
}

fn terminator_unchecked(z: Complex64, t: TerminatorParams) -> Complex64 {
    let w = z - t.a_inf;
    let two_b = 2.0 * t.b_inf;
    let root = (w - two_b).sqrt() * (w + two_b).sqrt();
    let plus = 0.5 * (w - root);
    // For real w below the band both principal roots are imaginary and
    // their product flips sign; the formula above already handles it, but a
    // tiny negative imaginary part in z can land on the wrong sheet.
    if plus.norm() > t.b_inf * 1.000_001 + 1e-300 && (w.im == 0.0) {
        0.5 * (w + root)
    } else {
        plus
    }
}

/// Continued-fraction resolvent of depth `depth`, closed by `T(z)` or by 0.
///
/// `G(z) = −1/(z − a_0 − b_0²/(z − a_1 − … − b_{N−2}²/(z − a_{N−1} − T(z))))`
pub fn greens_function<C: RecursionCoeffs + ?Sized>(
    c: &C,
    z: Complex64,
    depth: usize,
    t: Option<TerminatorParams>,
) -> Result<Complex64> {
    if depth == 0 {
        return Err(SpectraError::domain("continued fraction depth must be at least 1"));
    }
    let tail = match t {
        Some(t) => terminator(z, t)?,
        None => Complex64::new(0.0, 0.0),
    };
    let tiny = f64::MIN_POSITIVE * 1e8;
    let mut d = z - c.a(depth - 1) - tail;
    if !(d.norm() > tiny) || !d.is_finite() {
        return Err(SpectraError::PoleProximity { level: depth - 1 });
    }
    for n in (0..depth - 1).rev() {
        let bn = c.b(n);
        d = z - c.a(n) - bn * bn / d;
        if !(d.norm() > tiny) || !d.is_finite() {
            return Err(SpectraError::PoleProximity { level: n });
        }
    }
    Ok(-1.0 / d)
}

/// How far the chain is from its terminator at the truncation depth:
/// `(|a_N − a_inf|, |b_{N−1} − b_inf|)`.
pub fn terminator_deltas<C: RecursionCoeffs + ?Sized>(c: &C, depth: usize, t: TerminatorParams) -> (f64, f64) {
    let depth = depth.max(1);
    ((c.a(depth) - t.a_inf).abs(), (c.b(depth - 1).abs() - t.b_inf).abs())
}

/// Support of a density estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    /// Closed interval `[lo, hi]`.
    Interval(f64, f64),
    /// `[lo, ∞)`.
    SemiInfinite(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityMethod {
    ContinuedFraction,
    QuadratureKernel,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DensityDiagnostics {
    /// Imaginary offset used for `z + iε` (continued fraction only).
    pub epsilon: f64,
    /// Number of grid points where a negative value was clipped to 0.
    pub clipped_points: usize,
    /// Trapezoid mass of the clipped negative part.
    pub clipped_mass: f64,
    /// Grid indices where the continued fraction hit a pole.
    pub pole_points: Vec<usize>,
    /// `|a_N − a_inf|` and `|b_{N−1} − b_inf|` of the terminator used.
    pub terminator_deltas: (f64, f64),
    /// Kernel bandwidth (quadrature estimator only).
    pub bandwidth: f64,
}

/// Density values on a grid, normalized to unit total mass.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    pub grid: Vec<f64>,
    pub rho: Vec<f64>,
    pub support: Support,
    pub method: DensityMethod,
    /// Mass of the underlying measure; `rho * total_mass` is the raw density.
    pub total_mass: f64,
    pub diagnostics: DensityDiagnostics,
}

impl DensityEstimate {
    /// Density of the measure with its natural (raw) total mass.
    pub fn raw(&self) -> Vec<f64> {
        self.rho.iter().map(|r| r * self.total_mass).collect()
    }

    /// Trapezoid integral of `rho` over the grid.
    pub fn mass(&self) -> f64 {
        trapezoid(&self.grid, &self.rho)
    }

    /// Trapezoid integral of `rho` over grid points with `z < cut`.
    pub fn mass_below(&self, cut: f64) -> f64 {
        let k = self.grid.partition_point(|&z| z < cut);
        if k < 2 {
            return 0.0;
        }
        trapezoid(&self.grid[..k], &self.rho[..k])
    }
}

/// Trapezoid rule on a sorted, possibly non-uniform grid.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Uniform grid of `count` points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let h = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| if i == count - 1 { hi } else { lo + h * i as f64 })
                .collect()
        }
    }
}

/// Default imaginary offset `ε = 1e−6 · max(1, |b_inf|)`.
pub fn default_epsilon(t: TerminatorParams) -> f64 {
    1e-6 * t.b_inf.abs().max(1.0)
}

/// Density `ρ(z) = Im G(z + iε)/π` from the terminated continued fraction.
///
/// Negative values (possible only through round-off or a poorly matched
/// terminator) are clipped to zero and counted; points where the fraction
/// hits a pole are flagged and set to zero.
pub fn density_cf<C: RecursionCoeffs + ?Sized>(
    c: &C,
    grid: &[f64],
    depth: usize,
    t: TerminatorParams,
    epsilon: Option<f64>,
) -> Result<DensityEstimate> {
    if depth == 0 {
        return Err(SpectraError::domain("continued fraction depth must be at least 1"));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(SpectraError::domain("density grid must be sorted"));
    }
    let eps = epsilon.unwrap_or_else(|| default_epsilon(t));
    if !(eps > 0.0) {
        return Err(SpectraError::domain(format!("epsilon must be positive, got {eps}")));
    }
    let values = par::map(grid, |&z| {
        greens_function(c, Complex64::new(z, eps), depth, Some(t)).map(|g| g.im / PI)
    });
    let mut rho = Vec::with_capacity(grid.len());
    let mut negative = vec![0.0; grid.len()];
    let mut diagnostics = DensityDiagnostics {
        epsilon: eps,
        terminator_deltas: terminator_deltas(c, depth, t),
        ..Default::default()
    };
    for (i, v) in values.into_iter().enumerate() {
        match v {
            Ok(r) if r >= 0.0 => rho.push(r),
            Ok(r) => {
                diagnostics.clipped_points += 1;
                negative[i] = -r;
                rho.push(0.0);
            }
            Err(SpectraError::PoleProximity { .. }) => {
                diagnostics.pole_points.push(i);
                rho.push(0.0);
            }
            Err(e) => return Err(e),
        }
    }
    diagnostics.clipped_mass = trapezoid(grid, &negative);
    let (lo, hi) = t.band();
    Ok(DensityEstimate {
        grid: grid.to_vec(),
        rho,
        support: Support::Interval(lo, hi),
        method: DensityMethod::ContinuedFraction,
        total_mass: c.total_mass(),
        diagnostics,
    })
}

/// Half-width of the smoothing kernel in units of the bandwidth.
pub const KERNEL_REACH: f64 = 3.0;
const KERNEL_PLATEAU: f64 = 2.0 / 3.0;

fn kernel_shape(u: f64) -> f64 {
    (-0.5 * u * u).exp() * smooth_window(u.abs() / KERNEL_REACH, KERNEL_PLATEAU)
}

fn kernel_norm() -> f64 {
    static NORM: OnceLock<f64> = OnceLock::new();
    *NORM.get_or_init(|| {
        // The shape is C^∞ with compact support, so the trapezoid rule is
        // spectrally accurate here.
        let n = 6000;
        let xs = linspace(-KERNEL_REACH, KERNEL_REACH, n + 1);
        let ys: Vec<f64> = xs.iter().map(|&u| kernel_shape(u)).collect();
        trapezoid(&xs, &ys)
    })
}

/// The unit-mass smoothing kernel in the scaled variable `u = (z − x)/h`.
///
/// A Gaussian tapered smoothly to zero between `2h` and `3h`.
pub fn kernel(u: f64) -> f64 {
    kernel_shape(u) / kernel_norm()
}

/// Peak height `K(0)` of the unit kernel.
pub fn kernel_peak() -> f64 {
    1.0 / kernel_norm()
}

/// Density from Gauss nodes and weights smoothed with a kernel of the given
/// bandwidth, on an automatically chosen grid spanning the support.
pub fn density_quadrature<C: RecursionCoeffs + ?Sized>(c: &C, size: usize, bandwidth: f64) -> Result<DensityEstimate> {
    let (nodes, _) = quadrature_from_recursion(c, size)?;
    if !(bandwidth > 0.0) {
        return Err(SpectraError::domain(format!(
            "bandwidth must be positive, got {bandwidth}"
        )));
    }
    let lo = nodes[0] - KERNEL_REACH * bandwidth;
    let hi = nodes[nodes.len() - 1] + KERNEL_REACH * bandwidth;
    let step = bandwidth / 16.0;
    let count = (((hi - lo) / step).ceil() as usize + 1).clamp(257, 1 << 17);
    density_quadrature_on(c, size, bandwidth, &linspace(lo, hi, count))
}

/// As [`density_quadrature`] but evaluated on a caller-supplied grid.
pub fn density_quadrature_on<C: RecursionCoeffs + ?Sized>(
    c: &C,
    size: usize,
    bandwidth: f64,
    grid: &[f64],
) -> Result<DensityEstimate> {
    if size < 1 {
        return Err(SpectraError::domain("quadrature size must be at least 1"));
    }
    if !(bandwidth > 0.0) {
        return Err(SpectraError::domain(format!(
            "bandwidth must be positive, got {bandwidth}"
        )));
    }
    let (nodes, weights) = quadrature_from_recursion(c, size)?;
    let mass = c.total_mass();
    let reach = KERNEL_REACH * bandwidth;
    let rho = par::map(grid, |&z| {
        let lo = nodes.partition_point(|&x| x < z - reach);
        let hi = nodes.partition_point(|&x| x <= z + reach);
        (lo..hi)
            .map(|i| weights[i] / mass * kernel((z - nodes[i]) / bandwidth))
            .sum::<f64>()
            / bandwidth
    });
    Ok(DensityEstimate {
        grid: grid.to_vec(),
        rho,
        support: Support::Interval(nodes[0] - reach, nodes[nodes.len() - 1] + reach),
        method: DensityMethod::QuadratureKernel,
        total_mass: mass,
        diagnostics: DensityDiagnostics {
            bandwidth,
            ..Default::default()
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChainClass {
    /// Coefficients settle to finite limits; single band `[a − 2b, a + 2b]`.
    BoundedBand { a_inf: f64, b_inf: f64 },
    /// Coefficients grow without bound.
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticReport {
    pub n: usize,
    pub a_n: f64,
    pub b_n: f64,
    pub a_over_n2: f64,
    pub b_over_n2: f64,
    /// Power-law exponents fitted between `N/2` and `N`.
    pub a_exponent: f64,
    pub b_exponent: f64,
    pub class: ChainClass,
}

/// Large-`N` behaviour of a chain: values, ratios to `N²` and growth class.
pub fn asymptotic_coeffs<C: RecursionCoeffs + ?Sized>(c: &C, n: usize) -> Result<AsymptoticReport> {
    if n < 10 {
        return Err(SpectraError::domain(format!(
            "asymptotic report needs N >= 10, got {n}"
        )));
    }
    let half = n / 2;
    let exponent = |hi: f64, lo: f64| {
        let (hi, lo) = (hi.abs(), lo.abs());
        if (hi - lo).abs() <= 1e-12 * (1.0 + hi) {
            0.0
        } else {
            ((1.0 + hi) / (1.0 + lo)).ln() / ((n as f64) / (half as f64)).ln()
        }
    };
    let (a_n, b_n) = (c.a(n), c.b(n));
    let a_exponent = exponent(a_n, c.a(half));
    let b_exponent = exponent(b_n, c.b(half));
    let n2 = (n * n) as f64;
    let class = if a_exponent.max(b_exponent) < 0.5 {
        ChainClass::BoundedBand {
            a_inf: a_n,
            b_inf: b_n.abs(),
        }
    } else {
        ChainClass::Unbounded
    };
    Ok(AsymptoticReport {
        n,
        a_n,
        b_n,
        a_over_n2: a_n / n2,
        b_over_n2: b_n / n2,
        a_exponent,
        b_exponent,
        class,
    })
}
