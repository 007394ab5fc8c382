//! Scalar special functions shared by the polynomial and radial modules.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Natural log of Γ(x) for real x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Γ(a) / Γ(b) evaluated through logarithms.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    (ln_gamma(a) - ln_gamma(b)).exp()
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn ln_gamma_right(z: Complex64) -> Complex64 {
    // Lanczos approximation, valid for Re z >= 1/2.
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_P[0], 0.0);
    for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// ln |sin(π z)| without overflow for large |Im z|.
fn ln_abs_sin_pi(z: Complex64) -> f64 {
    let a = PI * z.re;
    let b = (PI * z.im).abs();
    let e2 = (-2.0 * b).exp();
    let inner = 0.5 * (1.0 + e2 * e2) - (2.0 * a).cos() * e2;
    b + 0.5 * inner.ln() - 0.5 * 2f64.ln()
}

/// ln |Γ(z)| for complex z away from the non-positive integers.
pub fn ln_abs_gamma_complex(z: Complex64) -> f64 {
    if z.re >= 0.5 {
        ln_gamma_right(z).re
    } else {
        PI.ln() - ln_abs_sin_pi(z) - ln_gamma_right(Complex64::new(1.0, 0.0) - z).re
    }
}

/// Smooth roll-off used for series summation and kernel tapering.
///
/// Equals 1 on `[0, plateau]`, 0 for `t >= 1`, and is C^∞ in between.
pub fn smooth_window(t: f64, plateau: f64) -> f64 {
    if t <= plateau {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let s = (t - plateau) / (1.0 - plateau);
    let f = |u: f64| if u > 0.0 { (-1.0 / u).exp() } else { 0.0 };
    let (a, b) = (f(1.0 - s), f(s));
    a / (a + b)
}
