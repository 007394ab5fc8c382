//! Tridiagonal-representation solutions of the three-dimensional Schrödinger
//! equation for the non-central potential class
//!
//! ```text
//! V(r, θ) = V(r) + [Ĉ + C cos θ] / (2 r² sin² θ) − C₀ cos θ / (2 r²)
//! ```
//!
//! with a Coulomb or oscillator radial part.
//!
//! The crate is organised bottom-up:
//!
//! * [`orthopoly`]: classical polynomial kernels (Jacobi, Laguerre,
//!   Meixner-Pollaczek) and Gauss rules built from recursion coefficients.
//! * [`recursion`]: generic three-term recursion machinery, continued-fraction
//!   resolvents and density (weight function) estimators.
//! * [`angular`]: the angular basis, its tridiagonal cases and the H/Q
//!   polynomial families.
//! * [`radial`]: Laguerre radial bases, Coulomb and oscillator spectra,
//!   bound states and the Meixner-Pollaczek scattering series.
//! * [`assembly`]: complete solution spaces, the Ĉ = C = 0, C₀ ≠ 0 special
//!   states and the Aharonov-Bohm plus monopole application.
//! * [`verify`]: closed forms checked against independent quadrature and
//!   limit computations, reported as residual/tolerance pairs.
//!
//! Grid-shaped work goes through [`par`], which uses rayon when the
//! `parallel` feature is enabled (the default) and plain iterators otherwise.

pub mod angular;
pub mod assembly;
pub mod error;
pub mod orthopoly;
pub mod par;
pub mod radial;
pub mod recursion;
pub mod special;
pub mod verify;

pub use error::{Result, SpectraError};
