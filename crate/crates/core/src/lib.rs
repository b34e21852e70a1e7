//! Gaussian quadrature-statistics engine for squeezed light in multimode
//! optical networks with spatial-mode mixing.
//!
//! The crate propagates frequency-tagged quadrature spectral densities
//! through couplers, phase/Gouy rotations, detuned cavity reflections, loss
//! channels and squeezers, exposes the closed-form Mach-Zehnder results that
//! the propagation core must reproduce, and provides sweep, map and
//! phase-optimization tooling on top.
//!
//! All variances are relative to shot noise (vacuum = 1). Squeezing in dB is
//! reported positive below shot noise: `db = -10 log10(variance)`.

pub mod analysis;
pub mod closedform;
pub mod components;
pub mod config;
pub mod error;
pub mod network;
pub mod optimizer;
pub mod state;
pub mod transfer;

pub use error::{Error, Result};
pub use state::{HomodyneResult, SpectralState};
pub use transfer::TransferMatrix;

/// Hermiticity / symplectic identity tolerance.
pub const EXACT_TOL: f64 = 1e-12;
/// Slack for the physicality and uncertainty checks.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Squeeze parameter for a target squeezing level in dB below shot noise,
/// so that `exp(-2 r) = 10^(-db/10)`.
pub fn squeeze_param_from_db(db: f64) -> f64 {
    db * std::f64::consts::LN_10 / 20.0
}

/// Variance relative to shot noise expressed in dB below shot noise
/// (negative values mean excess noise above shot noise).
pub fn variance_to_db(variance: f64) -> f64 {
    -10.0 * variance.log10()
}

/// Inverse of [`variance_to_db`].
pub fn db_to_variance(db: f64) -> f64 {
    10f64.powf(-db / 10.0)
}
