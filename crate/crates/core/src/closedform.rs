//! Closed-form results for the two-coupler (Mach-Zehnder-like) spatial-mode
//! mixing cell: exact and small-mismatch cold loss, the measured
//! squeezed-quadrature variance, and its weak-coupling decomposition into an
//! effective loss plus a thermal noise term.
//!
//! Everything here is frequency-flat; sideband-frequency dependence enters
//! only through cavity components in the network module. The master formula
//! is implemented verbatim and is cross-checked against the Gaussian
//! propagation core by the test suite, which guards against transcription
//! drift in either route.

use crate::components::{coupler_matrix, phase_matrix};
use crate::error::{Error, Result};
use crate::state::SpectralState;

/// Parameters of a two-coupler mixing cell: power mismatch fractions at the
/// two couplers, the differential phase picked up by the auxiliary mode
/// between them, and the input squeeze parameter (squeezed variance
/// `exp(-2r)` enters the fundamental mode).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MzParams {
    pub eps1: f64,
    pub eps2: f64,
    pub phi: f64,
    pub r: f64,
}

impl MzParams {
    pub fn new(eps1: f64, eps2: f64, phi: f64, r: f64) -> Result<Self> {
        for (name, eps) in [("eps1", eps1), ("eps2", eps2)] {
            if !(0.0..1.0).contains(&eps) {
                return Err(Error::invalid_argument(format!(
                    "{name} must be in [0, 1), got {eps}"
                )));
            }
        }
        if !phi.is_finite() {
            return Err(Error::invalid_argument("phi must be finite"));
        }
        if !r.is_finite() || r < 0.0 {
            return Err(Error::invalid_argument(format!(
                "squeeze parameter must be finite and non-negative, got {r}"
            )));
        }
        Ok(MzParams { eps1, eps2, phi, r })
    }

    fn mixing_angles(&self) -> (f64, f64) {
        (self.eps1.sqrt().asin(), self.eps2.sqrt().asin())
    }
}

/// Weak-coupling description of a mixing cell as a loss `lambda_smm` plus an
/// additive thermal noise term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveChannel {
    /// Effective power loss.
    pub lambda_smm: f64,
    /// Effective normalized noise temperature (dimensionless variance added
    /// on top of the lossy-channel output).
    pub noise_temperature: f64,
}

/// Exact phase-dependent power loss of a coherent probe through two couplers:
/// `1 - |cos k1 cos k2 - e^{i phi} sin k1 sin k2|^2` with
/// `k_i = asin(sqrt(eps_i))`. Always in [0, 1]; zero at equal mismatch and
/// phi = pi.
pub fn cold_loss_exact(eps1: f64, eps2: f64, phi: f64) -> f64 {
    let (k1, k2) = (eps1.sqrt().asin(), eps2.sqrt().asin());
    let direct = k1.cos() * k2.cos();
    let via_aux = k1.sin() * k2.sin();
    let re = direct - phi.cos() * via_aux;
    let im = -phi.sin() * via_aux;
    (1.0 - (re * re + im * im)).clamp(0.0, 1.0)
}

/// Small-mismatch cold loss `eps1 + eps2 + 2 sqrt(eps1 eps2) cos(phi)`.
/// For equal mismatch eps = k^2 this reduces to `2 k^2 (1 + cos phi)`.
pub fn cold_loss_smallk(eps1: f64, eps2: f64, phi: f64) -> f64 {
    eps1 + eps2 + 2.0 * (eps1 * eps2).sqrt() * phi.cos()
}

/// Measured variance of the input-squeezed quadrature after the cell,
/// relative to shot noise (the four-term master formula):
///
/// ```text
/// S = (cos k2 sin k1 + cos k1 cos phi sin k2)^2
///   + e^{-2r} (cos k1 cos k2 - cos phi sin k1 sin k2)^2
///   + cos^2 k1 sin^2 k2 sin^2 phi
///   + e^{+2r} sin^2 k1 sin^2 k2 sin^2 phi
/// ```
pub fn hot_variance(p: &MzParams) -> f64 {
    let (k1, k2) = p.mixing_angles();
    let (s1, c1) = k1.sin_cos();
    let (s2, c2) = k2.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    let shot = c2 * s1 + c1 * cp * s2;
    let squeezed = c1 * c2 - cp * s1 * s2;
    let thermal_vac = c1 * c1 * s2 * s2 * sp * sp;
    let thermal_hot = s1 * s1 * s2 * s2 * sp * sp;
    shot * shot
        + (-2.0 * p.r).exp() * squeezed * squeezed
        + thermal_vac
        + (2.0 * p.r).exp() * thermal_hot
}

/// Weak-coupling approximation `e^{-2r}(1 - lambda) + lambda + T` with
/// `lambda` from [`cold_loss_smallk`] and `T = eps1 eps2 e^{2r} sin^2 phi`.
pub fn hot_variance_weak(p: &MzParams) -> f64 {
    let ch = effective_channel(p);
    (-2.0 * p.r).exp() * (1.0 - ch.lambda_smm) + ch.lambda_smm + ch.noise_temperature
}

/// The (lambda_smm, T) pair of the weak-coupling decomposition.
pub fn effective_channel(p: &MzParams) -> EffectiveChannel {
    EffectiveChannel {
        lambda_smm: cold_loss_smallk(p.eps1, p.eps2, p.phi),
        noise_temperature: p.eps1 * p.eps2 * (2.0 * p.r).exp() * p.phi.sin() * p.phi.sin(),
    }
}

/// Gaussian two-coupler model of the cell (squeezed fundamental mode 0,
/// vacuum auxiliary mode 1), evaluated by the propagation core. Equals
/// [`hot_variance`] on the squeezed quadrature by construction; the test
/// suite enforces agreement to 1e-10.
pub fn mz_state(p: &MzParams) -> Result<SpectralState> {
    let state = SpectralState::vacuum(2, 0.0)?
        .squeeze(0, p.r, 0.0)?
        .apply_transfer(&coupler_matrix(p.eps1, 2, 0, 1)?)?
        .apply_transfer(&phase_matrix(p.phi, 2, 1)?)?
        .apply_transfer(&coupler_matrix(p.eps2, 2, 0, 1)?)?;
    Ok(state)
}

/// True when the cell pushes the measured squeezed-quadrature variance above
/// shot noise, i.e. when the apparent loss on the squeeze factor exceeds
/// 100%. Evaluated with the Gaussian two-coupler model rather than the
/// closed form.
///
/// The detected quadrature is the one that carried the input squeezing; in
/// the frequency-flat cell the coherent cross-correlations always leave some
/// rotated quadrature below shot noise, so classification over all homodyne
/// angles would never trigger. Tomographic min/max remain available through
/// [`SpectralState::min_max_variance`].
pub fn is_hyperloss(p: &MzParams) -> Result<bool> {
    let v = mz_state(p)?.quadrature_variance(0, 0.0)?;
    Ok(v > 1.0 + crate::PHYSICALITY_TOL)
}
