//! Transfer matrices for the physical elements of a multimode optical
//! network: two-mode couplers, phase and Gouy rotations, detuned cavity
//! reflections, loss channels and squeezers.
//!
//! Conventions:
//! - Couplers take the POWER mismatch fraction epsilon; the mixing angle is
//!   `k = asin(sqrt(epsilon))`, so a coherent probe transfers power epsilon
//!   from mode i to mode j. Swapping (i, j) reverses the rotation.
//! - Couplers are real rotations. Any coupling-induced phase belongs in an
//!   explicit adjacent `Phase` component, so all differential phase lives in
//!   one named, sweepable parameter.
//! - Cavity reflections use `r(w) = (g/2 - i(w - d)) / (g/2 + i(w - d))`:
//!   +identity on resonance at the carrier, -identity far off resonance and
//!   for the non-resonant branch (pi phase per reflection).

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{rotation2, SpectralState};
use crate::transfer::TransferMatrix;

/// One network element acting on named modes of a [`SpectralState`].
#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    /// Two-mode beam-splitter-like mixer with power mismatch `epsilon`
    /// transferred from mode `modes.0` to `modes.1`.
    Coupler { epsilon: f64, modes: (usize, usize) },
    /// Quadrature rotation by `phi` on one mode.
    Phase { phi: f64, mode: usize },
    /// Propagation (Gouy) segment: rotation by `mode_order * psi`, so the
    /// differential phase against an order-0 fundamental mode is `psi` per
    /// order.
    Gouy {
        psi: f64,
        mode_order: u32,
        mode: usize,
    },
    /// Single-sided cavity reflection. `resonant` modes see the sideband
    /// reflectivities r(+/-omega); non-resonant modes see -identity.
    Cavity {
        delta: f64,
        gamma: f64,
        mode: usize,
        resonant: bool,
    },
    /// Beam-splitter loss channel of power loss `lambda`.
    Loss { lambda: f64, mode: usize },
    /// In-line squeezer.
    Squeezer { r: f64, angle: f64, mode: usize },
}

/// Real orthogonal symplectic mixing of modes i and j with mixing angle
/// `asin(sqrt(epsilon))`; identity on all other modes.
pub fn coupler_matrix(epsilon: f64, n_modes: usize, i: usize, j: usize) -> Result<TransferMatrix> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::invalid_argument(format!(
            "coupler power mismatch must be in [0, 1), got {epsilon}"
        )));
    }
    if i == j || i >= n_modes || j >= n_modes {
        return Err(Error::invalid_argument(format!(
            "coupler needs two distinct modes below {n_modes}, got ({i}, {j})"
        )));
    }
    let k = epsilon.sqrt().asin();
    let (s, c) = k.sin_cos();
    let cid = Matrix2::from_diagonal_element(Complex64::new(c, 0.0));
    let soff = Matrix2::from_diagonal_element(Complex64::new(s, 0.0));
    Ok(TransferMatrix::from_blocks(
        n_modes,
        &[(i, i, cid), (i, j, -soff), (j, i, soff), (j, j, cid)],
    ))
}

/// 2x2 rotation R(phi) on one mode's quadrature block.
pub fn phase_matrix(phi: f64, n_modes: usize, mode: usize) -> Result<TransferMatrix> {
    if mode >= n_modes {
        return Err(Error::invalid_argument(format!(
            "phase mode {mode} out of range for {n_modes} modes"
        )));
    }
    let block = rotation2(phi).map(|x| Complex64::new(x, 0.0));
    Ok(TransferMatrix::from_blocks(n_modes, &[(mode, mode, block)]))
}

/// Gouy rotation: phase scaled by the transverse mode order.
pub fn gouy_matrix(
    psi: f64,
    mode_order: u32,
    n_modes: usize,
    mode: usize,
) -> Result<TransferMatrix> {
    phase_matrix(f64::from(mode_order) * psi, n_modes, mode)
}

/// Amplitude reflectivity of a lossless single-sided cavity at sideband
/// frequency `omega` from resonance offset `delta` (both rad/s), with full
/// linewidth `gamma` (rad/s). Unit magnitude for all arguments.
pub fn cavity_reflectivity(omega: f64, delta: f64, gamma: f64) -> Complex64 {
    let half = Complex64::new(gamma / 2.0, 0.0);
    let det = Complex64::new(0.0, omega - delta);
    (half - det) / (half + det)
}

/// Quadrature-domain cavity reflection block. For a resonant mode the block
/// mixes the sideband reflectivities r(+omega) and r(-omega):
/// `B = 1/2 [[r+ + conj(r-), i (r+ - conj(r-))], [-i (r+ - conj(r-)), r+ + conj(r-)]]`,
/// which is complex symplectic and unitary. Non-resonant modes reflect with
/// a flat pi phase (-identity).
pub fn cavity_reflection_matrix(
    omega: f64,
    delta: f64,
    gamma: f64,
    n_modes: usize,
    mode: usize,
    resonant: bool,
) -> Result<TransferMatrix> {
    if gamma <= 0.0 {
        return Err(Error::invalid_argument(format!(
            "cavity linewidth must be positive, got {gamma}"
        )));
    }
    if mode >= n_modes {
        return Err(Error::invalid_argument(format!(
            "cavity mode {mode} out of range for {n_modes} modes"
        )));
    }
    let block = if resonant {
        let rp = cavity_reflectivity(omega, delta, gamma);
        let rm_bar = cavity_reflectivity(-omega, delta, gamma).conj();
        let a = 0.5 * (rp + rm_bar);
        let c = Complex64::new(0.0, 0.5) * (rp - rm_bar);
        Matrix2::new(a, c, -c, a)
    } else {
        Matrix2::from_diagonal_element(Complex64::new(-1.0, 0.0))
    };
    Ok(TransferMatrix::from_blocks(n_modes, &[(mode, mode, block)]))
}

impl Component {
    /// Check parameter domains against a network of `n_modes` modes.
    pub fn validate(&self, n_modes: usize) -> Result<()> {
        match *self {
            Component::Coupler {
                epsilon,
                modes: (i, j),
            } => coupler_matrix(epsilon, n_modes, i, j).map(|_| ()),
            Component::Phase { phi, mode } => {
                if !phi.is_finite() {
                    return Err(Error::invalid_argument("phase must be finite"));
                }
                phase_matrix(phi, n_modes, mode).map(|_| ())
            }
            Component::Gouy {
                psi,
                mode_order,
                mode,
            } => {
                if !psi.is_finite() {
                    return Err(Error::invalid_argument("Gouy phase must be finite"));
                }
                gouy_matrix(psi, mode_order, n_modes, mode).map(|_| ())
            }
            Component::Cavity {
                delta,
                gamma,
                mode,
                resonant,
            } => {
                if !delta.is_finite() {
                    return Err(Error::invalid_argument("cavity detuning must be finite"));
                }
                cavity_reflection_matrix(0.0, delta, gamma, n_modes, mode, resonant).map(|_| ())
            }
            Component::Loss { lambda, mode } => {
                if mode >= n_modes {
                    return Err(Error::invalid_argument(format!(
                        "loss mode {mode} out of range for {n_modes} modes"
                    )));
                }
                if !(0.0..=1.0).contains(&lambda) {
                    return Err(Error::invalid_argument(format!(
                        "loss fraction must be in [0, 1], got {lambda}"
                    )));
                }
                Ok(())
            }
            Component::Squeezer { r, angle, mode } => {
                if mode >= n_modes {
                    return Err(Error::invalid_argument(format!(
                        "squeezer mode {mode} out of range for {n_modes} modes"
                    )));
                }
                if !r.is_finite() || !angle.is_finite() {
                    return Err(Error::invalid_argument(
                        "squeezer parameters must be finite",
                    ));
                }
                Ok(())
            }
        }
    }

    /// Linear transfer of this component at sideband frequency `omega`, or
    /// `None` for the non-linear channels (Loss, Squeezer) that are applied
    /// through the state directly.
    pub fn transfer(&self, omega: f64, n_modes: usize) -> Result<Option<TransferMatrix>> {
        match *self {
            Component::Coupler {
                epsilon,
                modes: (i, j),
            } => coupler_matrix(epsilon, n_modes, i, j).map(Some),
            Component::Phase { phi, mode } => phase_matrix(phi, n_modes, mode).map(Some),
            Component::Gouy {
                psi,
                mode_order,
                mode,
            } => gouy_matrix(psi, mode_order, n_modes, mode).map(Some),
            Component::Cavity {
                delta,
                gamma,
                mode,
                resonant,
            } => cavity_reflection_matrix(omega, delta, gamma, n_modes, mode, resonant).map(Some),
            Component::Loss { .. } | Component::Squeezer { .. } => Ok(None),
        }
    }

    /// Fold this component into a state (at the state's tagged frequency).
    pub fn apply(&self, state: &SpectralState) -> Result<SpectralState> {
        match *self {
            Component::Loss { lambda, mode } => state.add_loss(mode, lambda),
            Component::Squeezer { r, angle, mode } => state.squeeze(mode, r, angle),
            _ => {
                let t = self
                    .transfer(state.omega(), state.n_modes())?
                    .expect("linear components produce a transfer");
                state.apply_transfer(&t)
            }
        }
    }
}
