//! Gaussian quadrature statistics of M optical modes at one sideband
//! frequency.
//!
//! A [`SpectralState`] carries a Hermitian 2M x 2M matrix of quadrature
//! spectral densities (vacuum = identity) plus a real coherent-amplitude
//! vector, in the ordering (X_1, Y_1, X_2, Y_2, ...). The covariance is kept
//! complex so that a single formalism covers frequency-flat (real symplectic)
//! elements and frequency-dependent cavity reflections; where every element
//! is real the matrix stays numerically real.
//!
//! States are immutable values: every operation returns a new state, so
//! frequency and phase grids can be evaluated in parallel without shared
//! mutable data.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::transfer::{symplectic_form, TransferMatrix};
use crate::{EXACT_TOL, PHYSICALITY_TOL};

/// Quadrature statistics of `n_modes` optical modes at sideband frequency
/// `omega` (rad/s), relative to shot noise.
#[derive(Debug, Clone)]
pub struct SpectralState {
    n_modes: usize,
    omega: f64,
    cov: DMatrix<Complex64>,
    mean: DVector<f64>,
}

/// Extremal quadrature variances of one mode and the homodyne angles that
/// reach them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneResult {
    pub omega: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
}

impl SpectralState {
    /// Vacuum state of `n_modes` modes: covariance = identity, mean = 0.
    pub fn vacuum(n_modes: usize, omega: f64) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::invalid_argument("n_modes must be at least 1"));
        }
        Ok(SpectralState {
            n_modes,
            omega,
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes),
            mean: DVector::zeros(2 * n_modes),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn covariance(&self) -> &DMatrix<Complex64> {
        &self.cov
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    /// Coherent amplitude (X, Y) of one mode.
    pub fn mode_mean(&self, mode: usize) -> Result<(f64, f64)> {
        self.check_mode(mode)?;
        Ok((self.mean[2 * mode], self.mean[2 * mode + 1]))
    }

    /// Real part of the 2x2 covariance block of one mode. This is the part a
    /// homodyne detector can access at any local-oscillator angle.
    pub fn mode_block_re(&self, mode: usize) -> Result<Matrix2<f64>> {
        self.check_mode(mode)?;
        let b = self.cov.view((2 * mode, 2 * mode), (2, 2));
        Ok(Matrix2::new(
            b[(0, 0)].re,
            b[(0, 1)].re,
            b[(1, 0)].re,
            b[(1, 1)].re,
        ))
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes {
            return Err(Error::invalid_argument(format!(
                "mode index {} out of range for {} modes",
                mode, self.n_modes
            )));
        }
        Ok(())
    }

    fn resymmetrize(&mut self) {
        let herm = (&self.cov + self.cov.adjoint()) * Complex64::new(0.5, 0.0);
        self.cov = herm;
    }

    /// Squeeze one mode: variance along `angle` is multiplied by `exp(-2r)`,
    /// the orthogonal quadrature by `exp(+2r)`.
    pub fn squeeze(&self, mode: usize, r: f64, angle: f64) -> Result<Self> {
        self.check_mode(mode)?;
        if !r.is_finite() || !angle.is_finite() {
            return Err(Error::invalid_argument(
                "squeeze parameter and angle must be finite",
            ));
        }
        let rot = rotation2(angle);
        let sq = Matrix2::new((-r).exp(), 0.0, 0.0, r.exp());
        let block = (rot * sq * rotation2(-angle)).map(|x| Complex64::new(x, 0.0));
        let t = TransferMatrix::from_blocks(self.n_modes, &[(mode, mode, block)]);
        self.apply_transfer(&t)
    }

    /// Apply a linear transfer: `cov -> T cov T^H` (re-symmetrized) and
    /// `mean -> Re(T) mean`. The mean update is meaningful for transfers that
    /// are frequency-flat at the carrier, which is exact at omega = 0.
    pub fn apply_transfer(&self, t: &TransferMatrix) -> Result<Self> {
        if t.n_modes() != self.n_modes {
            return Err(Error::DimensionMismatch(format!(
                "transfer over {} modes applied to {}-mode state",
                t.n_modes(),
                self.n_modes
            )));
        }
        let mat = t.matrix();
        let mut out = self.clone();
        out.cov = mat * &self.cov * mat.adjoint();
        out.mean = mat.map(|z| z.re) * &self.mean;
        out.resymmetrize();
        Ok(out)
    }

    /// Mix one mode with vacuum on a beam splitter of power transmission
    /// `1 - lambda`: the mode block becomes `(1-lambda) block + lambda I`,
    /// cross-blocks and the coherent amplitude scale by `sqrt(1-lambda)`.
    pub fn add_loss(&self, mode: usize, lambda: f64) -> Result<Self> {
        self.check_mode(mode)?;
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::invalid_argument(format!(
                "loss fraction must be in [0, 1], got {lambda}"
            )));
        }
        let amp = Complex64::new((1.0 - lambda).sqrt(), 0.0);
        let t = TransferMatrix::from_blocks(
            self.n_modes,
            &[(mode, mode, Matrix2::from_diagonal_element(amp))],
        );
        let mut out = self.apply_transfer(&t)?;
        let vac = Complex64::new(lambda, 0.0);
        out.cov[(2 * mode, 2 * mode)] += vac;
        out.cov[(2 * mode + 1, 2 * mode + 1)] += vac;
        Ok(out)
    }

    /// Discard one mode and replace it with vacuum (drops all correlations
    /// with the other modes). Equivalent to `add_loss(mode, 1.0)`.
    pub fn reset_mode(&self, mode: usize) -> Result<Self> {
        self.add_loss(mode, 1.0)
    }

    /// Variance of the quadrature X_theta = X cos(theta) + Y sin(theta) of
    /// one mode.
    pub fn quadrature_variance(&self, mode: usize, theta: f64) -> Result<f64> {
        let b = self.mode_block_re(mode)?;
        let (c, s) = (theta.cos(), theta.sin());
        Ok(c * c * b[(0, 0)] + s * s * b[(1, 1)] + 2.0 * c * s * 0.5 * (b[(0, 1)] + b[(1, 0)]))
    }

    /// Extremal variances over the homodyne angle: eigenvalues of the real
    /// part of the mode's covariance block, with the angles of the
    /// corresponding principal axes.
    pub fn min_max_variance(&self, mode: usize) -> Result<HomodyneResult> {
        let b = self.mode_block_re(mode)?;
        let (a, d) = (b[(0, 0)], b[(1, 1)]);
        let c = 0.5 * (b[(0, 1)] + b[(1, 0)]);
        let mid = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + c * c).sqrt();
        let theta_max = wrap_half_turn(0.5 * (2.0 * c).atan2(a - d));
        Ok(HomodyneResult {
            omega: self.omega,
            v_min: mid - disc,
            v_max: mid + disc,
            theta_min: wrap_half_turn(theta_max + std::f64::consts::FRAC_PI_2),
            theta_max,
        })
    }

    /// Purity `1 / sqrt(det Re(cov))`; equals 1 exactly for pure states with
    /// real covariance and decreases under loss and mode mixing.
    pub fn purity(&self) -> Result<f64> {
        let re = self.cov.map(|z| z.re);
        let det = re.determinant();
        if det <= 0.0 {
            return Err(Error::InvalidState(format!(
                "covariance is not positive definite (det Re cov = {det})"
            )));
        }
        Ok(1.0 / det.sqrt())
    }

    /// Largest Hermiticity violation `max |cov - cov^H|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        (&self.cov - self.cov.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of `cov + iJ`. Physical states satisfy
    /// `cov + iJ >= 0`, so the margin must not fall below `-PHYSICALITY_TOL`.
    pub fn physicality_margin(&self) -> f64 {
        let j = symplectic_form(self.n_modes).map(|x| Complex64::new(0.0, x));
        let m = &self.cov + j;
        let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |acc, &x| acc.min(x))
    }

    /// Check Hermiticity and the uncertainty bound, returning an
    /// invalid-state error on violation. Checked lazily (on demand), not per
    /// operation.
    pub fn check_physical(&self) -> Result<()> {
        let herm = self.hermiticity_deviation();
        if herm > 10.0 * EXACT_TOL {
            return Err(Error::InvalidState(format!(
                "covariance is not Hermitian (deviation {herm:.3e})"
            )));
        }
        let margin = self.physicality_margin();
        if margin < -PHYSICALITY_TOL {
            return Err(Error::InvalidState(format!(
                "state violates the uncertainty relation (margin {margin:.3e})"
            )));
        }
        Ok(())
    }

    /// Set the coherent amplitude of one mode (used to launch classical
    /// probes for cold-loss bookkeeping).
    pub fn with_mode_mean(&self, mode: usize, x: f64, y: f64) -> Result<Self> {
        self.check_mode(mode)?;
        let mut out = self.clone();
        out.mean[2 * mode] = x;
        out.mean[2 * mode + 1] = y;
        Ok(out)
    }
}

/// 2x2 rotation by `phi` acting on a mode's (X, Y) quadrature pair.
pub(crate) fn rotation2(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Wrap an angle into [0, pi); quadrature variances have period pi.
fn wrap_half_turn(theta: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let mut t = theta % pi;
    if t < 0.0 {
        t += pi;
    }
    t
}
