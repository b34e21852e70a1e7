//! Parameter sweeps, hyperloss classification, fault-tolerance phase-fraction
//! statistics, and (phase, frequency) map generation.
//!
//! Sweep points carry three variances of the readout mode:
//! - `v_min` / `v_max`: tomographic extrema over the homodyne angle,
//! - `v_sqz`: the variance along the nominal input-squeezing angle.
//!
//! Hyperloss classification uses `v_sqz`: hyperloss means the apparent loss
//! on the squeeze factor exceeds 100%, i.e. the detected squeezed quadrature
//! rises above shot noise. In a frequency-flat network the tomographic
//! minimum always stays below shot noise for a pure input (the mixing
//! correlations remain real and some rotated quadrature benefits), so it
//! cannot classify the effect; in cavity networks the correlations move into
//! the imaginary part of the cross spectrum and the tomographic minimum
//! itself exceeds shot noise, which the map operations report per row.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::network::{network_baseline_variance, ChainSpec, NetworkSpec};
use crate::variance_to_db;
use crate::PHYSICALITY_TOL;

/// Default phase grid resolution over [0, 2pi).
pub const DEFAULT_PHI_POINTS: usize = 720;

/// Evenly spaced grid of `n` phases covering [0, 2pi).
pub fn phi_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / n as f64)
        .collect()
}

/// One evaluated sweep point.
#[derive(Debug, Clone, Copy)]
pub struct SweepPoint {
    pub axis_value: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub v_sqz: f64,
    pub cold_loss: Option<f64>,
}

/// Variance curves along one swept parameter at a fixed analysis frequency.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axis_name: String,
    /// Analysis frequency (rad/s) the variances were evaluated at.
    pub omega: f64,
    pub points: Vec<SweepPoint>,
    /// Snapshot of the swept input description.
    pub metadata: String,
}

impl SweepResult {
    pub fn axis_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.axis_value).collect()
    }
}

/// Matrix of tomographic minimal variances over (swept parameter, frequency).
#[derive(Debug, Clone)]
pub struct PhaseMap {
    pub axis_name: String,
    pub axis: Vec<f64>,
    /// Column frequencies in rad/s.
    pub omega_grid: Vec<f64>,
    /// `v_min[row][col]` at (axis[row], omega_grid[col]).
    pub v_min: Vec<Vec<f64>>,
    pub slice_omega: f64,
}

/// Effective-loss summary of a network at one phase setting.
#[derive(Debug, Clone, Copy)]
pub struct RecoveryReport {
    pub phi_star: f64,
    pub v_min: f64,
    /// Output squeezing in dB below shot noise at the optimal homodyne angle.
    pub recovered_db: f64,
    /// Total pure-loss fraction that would reproduce `v_min` from the known
    /// input squeezing through the lossy-channel map.
    pub effective_loss_total: f64,
    /// Part of the effective loss attributable to mode mismatch, after
    /// removing the configured external loss multiplicatively.
    pub effective_loss_mismatch: f64,
}

fn sweep_network_point(net: &NetworkSpec, axis_value: f64) -> Result<SweepPoint> {
    let state = net.evaluate(net.slice_omega)?;
    let h = state.min_max_variance(net.readout_mode)?;
    Ok(SweepPoint {
        axis_value,
        v_min: h.v_min,
        v_max: h.v_max,
        v_sqz: net.readout_squeezed_variance(&state)?,
        cold_loss: Some(net.cold_throughput()?),
    })
}

/// Evaluate the readout statistics at each value of the designated swept
/// phase (or cavity detuning), at the network's slice frequency.
pub fn phase_sweep(net: &NetworkSpec, grid: &[f64]) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::invalid_argument("sweep grid is empty"));
    }
    net.validate()?;
    if net.sweep_component.is_none() {
        return Err(Error::config("network has no designated sweep component"));
    }
    let points: Result<Vec<SweepPoint>> = grid
        .par_iter()
        .map(|&phi| sweep_network_point(&net.with_swept_value(phi)?, phi))
        .collect();
    Ok(SweepResult {
        axis_name: "phi_rad".into(),
        omega: net.slice_omega,
        points: points?,
        metadata: format!("{net:?}"),
    })
}

/// Evaluate a chain at each common differential phase.
pub fn chain_phase_sweep(chain: &ChainSpec, grid: &[f64]) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::invalid_argument("sweep grid is empty"));
    }
    chain.validate()?;
    let points: Result<Vec<SweepPoint>> = grid
        .par_iter()
        .map(|&phi| {
            let out = chain.with_common_phase(phi).outcome()?;
            Ok(SweepPoint {
                axis_value: phi,
                v_min: out.v_min,
                v_max: out.v_max,
                v_sqz: out.v_sqz,
                cold_loss: None,
            })
        })
        .collect();
    Ok(SweepResult {
        axis_name: "phi_rad".into(),
        omega: 0.0,
        points: points?,
        metadata: format!("{chain:?}"),
    })
}

/// Sweep the power mismatch of every coupler in the network with the
/// designated phase held at `phi`.
pub fn mismatch_sweep(net: &NetworkSpec, eps_grid: &[f64], phi: f64) -> Result<SweepResult> {
    if eps_grid.is_empty() {
        return Err(Error::invalid_argument("sweep grid is empty"));
    }
    let base = net.with_swept_value(phi)?;
    let points: Result<Vec<SweepPoint>> = eps_grid
        .par_iter()
        .map(|&eps| {
            let mut n = base.clone();
            for c in &mut n.components {
                if let crate::components::Component::Coupler { epsilon, .. } = c {
                    *epsilon = eps;
                }
            }
            sweep_network_point(&n, eps)
        })
        .collect();
    Ok(SweepResult {
        axis_name: "eps_frac".into(),
        omega: net.slice_omega,
        points: points?,
        metadata: format!("{net:?} at phi = {phi}"),
    })
}

/// Indices of sweep points in the hyperloss regime: detected
/// squeezed-quadrature variance above shot noise (with a 1e-9 guard band).
pub fn hyperloss_region(sweep: &SweepResult) -> Vec<usize> {
    sweep
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.v_sqz > 1.0 + PHYSICALITY_TOL)
        .map(|(i, _)| i)
        .collect()
}

/// Fraction of grid phases for which the chain's output squeezing falls
/// strictly below `threshold_db` (1e-9 dB guard band).
pub fn fraction_below_threshold(chain: &ChainSpec, threshold_db: f64, grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::invalid_argument("phase grid is empty"));
    }
    let below: Result<Vec<bool>> = grid
        .par_iter()
        .map(|&phi| Ok(chain.with_common_phase(phi).evaluate()? < threshold_db - 1e-9))
        .collect();
    let below = below?;
    Ok(below.iter().filter(|&&b| b).count() as f64 / grid.len() as f64)
}

/// Complementary fraction: output squeezing at or above `threshold_db`.
pub fn fraction_at_or_above(chain: &ChainSpec, threshold_db: f64, grid: &[f64]) -> Result<f64> {
    Ok(1.0 - fraction_below_threshold(chain, threshold_db, grid)?)
}

/// Tomographic minimal variance over (swept parameter, frequency).
pub fn hyperloss_map(net: &NetworkSpec, grid: &[f64]) -> Result<PhaseMap> {
    if grid.is_empty() {
        return Err(Error::invalid_argument("sweep grid is empty"));
    }
    net.validate()?;
    if net.frequency_grid.is_empty() {
        return Err(Error::config("frequency grid is empty"));
    }
    let rows: Result<Vec<Vec<f64>>> = grid
        .par_iter()
        .map(|&phi| {
            let n = net.with_swept_value(phi)?;
            n.frequency_grid
                .iter()
                .map(|&omega| Ok(n.evaluate(omega)?.min_max_variance(n.readout_mode)?.v_min))
                .collect()
        })
        .collect();
    Ok(PhaseMap {
        axis_name: "phi_rad".into(),
        axis: grid.to_vec(),
        omega_grid: net.frequency_grid.clone(),
        v_min: rows?,
        slice_omega: net.slice_omega,
    })
}

impl PhaseMap {
    /// Column index closest to the analysis slice frequency.
    pub fn slice_column(&self) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, &w) in self.omega_grid.iter().enumerate() {
            let d = (w - self.slice_omega).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    /// Rows whose slice-frequency minimal variance exceeds shot noise.
    pub fn hyperloss_rows(&self) -> Vec<usize> {
        let col = self.slice_column();
        (0..self.axis.len())
            .filter(|&i| self.v_min[i][col] > 1.0 + PHYSICALITY_TOL)
            .collect()
    }

    /// Rows whose slice-frequency minimal variance is below `baseline`.
    pub fn rows_below(&self, baseline: f64) -> Vec<usize> {
        let col = self.slice_column();
        (0..self.axis.len())
            .filter(|&i| self.v_min[i][col] < baseline - PHYSICALITY_TOL)
            .collect()
    }

    /// Row of maximal slice-frequency noise: the hyperloss slice marker.
    pub fn hyperloss_slice_row(&self) -> usize {
        let col = self.slice_column();
        let mut best = 0;
        for i in 1..self.axis.len() {
            if self.v_min[i][col] > self.v_min[best][col] {
                best = i;
            }
        }
        best
    }
}

/// Evaluate the network at `phi_star`, report the squeezing at the optimal
/// homodyne angle, and invert the lossy-channel map against the known input
/// squeezing to express the result as an equivalent pure loss.
pub fn recovery_report(net: &NetworkSpec, phi_star: f64) -> Result<RecoveryReport> {
    let n = net.with_swept_value(phi_star)?;
    let state = n.evaluate(n.slice_omega)?;
    let v_min = state.min_max_variance(n.readout_mode)?.v_min;
    let v_in = (-2.0 * n.input.r).exp();
    if v_in >= 1.0 {
        return Err(Error::InvalidProblem(
            "recovery report needs a squeezed input (r > 0)".into(),
        ));
    }
    let effective_loss_total = ((v_min - v_in) / (1.0 - v_in)).clamp(0.0, 1.0);
    let effective_loss_mismatch = if net.external_loss < 1.0 {
        (1.0 - (1.0 - effective_loss_total) / (1.0 - net.external_loss)).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(RecoveryReport {
        phi_star,
        v_min,
        recovered_db: variance_to_db(v_min),
        effective_loss_total,
        effective_loss_mismatch,
    })
}

/// Incoherent mismatch-as-loss baseline variance of a network, for map and
/// report comparisons.
pub fn baseline_variance(net: &NetworkSpec) -> f64 {
    network_baseline_variance(net)
}
