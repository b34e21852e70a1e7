//! Optical-network and mixing-chain descriptions plus their frequency-
//! resolved evaluation: homodyne statistics of the readout mode and
//! cold-probe power throughput.

use rayon::prelude::*;

use crate::components::Component;
use crate::error::{Error, Result};
use crate::state::{HomodyneResult, SpectralState};
use crate::variance_to_db;

/// Default analysis slice frequency (Hz).
pub const DEFAULT_SLICE_HZ: f64 = 3.75e6;

/// Default frequency grid: 201 points spanning 0-10 MHz, as angular
/// frequencies.
pub fn default_frequency_grid() -> Vec<f64> {
    let points = 201;
    (0..points)
        .map(|i| 2.0 * std::f64::consts::PI * 1.0e7 * i as f64 / (points - 1) as f64)
        .collect()
}

/// A named transverse mode; `order` 0 is the fundamental mode, higher orders
/// accumulate proportionally faster Gouy phase.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDef {
    pub label: String,
    pub order: u32,
}

/// Input squeezed-state preparation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputSqueeze {
    pub mode: usize,
    pub r: f64,
    pub angle: f64,
}

/// An ordered optical network over named modes, with a single readout mode,
/// lumped external loss applied at readout, and a frequency grid for
/// spectrum evaluation.
#[derive(Debug, Clone)]
pub struct NetworkSpec {
    pub modes: Vec<ModeDef>,
    pub components: Vec<Component>,
    pub readout_mode: usize,
    pub input: InputSqueeze,
    pub external_loss: f64,
    /// Sideband frequencies in rad/s.
    pub frequency_grid: Vec<f64>,
    /// Analysis slice frequency in rad/s.
    pub slice_omega: f64,
    /// Index of the designated sweepable component (a Phase/Gouy phase or a
    /// Cavity detuning), if any.
    pub sweep_component: Option<usize>,
}

impl NetworkSpec {
    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.n_modes();
        if m == 0 {
            return Err(Error::config("network needs at least one mode"));
        }
        if self.readout_mode >= m {
            return Err(Error::config("readout mode out of range"));
        }
        if self.input.mode >= m {
            return Err(Error::config("input mode out of range"));
        }
        if !(0.0..=1.0).contains(&self.external_loss) {
            return Err(Error::config(format!(
                "external loss must be in [0, 1], got {}",
                self.external_loss
            )));
        }
        if !self.input.r.is_finite() || self.input.r < 0.0 {
            return Err(Error::config(
                "input squeeze parameter must be finite and >= 0",
            ));
        }
        for (i, c) in self.components.iter().enumerate() {
            c.validate(m)
                .map_err(|e| Error::config(format!("component {i}: {e}")))?;
        }
        if let Some(idx) = self.sweep_component {
            match self.components.get(idx) {
                Some(Component::Phase { .. })
                | Some(Component::Gouy { .. })
                | Some(Component::Cavity { .. }) => {}
                Some(_) => {
                    return Err(Error::config(format!(
                        "sweep component {idx} must be a phase, Gouy segment or cavity"
                    )))
                }
                None => return Err(Error::config(format!("sweep component {idx} out of range"))),
            }
        }
        Ok(())
    }

    /// Propagate the input squeezed state through every component in order
    /// and apply the external loss at the readout, at one sideband frequency.
    pub fn evaluate(&self, omega: f64) -> Result<SpectralState> {
        self.validate()?;
        let mut state = SpectralState::vacuum(self.n_modes(), omega)?.squeeze(
            self.input.mode,
            self.input.r,
            self.input.angle,
        )?;
        for c in &self.components {
            state = c.apply(&state)?;
        }
        if self.external_loss > 0.0 {
            state = state.add_loss(self.readout_mode, self.external_loss)?;
        }
        Ok(state)
    }

    /// Tomographic min/max variance of the readout mode at every grid
    /// frequency, selecting the homodyne angle of minimal noise per
    /// frequency.
    pub fn homodyne_spectrum(&self) -> Result<Vec<HomodyneResult>> {
        self.validate()?;
        if self.frequency_grid.is_empty() {
            return Err(Error::config("frequency grid is empty"));
        }
        self.frequency_grid
            .par_iter()
            .map(|&omega| self.evaluate(omega)?.min_max_variance(self.readout_mode))
            .collect()
    }

    /// Variance of the readout mode along the nominal input squeezing angle.
    pub fn readout_squeezed_variance(&self, state: &SpectralState) -> Result<f64> {
        state.quadrature_variance(self.readout_mode, self.input.angle)
    }

    /// Power loss seen by a classical probe: a unit coherent amplitude in
    /// the input mode is propagated through the carrier-frequency (omega = 0)
    /// transfers of every component plus the external loss, and the power
    /// left in the readout mode is compared to the input. The input squeezer
    /// is the state preparation and does not act on the probe.
    pub fn cold_throughput(&self) -> Result<f64> {
        self.validate()?;
        let mut state = SpectralState::vacuum(self.n_modes(), 0.0)?.with_mode_mean(
            self.input.mode,
            1.0,
            0.0,
        )?;
        for c in &self.components {
            state = c.apply(&state)?;
        }
        if self.external_loss > 0.0 {
            state = state.add_loss(self.readout_mode, self.external_loss)?;
        }
        let (x, y) = state.mode_mean(self.readout_mode)?;
        Ok((1.0 - (x * x + y * y)).clamp(0.0, 1.0))
    }

    /// Current value of the designated swept parameter.
    pub fn swept_value(&self) -> Option<f64> {
        let idx = self.sweep_component?;
        match self.components.get(idx)? {
            Component::Phase { phi, .. } => Some(*phi),
            Component::Gouy { psi, .. } => Some(*psi),
            Component::Cavity { delta, .. } => Some(*delta),
            _ => None,
        }
    }

    /// Copy of the network with the designated swept parameter set to
    /// `value` (phase in rad, or cavity detuning in rad/s).
    pub fn with_swept_value(&self, value: f64) -> Result<NetworkSpec> {
        let idx = self
            .sweep_component
            .ok_or_else(|| Error::config("network has no designated sweep component"))?;
        let mut out = self.clone();
        match out.components.get_mut(idx) {
            Some(Component::Phase { phi, .. }) => *phi = value,
            Some(Component::Gouy { psi, .. }) => *psi = value,
            Some(Component::Cavity { delta, .. }) => *delta = value,
            _ => return Err(Error::config(format!("component {idx} is not sweepable"))),
        }
        Ok(out)
    }

    /// Copy with the phase of an arbitrary Phase/Gouy component set.
    pub fn with_phase_value(&self, component: usize, value: f64) -> Result<NetworkSpec> {
        let mut out = self.clone();
        match out.components.get_mut(component) {
            Some(Component::Phase { phi, .. }) => *phi = value,
            Some(Component::Gouy { psi, .. }) => *psi = value,
            Some(_) => {
                return Err(Error::InvalidProblem(format!(
                    "component {component} is not a phase or Gouy segment"
                )))
            }
            None => {
                return Err(Error::InvalidProblem(format!(
                    "component index {component} out of range"
                )))
            }
        }
        Ok(out)
    }

    /// Frequency-flat two-coupler cell as a network: squeezed fundamental
    /// mode, vacuum auxiliary mode, differential phase between the couplers
    /// (the phase component is the designated sweep target).
    pub fn mach_zehnder(
        eps1: f64,
        eps2: f64,
        phi: f64,
        r: f64,
        external_loss: f64,
    ) -> Result<Self> {
        let spec = NetworkSpec {
            modes: vec![
                ModeDef {
                    label: "fm".into(),
                    order: 0,
                },
                ModeDef {
                    label: "hom".into(),
                    order: 1,
                },
            ],
            components: vec![
                Component::Coupler {
                    epsilon: eps1,
                    modes: (0, 1),
                },
                Component::Phase { phi, mode: 1 },
                Component::Coupler {
                    epsilon: eps2,
                    modes: (0, 1),
                },
            ],
            readout_mode: 0,
            input: InputSqueeze {
                mode: 0,
                r,
                angle: 0.0,
            },
            external_loss,
            frequency_grid: vec![0.0],
            slice_omega: 0.0,
            sweep_component: Some(1),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// How the auxiliary higher-order mode is carried between chain nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomPolicy {
    /// One shared auxiliary mode threads every node, so inter-node phase
    /// coherence matters.
    Shared,
    /// The auxiliary mode is replaced by fresh vacuum before every coupler;
    /// each node then acts as an independent loss, reproducing the
    /// incoherent baseline exactly.
    Refreshed,
}

/// Placement of the differential phase inside each node. The two orderings
/// give identical readout statistics (the auxiliary mode starts in vacuum,
/// where a leading rotation is a no-op, and a trailing rotation does not
/// touch the fundamental mode); both are kept so either reading of a chain
/// description can be expressed directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeOrdering {
    CouplerThenPhase,
    PhaseThenCoupler,
}

/// Per-node differential phase assignment.
#[derive(Debug, Clone, PartialEq)]
pub enum ChainPhases {
    Common(f64),
    PerNode(Vec<f64>),
}

/// A chain of identical-mismatch mixing cells threaded by one squeezed
/// fundamental mode.
#[derive(Debug, Clone)]
pub struct ChainSpec {
    pub n_nodes: usize,
    pub eps: f64,
    pub phases: ChainPhases,
    pub r_in: f64,
    pub hom_policy: HomPolicy,
    pub ordering: NodeOrdering,
}

/// Readout statistics of a chain (fundamental mode).
#[derive(Debug, Clone, Copy)]
pub struct ChainOutcome {
    /// Variance along the input squeezing angle (the detected quadrature).
    pub v_sqz: f64,
    /// Tomographic extrema over the homodyne angle.
    pub v_min: f64,
    pub v_max: f64,
}

impl ChainSpec {
    pub fn new(n_nodes: usize, eps: f64, phi: f64, r_in: f64) -> Result<Self> {
        let spec = ChainSpec {
            n_nodes,
            eps,
            phases: ChainPhases::Common(phi),
            r_in,
            hom_policy: HomPolicy::Shared,
            ordering: NodeOrdering::CouplerThenPhase,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_policy(mut self, policy: HomPolicy) -> Self {
        self.hom_policy = policy;
        self
    }

    pub fn with_ordering(mut self, ordering: NodeOrdering) -> Self {
        self.ordering = ordering;
        self
    }

    pub fn with_common_phase(&self, phi: f64) -> Self {
        let mut out = self.clone();
        out.phases = ChainPhases::Common(phi);
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nodes == 0 {
            return Err(Error::invalid_argument("chain needs at least one node"));
        }
        if !(0.0..1.0).contains(&self.eps) {
            return Err(Error::invalid_argument(format!(
                "per-node mismatch must be in [0, 1), got {}",
                self.eps
            )));
        }
        if !self.r_in.is_finite() || self.r_in < 0.0 {
            return Err(Error::invalid_argument(
                "input squeeze parameter must be >= 0",
            ));
        }
        if let ChainPhases::PerNode(v) = &self.phases {
            if v.len() != self.n_nodes {
                return Err(Error::invalid_argument(format!(
                    "per-node phase list has {} entries for {} nodes",
                    v.len(),
                    self.n_nodes
                )));
            }
        }
        Ok(())
    }

    fn phase_at(&self, node: usize) -> f64 {
        match &self.phases {
            ChainPhases::Common(phi) => *phi,
            ChainPhases::PerNode(v) => v[node],
        }
    }

    /// Final two-mode state after all nodes (fundamental mode 0, auxiliary
    /// mode 1).
    pub fn final_state(&self) -> Result<SpectralState> {
        self.validate()?;
        let coupler = crate::components::coupler_matrix(self.eps, 2, 0, 1)?;
        let mut state = SpectralState::vacuum(2, 0.0)?.squeeze(0, self.r_in, 0.0)?;
        for node in 0..self.n_nodes {
            if self.hom_policy == HomPolicy::Refreshed {
                state = state.reset_mode(1)?;
            }
            let phase = crate::components::phase_matrix(self.phase_at(node), 2, 1)?;
            state = match self.ordering {
                NodeOrdering::CouplerThenPhase => {
                    state.apply_transfer(&coupler)?.apply_transfer(&phase)?
                }
                NodeOrdering::PhaseThenCoupler => {
                    state.apply_transfer(&phase)?.apply_transfer(&coupler)?
                }
            };
        }
        Ok(state)
    }

    pub fn outcome(&self) -> Result<ChainOutcome> {
        let state = self.final_state()?;
        let h = state.min_max_variance(0)?;
        Ok(ChainOutcome {
            v_sqz: state.quadrature_variance(0, 0.0)?,
            v_min: h.v_min,
            v_max: h.v_max,
        })
    }

    /// Output squeezing in dB below shot noise, measured on the quadrature
    /// that carried the input squeezing (the convention under which a chain
    /// of two nodes reduces exactly to the closed-form cell).
    pub fn evaluate(&self) -> Result<f64> {
        Ok(variance_to_db(self.outcome()?.v_sqz))
    }
}

/// Squeezing left after treating every node's mismatch as an independent
/// loss: `lambda = 1 - (1 - eps)^n` folded through the lossy-channel map,
/// in dB below shot noise.
pub fn incoherent_baseline(n_nodes: usize, eps: f64, r_in: f64) -> f64 {
    variance_to_db(incoherent_baseline_variance(n_nodes, eps, r_in))
}

/// Variance form of [`incoherent_baseline`].
pub fn incoherent_baseline_variance(n_nodes: usize, eps: f64, r_in: f64) -> f64 {
    let lambda = 1.0 - (1.0 - eps).powi(n_nodes as i32);
    (1.0 - lambda) * (-2.0 * r_in).exp() + lambda
}

/// Incoherent mismatch-as-loss baseline variance of a network: every
/// coupler's mismatch compounds as plain loss together with the external
/// loss.
pub fn network_baseline_variance(net: &NetworkSpec) -> f64 {
    let mut transmission = 1.0 - net.external_loss;
    for c in &net.components {
        if let Component::Coupler { epsilon, .. } = c {
            transmission *= 1.0 - epsilon;
        }
        if let Component::Loss { lambda, .. } = c {
            transmission *= 1.0 - lambda;
        }
    }
    let lambda = 1.0 - transmission;
    (1.0 - lambda) * (-2.0 * net.input.r).exp() + lambda
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::{cold_loss_exact, hot_variance, MzParams};
    use crate::{db_to_variance, squeeze_param_from_db};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn r15() -> f64 {
        squeeze_param_from_db(15.0)
    }

    #[test]
    fn mz_network_matches_closed_form_on_a_grid() {
        for &eps in &[0.0, 0.08, 0.2] {
            for i in 0..9 {
                let phi = i as f64 * PI / 4.0;
                for &r in &[0.0, 1.0] {
                    let net = NetworkSpec::mach_zehnder(eps, eps, phi, r, 0.0).unwrap();
                    let state = net.evaluate(0.0).unwrap();
                    let v = net.readout_squeezed_variance(&state).unwrap();
                    let p = MzParams::new(eps, eps, phi, r).unwrap();
                    assert_relative_eq!(v, hot_variance(&p), epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn passthrough_network_keeps_input_squeezing() {
        let net = NetworkSpec {
            modes: vec![ModeDef {
                label: "fm".into(),
                order: 0,
            }],
            components: vec![],
            readout_mode: 0,
            input: InputSqueeze {
                mode: 0,
                r: r15(),
                angle: 0.0,
            },
            external_loss: 0.0,
            frequency_grid: vec![0.0],
            slice_omega: 0.0,
            sweep_component: None,
        };
        let h = net.evaluate(0.0).unwrap().min_max_variance(0).unwrap();
        assert_relative_eq!(h.v_min, db_to_variance(15.0), epsilon = 1e-12);
    }

    #[test]
    fn matched_resonant_cavities_at_carrier_are_transparent() {
        let gamma = 2.0 * PI * 2e6;
        let net = NetworkSpec {
            modes: vec![ModeDef {
                label: "fm".into(),
                order: 0,
            }],
            components: vec![
                Component::Cavity {
                    delta: 0.0,
                    gamma,
                    mode: 0,
                    resonant: true,
                },
                Component::Cavity {
                    delta: 0.0,
                    gamma,
                    mode: 0,
                    resonant: true,
                },
            ],
            readout_mode: 0,
            input: InputSqueeze {
                mode: 0,
                r: r15(),
                angle: 0.0,
            },
            external_loss: 0.0,
            frequency_grid: vec![0.0],
            slice_omega: 0.0,
            sweep_component: None,
        };
        let h = net.evaluate(0.0).unwrap().min_max_variance(0).unwrap();
        assert_relative_eq!(h.v_min, db_to_variance(15.0), epsilon = 1e-12);
    }

    #[test]
    fn flat_network_spectrum_is_frequency_independent() {
        let mut net = NetworkSpec::mach_zehnder(0.08, 0.08, 1.1, r15(), 0.1).unwrap();
        net.frequency_grid = default_frequency_grid();
        let spec = net.homodyne_spectrum().unwrap();
        assert_eq!(spec.len(), 201);
        let first = spec[0];
        for h in &spec {
            assert_relative_eq!(h.v_min, first.v_min, epsilon = 1e-12);
            assert_relative_eq!(h.v_max, first.v_max, epsilon = 1e-12);
        }
    }

    #[test]
    fn vacuum_input_spectrum_is_shot_noise() {
        let mut net = NetworkSpec::mach_zehnder(0.08, 0.08, 1.1, 0.0, 0.0).unwrap();
        net.frequency_grid = vec![0.0, 2.0 * PI * 1e6, 2.0 * PI * 5e6];
        for h in net.homodyne_spectrum().unwrap() {
            assert_relative_eq!(h.v_min, 1.0, epsilon = 1e-12);
            assert_relative_eq!(h.v_max, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn cavity_network_spectrum_varies_with_frequency() {
        let gamma = 2.0 * PI * 2e6;
        let mut net = NetworkSpec::mach_zehnder(0.08, 0.08, 0.7, r15(), 0.0).unwrap();
        net.components.insert(
            1,
            Component::Cavity {
                delta: 0.0,
                gamma,
                mode: 0,
                resonant: true,
            },
        );
        net.frequency_grid = default_frequency_grid();
        let spec = net.homodyne_spectrum().unwrap();
        let v_min_span = spec.iter().map(|h| h.v_min).fold(f64::INFINITY, f64::min)
            ..spec.iter().map(|h| h.v_min).fold(0.0, f64::max);
        assert!(
            v_min_span.end - v_min_span.start > 0.01,
            "span {v_min_span:?}"
        );
        for h in &spec {
            assert!(h.v_min * h.v_max >= 1.0 - crate::PHYSICALITY_TOL);
        }
    }

    #[test]
    fn cavity_network_approaches_flat_limit_far_outside_linewidth() {
        // one resonant cavity on the fundamental mode inside an MZ cell;
        // far outside the linewidth its reflection tends to -identity,
        // i.e. an extra pi phase on the fundamental mode
        let gamma = 2.0 * PI * 1e5;
        let mut net = NetworkSpec::mach_zehnder(0.08, 0.08, 0.7, r15(), 0.0).unwrap();
        net.components.insert(
            1,
            Component::Cavity {
                delta: 0.0,
                gamma,
                mode: 0,
                resonant: true,
            },
        );
        let far = net.evaluate(2.0 * PI * 1e11).unwrap();
        let v_far = net.readout_squeezed_variance(&far).unwrap();

        let mut flat = NetworkSpec::mach_zehnder(0.08, 0.08, 0.7, r15(), 0.0).unwrap();
        flat.components
            .insert(1, Component::Phase { phi: PI, mode: 0 });
        let v_flat = flat
            .readout_squeezed_variance(&flat.evaluate(0.0).unwrap())
            .unwrap();
        assert_relative_eq!(v_far, v_flat, epsilon = 1e-6);
    }

    #[test]
    fn cold_throughput_matches_cold_loss_exact() {
        for &(e1, e2, phi) in &[
            (0.08, 0.08, PI),
            (0.08, 0.08, 0.0),
            (0.0, 0.0, 1.0),
            (0.05, 0.2, 2.2),
        ] {
            let net = NetworkSpec::mach_zehnder(e1, e2, phi, r15(), 0.0).unwrap();
            assert_relative_eq!(
                net.cold_throughput().unwrap(),
                cold_loss_exact(e1, e2, phi),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn cold_throughput_includes_external_loss() {
        let net = NetworkSpec::mach_zehnder(0.0, 0.0, 0.0, r15(), 0.263).unwrap();
        assert_relative_eq!(net.cold_throughput().unwrap(), 0.263, epsilon = 1e-12);
    }

    #[test]
    fn unknown_sweep_component_is_a_config_error() {
        let mut net = NetworkSpec::mach_zehnder(0.08, 0.08, 0.0, 1.0, 0.0).unwrap();
        net.sweep_component = Some(9);
        assert!(matches!(net.validate(), Err(Error::Config(_))));
        net.sweep_component = Some(0); // a coupler is not sweepable
        assert!(matches!(net.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn two_node_chain_reduces_to_the_closed_form_cell() {
        for &(eps, phi, r) in &[(0.07, 1.1, 0.9), (0.01, FRAC_PI_2, 1.5), (0.2, PI, 0.3)] {
            let chain = ChainSpec::new(2, eps, phi, r).unwrap();
            let p = MzParams::new(eps, eps, phi, r).unwrap();
            assert_relative_eq!(
                chain.outcome().unwrap().v_sqz,
                hot_variance(&p),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn mismatch_free_chain_is_transparent() {
        let chain = ChainSpec::new(10, 0.0, 1.3, r15()).unwrap();
        assert_relative_eq!(chain.evaluate().unwrap(), 15.0, epsilon = 1e-9);
    }

    #[test]
    fn shared_chain_restores_exactly_at_pi_for_even_n() {
        for n in [2, 4, 10] {
            let chain = ChainSpec::new(n, 0.05, PI, r15()).unwrap();
            assert_relative_eq!(
                chain.outcome().unwrap().v_sqz,
                db_to_variance(15.0),
                epsilon = 1e-12
            );
        }
        // odd chains do not pair up
        let odd = ChainSpec::new(9, 0.05, PI, r15()).unwrap();
        assert!(odd.outcome().unwrap().v_sqz > db_to_variance(15.0) + 1e-3);
    }

    #[test]
    fn refreshed_chain_equals_incoherent_baseline_for_any_phase() {
        for phi in [0.0, 0.9, FRAC_PI_2, PI, 4.7] {
            let chain = ChainSpec::new(10, 0.01, phi, r15())
                .unwrap()
                .with_policy(HomPolicy::Refreshed);
            assert_relative_eq!(
                chain.evaluate().unwrap(),
                incoherent_baseline(10, 0.01, r15()),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn node_orderings_agree_on_the_readout() {
        for n in [1, 3, 9] {
            for phi in [0.3, 2.0, 4.5] {
                let a = ChainSpec::new(n, 0.03, phi, r15()).unwrap();
                let b = a.clone().with_ordering(NodeOrdering::PhaseThenCoupler);
                assert_relative_eq!(
                    a.outcome().unwrap().v_sqz,
                    b.outcome().unwrap().v_sqz,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn incoherent_baseline_points() {
        assert_relative_eq!(incoherent_baseline(10, 0.01, r15()), 9.0578, epsilon = 5e-4);
        assert_relative_eq!(incoherent_baseline(0, 0.01, r15()), 15.0, epsilon = 1e-12);
        assert_relative_eq!(incoherent_baseline(10, 0.0, r15()), 15.0, epsilon = 1e-12);
    }

    #[test]
    fn chain_validation() {
        assert!(ChainSpec::new(0, 0.01, 0.0, 1.0).is_err());
        assert!(ChainSpec::new(3, 1.0, 0.0, 1.0).is_err());
        assert!(ChainSpec::new(3, 0.01, 0.0, -1.0).is_err());
        let mut bad = ChainSpec::new(3, 0.01, 0.0, 1.0).unwrap();
        bad.phases = ChainPhases::PerNode(vec![0.0, 1.0]);
        assert!(bad.validate().is_err());
    }
}
