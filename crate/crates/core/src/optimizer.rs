//! Phase optimization: find differential-phase assignments that maximize the
//! output squeezing of a network or chain, and quantify robustness to phase
//! scatter.
//!
//! The objective is cheap, low-dimensional and 2pi-periodic with possible
//! ridges, so the search is derivative-free: a coarse multi-start grid over
//! the phase torus followed by coordinate descent with a shrinking step,
//! with explicit wrap-around.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::network::{ChainSpec, NetworkSpec};
use crate::variance_to_db;

/// Default coarse-grid resolution per free phase (used up to 3 dimensions).
pub const DEFAULT_GRID_DENSITY: usize = 32;
/// Default number of random extra seeds used beyond 3 dimensions.
pub const DEFAULT_EXTRA_SEEDS: usize = 8;
/// Hard cap on objective evaluations per call.
pub const MAX_EVALS: usize = 2_000_000;
/// Refinement stops once the coordinate step falls below this (rad).
pub const MIN_STEP: f64 = 1e-6;
/// ... or once a full pass improves the objective by less than this.
pub const MIN_IMPROVEMENT: f64 = 1e-12;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// What the optimizer maximizes for a network problem, always in dB of
/// squeezing below shot noise at the optimal homodyne angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Squeezing at the network's slice frequency.
    SqueezingAtSlice,
    /// Worst-case squeezing over the whole frequency grid.
    WorstCaseOverBand,
}

/// A phase-optimization problem over a network's free phase components or a
/// chain's common differential phase.
#[derive(Debug, Clone)]
pub enum OptProblem {
    Network {
        spec: NetworkSpec,
        /// Indices of Phase/Gouy components whose angle is free.
        free_phases: Vec<usize>,
        objective: Objective,
    },
    Chain {
        spec: ChainSpec,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Coarse,
    Refine,
}

/// One accepted improvement in the search.
#[derive(Debug, Clone)]
pub struct TraceEntry {
    pub stage: Stage,
    pub phi: Vec<f64>,
    pub value: f64,
}

/// Optimization outcome.
#[derive(Debug, Clone)]
pub struct OptResult {
    pub phi_star: Vec<f64>,
    /// Objective at the optimum (dB of squeezing below shot noise).
    pub value: f64,
    /// Best coarse-grid value before refinement.
    pub coarse_best: f64,
    pub trace: Vec<TraceEntry>,
    pub n_evals: usize,
}

/// Monte-Carlo robustness of a phase assignment.
#[derive(Debug, Clone, Copy)]
pub struct Robustness {
    pub mean_db: f64,
    pub p05_db: f64,
}

impl OptProblem {
    pub fn dims(&self) -> usize {
        match self {
            OptProblem::Network { free_phases, .. } => free_phases.len(),
            OptProblem::Chain { .. } => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OptProblem::Network {
                spec, free_phases, ..
            } => {
                spec.validate()?;
                if free_phases.is_empty() {
                    return Err(Error::InvalidProblem("no free phases".into()));
                }
                for &idx in free_phases {
                    // rejects non-phase components up front
                    spec.with_phase_value(idx, 0.0)?;
                }
                Ok(())
            }
            OptProblem::Chain { spec } => spec.validate(),
        }
    }

    /// Objective in dB of squeezing below shot noise (higher is better).
    pub fn objective(&self, phi: &[f64]) -> Result<f64> {
        match self {
            OptProblem::Network {
                spec,
                free_phases,
                objective,
            } => {
                let mut net = spec.clone();
                for (&idx, &value) in free_phases.iter().zip(phi) {
                    net = net.with_phase_value(idx, value)?;
                }
                match objective {
                    Objective::SqueezingAtSlice => {
                        let state = net.evaluate(net.slice_omega)?;
                        Ok(variance_to_db(
                            state.min_max_variance(net.readout_mode)?.v_min,
                        ))
                    }
                    Objective::WorstCaseOverBand => {
                        let mut worst = f64::INFINITY;
                        for &omega in &net.frequency_grid {
                            let state = net.evaluate(omega)?;
                            let db =
                                variance_to_db(state.min_max_variance(net.readout_mode)?.v_min);
                            worst = worst.min(db);
                        }
                        Ok(worst)
                    }
                }
            }
            OptProblem::Chain { spec } => spec.with_common_phase(phi[0]).evaluate(),
        }
    }
}

fn wrap(phi: f64) -> f64 {
    let mut p = phi % TAU;
    if p < 0.0 {
        p += TAU;
    }
    p
}

/// Coordinate descent on the torus with a shrinking step, from one start.
/// Returns the refined point, its value, and the evaluations used.
fn refine(
    problem: &OptProblem,
    mut phi: Vec<f64>,
    mut value: f64,
    initial_step: f64,
    budget: usize,
) -> Result<(Vec<f64>, f64, usize)> {
    let d = phi.len();
    let mut step = initial_step;
    let mut used = 0usize;
    while step >= MIN_STEP {
        let mut improved_this_pass = 0.0;
        for coord in 0..d {
            loop {
                let mut candidates = [phi.clone(), phi.clone()];
                candidates[0][coord] = wrap(phi[coord] + step);
                candidates[1][coord] = wrap(phi[coord] - step);
                let mut moved = false;
                for cand in &candidates {
                    if used >= budget {
                        return Err(Error::BudgetExceeded {
                            needed: used + 1,
                            budget,
                        });
                    }
                    let v = problem.objective(cand)?;
                    used += 1;
                    if v > value + MIN_IMPROVEMENT {
                        improved_this_pass += v - value;
                        value = v;
                        phi = cand.clone();
                        moved = true;
                        break;
                    }
                }
                if !moved {
                    break;
                }
            }
        }
        if improved_this_pass < MIN_IMPROVEMENT {
            step *= 0.5;
        }
    }
    let phi_wrapped = phi.into_iter().map(wrap).collect();
    Ok((phi_wrapped, value, used))
}

/// Deterministic lexicographic tie-break on wrapped phase vectors.
fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// Two-stage torus search: coarse multi-start (full grid up to 3 free
/// phases, `seed_count` random starts beyond), then coordinate descent with
/// a shrinking step from the best starts. Deterministic for a fixed
/// `rng_seed`; the returned value is the best evaluation seen.
pub fn optimize_phases(
    problem: &OptProblem,
    grid_density: usize,
    seed_count: usize,
    rng_seed: u64,
) -> Result<OptResult> {
    problem.validate()?;
    let d = problem.dims();
    if grid_density < 2 {
        return Err(Error::InvalidProblem(
            "grid density must be at least 2".into(),
        ));
    }

    // coarse starts
    let starts: Vec<Vec<f64>> = if d <= 3 {
        let n = grid_density
            .checked_pow(d as u32)
            .filter(|&n| n <= MAX_EVALS)
            .ok_or(Error::BudgetExceeded {
                needed: grid_density.saturating_pow(d as u32),
                budget: MAX_EVALS,
            })?;
        (0..n)
            .map(|mut flat| {
                let mut phi = vec![0.0; d];
                for slot in phi.iter_mut() {
                    *slot = TAU * (flat % grid_density) as f64 / grid_density as f64;
                    flat /= grid_density;
                }
                phi
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let n = seed_count.max(DEFAULT_EXTRA_SEEDS);
        (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(0.0..TAU)).collect())
            .collect()
    };

    let evaluated: Result<Vec<(Vec<f64>, f64)>> = starts
        .par_iter()
        .map(|phi| Ok((phi.clone(), problem.objective(phi)?)))
        .collect();
    let evaluated = evaluated?;
    let mut n_evals = evaluated.len();

    let mut order: Vec<usize> = (0..evaluated.len()).collect();
    order.sort_by(|&a, &b| {
        evaluated[b].1.total_cmp(&evaluated[a].1).then_with(|| {
            if lex_less(&evaluated[a].0, &evaluated[b].0) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        })
    });

    let coarse_best = evaluated[order[0]].1;
    let mut trace = vec![TraceEntry {
        stage: Stage::Coarse,
        phi: evaluated[order[0]].0.clone(),
        value: coarse_best,
    }];

    // refine from the best few coarse starts, independently in parallel,
    // each with an equal share of the remaining evaluation budget
    let n_refine = order.len().min(3);
    let initial_step = TAU / grid_density as f64;
    let budget_each = (MAX_EVALS - n_evals) / n_refine;

    let refined: Result<Vec<(Vec<f64>, f64, usize)>> = order[..n_refine]
        .par_iter()
        .map(|&start_idx| {
            let (phi, value) = evaluated[start_idx].clone();
            refine(problem, phi, value, initial_step, budget_each)
        })
        .collect();
    let mut finals: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n_refine);
    for (phi, value, used) in refined? {
        n_evals += used;
        trace.push(TraceEntry {
            stage: Stage::Refine,
            phi: phi.clone(),
            value,
        });
        finals.push((phi, value));
    }

    // best value wins; ties go to the lexicographically smallest phase vector
    let (mut best_phi, mut best_value) = finals[0].clone();
    for (phi, value) in finals.into_iter().skip(1) {
        if value > best_value + MIN_IMPROVEMENT
            || ((value - best_value).abs() <= MIN_IMPROVEMENT && lex_less(&phi, &best_phi))
        {
            best_phi = phi;
            best_value = value;
        }
    }

    Ok(OptResult {
        phi_star: best_phi,
        value: best_value,
        coarse_best,
        trace,
        n_evals,
    })
}

/// Perturb `phi_star` with independent uniform offsets in [-sigma, sigma]
/// and report the mean and 5th-percentile objective. Reproducible for a
/// fixed `rng_seed`.
pub fn robustness(
    problem: &OptProblem,
    phi_star: &[f64],
    sigma: f64,
    n_samples: usize,
    rng_seed: u64,
) -> Result<Robustness> {
    problem.validate()?;
    if sigma < 0.0 {
        return Err(Error::invalid_argument("sigma must be non-negative"));
    }
    if n_samples == 0 {
        return Err(Error::invalid_argument("need at least one sample"));
    }
    if phi_star.len() != problem.dims() {
        return Err(Error::InvalidProblem(format!(
            "phase vector has {} entries for {} free phases",
            phi_star.len(),
            problem.dims()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let samples: Vec<Vec<f64>> = (0..n_samples)
        .map(|_| {
            phi_star
                .iter()
                .map(|&p| {
                    if sigma == 0.0 {
                        wrap(p)
                    } else {
                        wrap(p + rng.gen_range(-sigma..=sigma))
                    }
                })
                .collect()
        })
        .collect();
    let values: Result<Vec<f64>> = samples
        .par_iter()
        .map(|phi| problem.objective(phi))
        .collect();
    let mut values = values?;
    let mean_db = values.iter().sum::<f64>() / values.len() as f64;
    values.sort_by(f64::total_cmp);
    // nearest-rank 5th percentile
    let rank = ((0.05 * values.len() as f64).ceil() as usize).max(1) - 1;
    Ok(Robustness {
        mean_db,
        p05_db: values[rank],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::squeeze_param_from_db;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn mz_problem(eps: f64, r: f64) -> OptProblem {
        OptProblem::Network {
            spec: NetworkSpec::mach_zehnder(eps, eps, 0.0, r, 0.0).unwrap(),
            free_phases: vec![1],
            objective: Objective::SqueezingAtSlice,
        }
    }

    #[test]
    fn mz_optimum_is_full_recovery_at_pi() {
        let problem = mz_problem(0.08, squeeze_param_from_db(15.0));
        let res = optimize_phases(&problem, 32, 8, 7).unwrap();
        let dist = (res.phi_star[0] - PI).abs();
        assert!(
            dist.min((dist - 2.0 * PI).abs()) < 1e-6,
            "phi* = {}",
            res.phi_star[0]
        );
        assert_relative_eq!(res.value, 15.0, epsilon = 1e-9);
        assert!(res.value >= res.coarse_best);
        assert!(res.n_evals > 32);
    }

    #[test]
    fn chain_common_phase_reaches_target() {
        let spec = ChainSpec::new(10, 0.02, 0.0, squeeze_param_from_db(15.0)).unwrap();
        let res = optimize_phases(&OptProblem::Chain { spec }, 32, 8, 7).unwrap();
        assert!(res.value >= 10.0, "optimum {} dB", res.value);
        assert_relative_eq!(res.value, 15.0, epsilon = 1e-9);
    }

    #[test]
    fn flat_landscape_returns_input_squeezing() {
        let problem = mz_problem(0.0, squeeze_param_from_db(15.0));
        let res = optimize_phases(&problem, 16, 8, 7).unwrap();
        assert_relative_eq!(res.value, 15.0, epsilon = 1e-9);
    }

    #[test]
    fn denser_grids_never_lose_value() {
        let problem = mz_problem(0.08, 1.0);
        let coarse = optimize_phases(&problem, 16, 8, 7).unwrap();
        let fine = optimize_phases(&problem, 32, 8, 7).unwrap();
        assert!(fine.value >= coarse.value - 1e-9);
    }

    #[test]
    fn no_free_phases_is_an_invalid_problem() {
        let problem = OptProblem::Network {
            spec: NetworkSpec::mach_zehnder(0.08, 0.08, 0.0, 1.0, 0.0).unwrap(),
            free_phases: vec![],
            objective: Objective::SqueezingAtSlice,
        };
        assert!(matches!(
            optimize_phases(&problem, 16, 8, 7),
            Err(Error::InvalidProblem(_))
        ));
        // a coupler index is not a phase
        let problem = OptProblem::Network {
            spec: NetworkSpec::mach_zehnder(0.08, 0.08, 0.0, 1.0, 0.0).unwrap(),
            free_phases: vec![0],
            objective: Objective::SqueezingAtSlice,
        };
        assert!(matches!(
            optimize_phases(&problem, 16, 8, 7),
            Err(Error::InvalidProblem(_))
        ));
    }

    #[test]
    fn budget_errors_are_explicit() {
        let problem = mz_problem(0.08, 1.0);
        match optimize_phases(&problem, MAX_EVALS + 1, 8, 7) {
            Err(Error::BudgetExceeded { needed, budget }) => {
                assert!(needed > budget);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn robustness_at_zero_sigma_reproduces_the_optimum() {
        let problem = mz_problem(0.08, squeeze_param_from_db(15.0));
        let res = optimize_phases(&problem, 32, 8, 7).unwrap();
        let rob = robustness(&problem, &res.phi_star, 0.0, 64, 11).unwrap();
        assert_relative_eq!(rob.mean_db, res.value, epsilon = 1e-9);
        assert_relative_eq!(rob.p05_db, res.value, epsilon = 1e-9);
    }

    #[test]
    fn robustness_is_reproducible_and_sigma_free_for_clean_networks() {
        let problem = mz_problem(0.0, squeeze_param_from_db(15.0));
        let a = robustness(&problem, &[0.3], 1.0, 128, 13).unwrap();
        let b = robustness(&problem, &[0.3], 1.0, 128, 13).unwrap();
        assert_eq!(a.mean_db.to_bits(), b.mean_db.to_bits());
        assert_relative_eq!(a.mean_db, 15.0, epsilon = 1e-9);
    }

    #[test]
    fn full_sigma_approaches_the_unconditioned_sweep_distribution() {
        let problem = mz_problem(0.08, squeeze_param_from_db(15.0));
        let rob = robustness(&problem, &[PI], PI, 4096, 17).unwrap();
        // compare to a uniform phase sweep
        let spec =
            NetworkSpec::mach_zehnder(0.08, 0.08, 0.0, squeeze_param_from_db(15.0), 0.0).unwrap();
        let grid = crate::analysis::phi_grid(4096);
        let sweep = crate::analysis::phase_sweep(&spec, &grid).unwrap();
        let sweep_mean = sweep
            .points
            .iter()
            .map(|p| variance_to_db(p.v_min))
            .sum::<f64>()
            / grid.len() as f64;
        assert!(
            (rob.mean_db - sweep_mean).abs() < 0.2,
            "{} vs {}",
            rob.mean_db,
            sweep_mean
        );
    }
}
