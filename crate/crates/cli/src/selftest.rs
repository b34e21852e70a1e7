//! Built-in consistency checks: the closed-form/simulation oracle grid,
//! component symplectic identities, the special-case identities of the
//! mixing cell, the weak-coupling agreement bound, and a randomized
//! physicality fuzz. Each check prints one line with its tolerance.

use hyperloss_core::closedform::{
    cold_loss_exact, hot_variance, hot_variance_weak, mz_state, MzParams,
};
use hyperloss_core::components::{
    cavity_reflection_matrix, coupler_matrix, phase_matrix, Component,
};
use hyperloss_core::state::SpectralState;
use hyperloss_core::{EXACT_TOL, PHYSICALITY_TOL};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI};

pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    pub worst: f64,
    pub pass: bool,
}

fn check(name: &'static str, tolerance: f64, worst: f64) -> Check {
    Check {
        name,
        tolerance,
        worst,
        pass: worst <= tolerance,
    }
}

pub fn run_all() -> Vec<Check> {
    vec![
        oracle_grid(),
        symplectic_components(),
        special_cases(),
        weak_coupling_bound(),
        cold_loss_identities(),
        physicality_fuzz(),
    ]
}

/// Closed-form vs Gaussian-simulation agreement on the 5 x 17 x 4 grid.
fn oracle_grid() -> Check {
    let mut worst = 0.0f64;
    for &eps in &[0.0, 0.01, 0.05, 0.08, 0.2] {
        for i in 0..17 {
            let phi = i as f64 * PI / 8.0;
            for &r in &[0.0, 0.5, 1.0, 1.5] {
                let p = MzParams::new(eps, eps, phi, r).unwrap();
                let sim = mz_state(&p)
                    .and_then(|s| s.quadrature_variance(0, 0.0))
                    .unwrap();
                worst = worst.max((sim - hot_variance(&p)).abs());
            }
        }
    }
    check(
        "oracle equivalence (closed form vs simulation, 5x17x4 grid)",
        1e-10,
        worst,
    )
}

fn symplectic_components() -> Check {
    let mut worst = 0.0f64;
    for &eps in &[0.0, 0.08, 0.5, 0.93] {
        worst = worst.max(coupler_matrix(eps, 2, 0, 1).unwrap().symplectic_deviation());
    }
    for &phi in &[0.0, 0.7, FRAC_PI_2, PI, 5.1] {
        worst = worst.max(phase_matrix(phi, 2, 1).unwrap().symplectic_deviation());
    }
    for &(w, d, g) in &[(0.0, 0.0, 1e6), (2.4e7, 3e6, 2e6), (-1e7, -5e6, 4e7)] {
        for resonant in [true, false] {
            let t = cavity_reflection_matrix(w, d, 2.0 * PI * g, 2, 0, resonant).unwrap();
            worst = worst.max(t.symplectic_deviation());
        }
    }
    check("lossless components satisfy T J T^H = J", EXACT_TOL, worst)
}

/// S(pi) = e^{-2r}; S(0) = sin^2 2k + e^{-2r} cos^2 2k;
/// S(pi/2) = e^{-2r} cos^4 k + 2 cos^2 k sin^2 k + e^{2r} sin^4 k.
fn special_cases() -> Check {
    let mut worst = 0.0f64;
    for &eps in &[0.01f64, 0.08, 0.2] {
        for &r in &[0.0f64, 0.5, 1.5, 2.9] {
            let k = eps.sqrt().asin();
            let s_pi = hot_variance(&MzParams::new(eps, eps, PI, r).unwrap());
            worst = worst.max((s_pi - (-2.0 * r).exp()).abs());
            let s_0 = hot_variance(&MzParams::new(eps, eps, 0.0, r).unwrap());
            let expect_0 = (2.0 * k).sin().powi(2) + (-2.0 * r).exp() * (2.0 * k).cos().powi(2);
            worst = worst.max((s_0 - expect_0).abs());
            let s_h = hot_variance(&MzParams::new(eps, eps, FRAC_PI_2, r).unwrap());
            let expect_h = (-2.0 * r).exp() * k.cos().powi(4)
                + 2.0 * k.cos().powi(2) * k.sin().powi(2)
                + (2.0 * r).exp() * k.sin().powi(4);
            worst = worst.max((s_h - expect_h).abs());
        }
    }
    check(
        "special-case identities at phi in {0, pi/2, pi}",
        EXACT_TOL,
        worst,
    )
}

fn weak_coupling_bound() -> Check {
    let mut worst = 0.0f64;
    for &e1 in &[0.0, 0.002, 0.005, 0.01] {
        for &e2 in &[0.0, 0.002, 0.005, 0.01] {
            for i in 0..33 {
                let phi = i as f64 * 2.0 * PI / 32.0;
                for &e2r in &[1.0, 10.0, 100.0f64] {
                    let p = MzParams::new(e1, e2, phi, 0.5 * e2r.ln()).unwrap();
                    worst = worst.max((hot_variance_weak(&p) - hot_variance(&p)).abs());
                }
            }
        }
    }
    check(
        "weak-coupling agreement for eps <= 0.01, e^{2r} <= 100",
        1e-3,
        worst,
    )
}

fn cold_loss_identities() -> Check {
    let mut worst = 0.0f64;
    for &eps in &[0.0, 0.01, 0.08, 0.4] {
        worst = worst.max(cold_loss_exact(eps, eps, PI).abs());
    }
    worst = worst.max((cold_loss_exact(0.08, 0.08, 0.0) - 0.2944).abs() - 5e-4);
    check(
        "cold loss vanishes at phi = pi for equal mismatch",
        EXACT_TOL,
        worst,
    )
}

fn physicality_fuzz() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let mut state = SpectralState::vacuum(2, 2.0 * PI * rng.gen_range(0.0..1e7))
            .unwrap()
            .squeeze(0, rng.gen_range(0.0..2.0), 0.0)
            .unwrap();
        for _ in 0..6 {
            let component = match rng.gen_range(0..5) {
                0 => Component::Coupler {
                    epsilon: rng.gen_range(0.0..0.9),
                    modes: (0, 1),
                },
                1 => Component::Phase {
                    phi: rng.gen_range(0.0..7.0),
                    mode: rng.gen_range(0..2),
                },
                2 => Component::Cavity {
                    delta: rng.gen_range(-5e7..5e7),
                    gamma: rng.gen_range(1e4..3e8),
                    mode: rng.gen_range(0..2),
                    resonant: rng.gen_bool(0.7),
                },
                3 => Component::Loss {
                    lambda: rng.gen_range(0.0..1.0),
                    mode: rng.gen_range(0..2),
                },
                _ => Component::Squeezer {
                    r: rng.gen_range(0.0..1.5),
                    angle: rng.gen_range(0.0..7.0),
                    mode: rng.gen_range(0..2),
                },
            };
            state = component.apply(&state).unwrap();
        }
        worst = worst.max(state.hermiticity_deviation());
        for mode in 0..2 {
            let h = state.min_max_variance(mode).unwrap();
            worst = worst.max(1.0 - h.v_min * h.v_max);
        }
        worst = worst.max(state.purity().unwrap() - 1.0);
        worst = worst.max(-state.physicality_margin());
    }
    check(
        "randomized physicality fuzz (500 sequences, seed 17)",
        PHYSICALITY_TOL,
        worst.max(0.0),
    )
}
