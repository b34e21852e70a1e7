//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line (run with `--nocapture` to see them all).
//!
//! Criteria cover closed-form/simulation oracle equivalence, the special-case
//! identities, cold-loss numbers, hyperloss existence and recovery at the
//! fitted two-cavity configurations, chain phase statistics, a physicality
//! fuzz, map structure, and byte-identical CLI reruns.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperloss_core::analysis::{
    baseline_variance, fraction_at_or_above, fraction_below_threshold, hyperloss_map, phi_grid,
    recovery_report,
};
use hyperloss_core::closedform::{
    cold_loss_exact, cold_loss_smallk, hot_variance, mz_state, MzParams,
};
use hyperloss_core::components::Component;
use hyperloss_core::config::load_network;
use hyperloss_core::network::{incoherent_baseline, ChainSpec, NetworkSpec};
use hyperloss_core::optimizer::{optimize_phases, Objective, OptProblem};
use hyperloss_core::state::SpectralState;
use hyperloss_core::{squeeze_param_from_db, variance_to_db, PHYSICALITY_TOL};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn load_config(name: &str) -> NetworkSpec {
    let text = std::fs::read_to_string(config_dir().join(name)).expect("config file readable");
    load_network(&text, &[]).expect("config parses").1
}

/// Criterion 1: closed form vs Gaussian simulation on the 5 x 17 x 4 grid,
/// agreement within 1e-10, in under a second.
#[test]
fn c1_oracle_equivalence() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &eps in &[0.0, 0.01, 0.05, 0.08, 0.2] {
        for i in 0..17 {
            let phi = i as f64 * PI / 8.0;
            for &r in &[0.0, 0.5, 1.0, 1.5] {
                let p = MzParams::new(eps, eps, phi, r).unwrap();
                let sim = mz_state(&p).unwrap().quadrature_variance(0, 0.0).unwrap();
                worst = worst.max((sim - hot_variance(&p)).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        "1 (oracle equivalence)",
        worst < 1e-10 && elapsed.as_secs_f64() < 1.0,
        &format!(
            "worst |closed form - simulation| = {worst:.3e} on 340 grid points in {elapsed:.2?}"
        ),
    );
}

/// Criterion 2: the three special-case identities hold to machine precision.
#[test]
fn c2_special_case_identities() {
    let mut worst = 0.0f64;
    for &eps in &[0.005f64, 0.01, 0.08, 0.2, 0.4] {
        for &r in &[0.0f64, 0.25, 0.9, 1.5, 2.9] {
            let k = eps.sqrt().asin();
            let s = |phi: f64| hot_variance(&MzParams::new(eps, eps, phi, r).unwrap());
            worst = worst.max((s(PI) - (-2.0 * r).exp()).abs());
            let expect0 = (2.0 * k).sin().powi(2) + (-2.0 * r).exp() * (2.0 * k).cos().powi(2);
            worst = worst.max((s(0.0) - expect0).abs());
            let expect_h = (-2.0 * r).exp() * k.cos().powi(4)
                + 2.0 * k.cos().powi(2) * k.sin().powi(2)
                + (2.0 * r).exp() * k.sin().powi(4);
            worst = worst.max((s(FRAC_PI_2) - expect_h).abs());
        }
    }
    report(
        "2 (special-case identities)",
        worst < 1e-12,
        &format!("worst deviation {worst:.3e} over phi in {{0, pi/2, pi}} at 25 (eps, r) pairs"),
    );
}

/// Criterion 3: cold mismatch-loss numbers, exact and small-mismatch forms,
/// bracketing the 0%..30% range.
#[test]
fn c3_cold_loss_numbers() {
    let at_pi = cold_loss_exact(0.08, 0.08, PI);
    let at_zero = cold_loss_exact(0.08, 0.08, 0.0);
    let smallk = cold_loss_smallk(0.08, 0.08, 0.0);
    let sweep_min = (0..720)
        .map(|i| cold_loss_exact(0.08, 0.08, 2.0 * PI * i as f64 / 720.0))
        .fold(f64::INFINITY, f64::min);
    let sweep_max = (0..720)
        .map(|i| cold_loss_exact(0.08, 0.08, 2.0 * PI * i as f64 / 720.0))
        .fold(0.0, f64::max);
    let pass = at_pi == 0.0
        && (at_zero - 0.2945).abs() < 5e-4
        && (smallk - 0.32).abs() < 1e-12
        && sweep_min.abs() < 1e-9
        && (0.29..0.30).contains(&sweep_max);
    report(
        "3 (cold mismatch loss)",
        pass,
        &format!(
            "lambda(pi) = {at_pi:.1e}, lambda(0) = {at_zero:.4} (exact) / {smallk:.2} (small-k); sweep spans [{sweep_min:.1e}, {sweep_max:.4}]"
        ),
    );
}

/// Criterion 4: at the fitted two-cavity configuration (8% mismatch per
/// cavity, 26.3% external loss, ~24 dB readout anti-squeezing), the swept
/// phase at pi/2 pushes the minimal variance 1.0..3.5 dB above shot noise at
/// the 3.75 MHz slice.
#[test]
fn c4_hyperloss_existence() {
    let net = load_config("hyperloss_regime.toml");
    let at_quarter = net.with_swept_value(FRAC_PI_2).unwrap();
    let state = at_quarter.evaluate(at_quarter.slice_omega).unwrap();
    state.check_physical().unwrap();
    let h = state.min_max_variance(at_quarter.readout_mode).unwrap();
    let db_above = -variance_to_db(h.v_min);
    let anti_db = -variance_to_db(h.v_max);
    let pass = (1.0..=3.5).contains(&db_above);
    report(
        "4 (hyperloss existence)",
        pass,
        &format!(
            "v_min = {:.4} = +{db_above:.2} dB above shot noise at phi = pi/2, 3.75 MHz (anti-squeezing {anti_db:.1} dB)",
            h.v_min
        ),
    );
}

/// Criterion 5: the optimizer restores the full input squeezing of the flat
/// cell at phi = pi, and the recovery-regime configuration reports ~2.8%
/// mismatch-attributed effective loss at its optimum.
#[test]
fn c5_recovery() {
    // flat cell: algebraic full recovery
    let r15 = squeeze_param_from_db(15.0);
    let problem = OptProblem::Network {
        spec: NetworkSpec::mach_zehnder(0.08, 0.08, 0.0, r15, 0.0).unwrap(),
        free_phases: vec![1],
        objective: Objective::SqueezingAtSlice,
    };
    let res = optimize_phases(&problem, 32, 8, 1).unwrap();
    let phi_err = {
        let d = (res.phi_star[0] - PI).abs();
        d.min((d - 2.0 * PI).abs())
    };
    let flat_pass = phi_err < 1e-6 && (res.value - 15.0).abs() < 1e-9;

    // two-cavity recovery regime: ~2.8% effective mismatch loss
    let net = load_config("recovery_regime.toml");
    let problem = OptProblem::Network {
        spec: net.clone(),
        free_phases: vec![net.sweep_component.unwrap()],
        objective: Objective::SqueezingAtSlice,
    };
    let opt = optimize_phases(&problem, 32, 8, 1).unwrap();
    let rep = recovery_report(&net, opt.phi_star[0]).unwrap();
    let recovery_pass = (rep.effective_loss_mismatch - 0.028).abs() <= 0.01;

    report(
        "5 (recovery regime)",
        flat_pass && recovery_pass,
        &format!(
            "flat cell: phi* off by {phi_err:.2e} rad, value {:.9} dB; cavity config: {:.2} dB recovered, mismatch-attributed effective loss {:.4} (15.4% geometric mismatch)",
            res.value, rep.recovered_db, rep.effective_loss_mismatch
        ),
    );
}

/// Criterion 6: chain phase statistics against the 10-node examples, with
/// the variance-domain baselines printed and the unreproduced quoted
/// baselines flagged by the CLI report.
#[test]
fn c6_chain_statistics() {
    let r15 = squeeze_param_from_db(15.0);
    let grid = phi_grid(720);

    let chain1 = ChainSpec::new(10, 0.01, 0.0, r15).unwrap();
    let below = fraction_below_threshold(&chain1, 10.0, &grid).unwrap();
    let base1 = incoherent_baseline(10, 0.01, r15);

    let chain2 = ChainSpec::new(10, 0.02, 0.0, r15).unwrap();
    let at_or_above = fraction_at_or_above(&chain2, 10.0, &grid).unwrap();
    let base2 = incoherent_baseline(10, 0.02, r15);

    // the report must flag the alternative convention rather than match it
    let out = Command::new(env!("CARGO_BIN_EXE_hyperloss"))
        .args([
            "chain",
            "--nodes",
            "10",
            "--eps",
            "0.01",
            "--sqz-db",
            "15",
            "--phi-sweep",
            "720",
            "--threshold-db",
            "10",
        ])
        .output()
        .expect("chain command runs");
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let flags_discrepancy = text.contains("10.2") && text.contains("not reproduced");

    let pass = (below - 0.55).abs() <= 0.15
        && (at_or_above - 0.25).abs() <= 0.15
        && (base1 - 9.06).abs() < 5e-3
        && (base2 - 6.80).abs() < 5e-3
        && flags_discrepancy
        && out.status.success();
    report(
        "6 (chain statistics)",
        pass,
        &format!(
            "below 10 dB at 1%/node: {below:.4} (target 0.55 +/- 0.15); at/above 10 dB at 2%/node: {at_or_above:.4} (target 0.25 +/- 0.15); baselines {base1:.2} / {base2:.2} dB with quoted 10.2/7.4 dB flagged"
        ),
    );
}

/// Criterion 7: 10,000 randomized component sequences preserve Hermiticity,
/// the uncertainty product and the purity bound, in under 30 s.
#[test]
fn c7_physicality_fuzz() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0B);
    let mut worst_herm = 0.0f64;
    let mut worst_uncertainty = 0.0f64;
    let mut worst_purity = 0.0f64;
    for trial in 0..10_000 {
        let n_modes = 2 + (trial % 2);
        let omega = 2.0 * PI * rng.gen_range(0.0..1e7);
        let mut state = SpectralState::vacuum(n_modes, omega)
            .unwrap()
            .squeeze(0, rng.gen_range(0.0..2.0), rng.gen_range(0.0..PI))
            .unwrap();
        for _ in 0..6 {
            let a = rng.gen_range(0..n_modes);
            let b = (a + 1 + rng.gen_range(0..n_modes - 1)) % n_modes;
            let component = match rng.gen_range(0..6) {
                0 => Component::Coupler {
                    epsilon: rng.gen_range(0.0..0.95),
                    modes: (a, b),
                },
                1 => Component::Phase {
                    phi: rng.gen_range(0.0..7.0),
                    mode: a,
                },
                2 => Component::Gouy {
                    psi: rng.gen_range(0.0..7.0),
                    mode_order: rng.gen_range(0..3),
                    mode: a,
                },
                3 => Component::Cavity {
                    delta: rng.gen_range(-5e7..5e7),
                    gamma: rng.gen_range(1e4..3e8),
                    mode: a,
                    resonant: rng.gen_bool(0.7),
                },
                4 => Component::Loss {
                    lambda: rng.gen_range(0.0..1.0),
                    mode: a,
                },
                _ => Component::Squeezer {
                    r: rng.gen_range(0.0..1.5),
                    angle: rng.gen_range(0.0..7.0),
                    mode: a,
                },
            };
            state = component.apply(&state).unwrap();
        }
        worst_herm = worst_herm.max(state.hermiticity_deviation());
        for mode in 0..n_modes {
            let h = state.min_max_variance(mode).unwrap();
            worst_uncertainty = worst_uncertainty.max(1.0 - h.v_min * h.v_max);
        }
        worst_purity = worst_purity.max(state.purity().unwrap() - 1.0);
    }
    let elapsed = start.elapsed();
    let pass = worst_herm < 1e-11
        && worst_uncertainty < PHYSICALITY_TOL
        && worst_purity < PHYSICALITY_TOL
        && elapsed.as_secs_f64() < 30.0;
    report(
        "7 (physicality fuzz)",
        pass,
        &format!(
            "10,000 sequences in {elapsed:.2?}: worst Hermiticity {worst_herm:.2e}, worst 1 - Vmin*Vmax = {worst_uncertainty:.2e}, worst purity excess {worst_purity:.2e}"
        ),
    );
}

/// Criterion 8: the swept two-cavity map contains at least one hyperloss row
/// and at least one recovery row (below the mismatch-as-loss baseline) at
/// the 3.75 MHz slice. Existence-based: the experimental fit parameters are
/// not published, so pixel-level reproduction is out of reach by design.
#[test]
fn c8_phase_frequency_map() {
    let mut net = load_config("hyperloss_regime.toml");
    // coarser frequency grid keeps the map cheap; the slice column is exact
    net.frequency_grid = (0..41).map(|i| 2.0 * PI * 1e7 * i as f64 / 40.0).collect();
    let map = hyperloss_map(&net, &phi_grid(121)).unwrap();
    let baseline = baseline_variance(&net);
    let hyper = map.hyperloss_rows();
    let recovery = map.rows_below(baseline);
    let marker = map.hyperloss_slice_row();
    let pass = !hyper.is_empty() && !recovery.is_empty();
    report(
        "8 (phase-frequency map)",
        pass,
        &format!(
            "{} hyperloss rows and {} recovery rows (baseline {:.4}) out of 121; slice marker at phi = {:.3}",
            hyper.len(),
            recovery.len(),
            baseline,
            map.axis[marker]
        ),
    );
}

/// Criterion 9: identical CLI invocations produce byte-identical outputs.
#[test]
fn c9_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let spec = config_dir().join("hyperloss_regime.toml");
    let run = |name: &str| -> Vec<u8> {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hyperloss"))
            .args([
                "sweep",
                "--spec",
                spec.to_str().unwrap(),
                "--points",
                "64",
                "--set",
                "external_loss=0.2",
                "--output",
                path.to_str().unwrap(),
            ])
            .status()
            .expect("sweep runs");
        assert!(status.success());
        std::fs::read(&path).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    let pass = a == b && !a.is_empty();
    report(
        "9 (CLI determinism)",
        pass,
        &format!("two sweep runs produced identical {} byte outputs", a.len()),
    );
}
