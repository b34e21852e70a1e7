//! Command-line front end for the squeezed-light network simulator: loads
//! schema-1 network files, runs sweeps, maps and phase optimizations, and
//! writes deterministic CSV/JSON plot data.
//!
//! Exit codes: 0 success, 2 configuration/usage error, 3 numerical
//! physicality failure.

mod output;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hyperloss_core::analysis::{
    self, chain_phase_sweep, fraction_below_threshold, hyperloss_map, mismatch_sweep, phase_sweep,
    phi_grid, recovery_report, DEFAULT_PHI_POINTS,
};
use hyperloss_core::closedform::{cold_loss_exact, cold_loss_smallk};
use hyperloss_core::config::{load_network, parse_angle, NetworkConfig};
use hyperloss_core::network::{incoherent_baseline, ChainSpec, HomPolicy, NetworkSpec};
use hyperloss_core::optimizer::{optimize_phases, robustness, Objective, OptProblem};
use hyperloss_core::{squeeze_param_from_db, variance_to_db, Error as CoreError};

use output::{write_table, Format, RunMeta, Table};

#[derive(Parser)]
#[command(
    name = "hyperloss",
    version,
    about = "Squeezed-light degradation by coherent spatial-mode mixing in optical networks",
    after_help = "Angles accept radians or the tokens pi, pi/2, -pi, 3pi/4, ...\n\
                  Internal parallelism honors RAYON_NUM_THREADS."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn angle_arg(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

#[derive(Args, Serialize)]
struct SpecArgs {
    /// Schema-1 network description file.
    #[arg(long)]
    spec: PathBuf,
    /// Override a config key (dotted path), e.g. --set component.1.psi=pi/2.
    #[arg(long = "set", value_parser = parse_override)]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    overrides: Vec<(String, String)>,
}

fn parse_override(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("override '{s}' is not of the form key=value"))
}

#[derive(Args, Serialize)]
struct OutputArgs {
    /// Output file; summary goes to stdout either way.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    #[serde(skip)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Cold (coherent-probe) mismatch loss of the two-coupler cell.
    Coldloss {
        #[arg(long)]
        eps1: f64,
        #[arg(long)]
        eps2: f64,
        #[arg(long, value_parser = angle_arg)]
        phi: f64,
    },
    /// Squeezed-light statistics of the frequency-flat two-coupler cell.
    Mz {
        #[arg(long)]
        eps1: f64,
        #[arg(long)]
        eps2: f64,
        #[arg(long, value_parser = angle_arg)]
        phi: f64,
        /// Input squeezing in dB below shot noise.
        #[arg(long = "sqz-db", default_value_t = 15.0)]
        sqz_db: f64,
        /// Lumped loss applied at the readout.
        #[arg(long = "external-loss", default_value_t = 0.0)]
        external_loss: f64,
    },
    /// A chain of identical mixing cells threading one squeezed mode.
    Chain {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long = "sqz-db", default_value_t = 15.0)]
        sqz_db: f64,
        /// Evaluate a single common differential phase...
        #[arg(long, value_parser = angle_arg, conflicts_with = "phi_sweep")]
        phi: Option<f64>,
        /// ...or sweep this many phases over [0, 2pi).
        #[arg(long = "phi-sweep")]
        phi_sweep: Option<usize>,
        /// Report the fraction of swept phases below this squeezing target.
        #[arg(long = "threshold-db", default_value_t = 10.0)]
        threshold_db: f64,
        /// shared: one auxiliary mode threads all nodes; refreshed: vacuum
        /// replaces it before every coupler (incoherent baseline).
        #[arg(long, value_parser = ["shared", "refreshed"], default_value = "shared")]
        policy: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sweep the designated phase, or every coupler mismatch, of a network.
    Sweep {
        #[command(flatten)]
        spec: SpecArgs,
        /// phi: sweep the designated component; eps: sweep all coupler
        /// mismatches with the designated phase fixed.
        #[arg(long, value_parser = ["phi", "eps"], default_value = "phi")]
        param: String,
        #[arg(long, default_value_t = DEFAULT_PHI_POINTS)]
        points: usize,
        /// Fixed designated phase for an eps sweep.
        #[arg(long, value_parser = angle_arg, default_value = "pi/2")]
        phi: f64,
        /// Upper end of an eps sweep (inclusive).
        #[arg(long = "eps-max", default_value_t = 0.5)]
        eps_max: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Minimal-variance map over (swept phase, frequency).
    Map {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 181)]
        points: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Optimize free phases of a network for maximal output squeezing.
    Optimize {
        #[command(flatten)]
        spec: SpecArgs,
        /// Component indices of the free phases (defaults to the sweep
        /// component).
        #[arg(long = "free")]
        free: Vec<usize>,
        #[arg(long = "grid-density", default_value_t = 32)]
        grid_density: usize,
        /// Random extra starts used beyond 3 free phases.
        #[arg(long, default_value_t = 8)]
        seeds: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Maximize the worst case over the whole frequency grid instead of
        /// the slice frequency.
        #[arg(long)]
        band: bool,
        /// Also report robustness to uniform phase scatter of this width
        /// (rad).
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// Run the built-in consistency checks.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<CoreError>() {
                Some(CoreError::InvalidState(_)) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Coldloss { eps1, eps2, phi } => {
            check_mismatch(eps1)?;
            check_mismatch(eps2)?;
            println!("lambda = {:.4}", cold_loss_exact(eps1, eps2, phi));
            println!("lambda_smallk = {:.4}", cold_loss_smallk(eps1, eps2, phi));
            Ok(0)
        }
        Command::Mz {
            eps1,
            eps2,
            phi,
            sqz_db,
            external_loss,
        } => {
            let net = NetworkSpec::mach_zehnder(
                eps1,
                eps2,
                phi,
                squeeze_param_from_db(sqz_db),
                external_loss,
            )?;
            let state = net.evaluate(0.0)?;
            state.check_physical()?;
            let h = state.min_max_variance(net.readout_mode)?;
            let v_sqz = net.readout_squeezed_variance(&state)?;
            println!("V_min = {:.2} dB", variance_to_db(h.v_min));
            println!(
                "v_min = {:.6}, v_max = {:.6} ({:.2} dB anti-squeezing), v_sqz = {:.6}",
                h.v_min,
                h.v_max,
                -variance_to_db(h.v_max),
                v_sqz
            );
            println!(
                "cold mismatch loss lambda = {:.4}",
                cold_loss_exact(eps1, eps2, phi)
            );
            if v_sqz > 1.0 {
                println!(
                    "hyperloss detected at phi={phi:.3}: squeezed quadrature {:.2} dB above shot noise",
                    -variance_to_db(v_sqz)
                );
            }
            Ok(0)
        }
        Command::Chain {
            nodes,
            eps,
            sqz_db,
            phi,
            phi_sweep,
            threshold_db,
            policy,
            out,
        } => run_chain(
            nodes,
            eps,
            sqz_db,
            phi,
            phi_sweep,
            threshold_db,
            &policy,
            &out,
        ),
        Command::Sweep {
            spec,
            param,
            points,
            phi,
            eps_max,
            out,
        } => run_sweep(&spec, &param, points, phi, eps_max, &out),
        Command::Map { spec, points, out } => run_map(&spec, points, &out),
        Command::Optimize {
            spec,
            free,
            grid_density,
            seeds,
            seed,
            band,
            sigma,
            samples,
        } => run_optimize(
            &spec,
            &free,
            grid_density,
            seeds,
            seed,
            band,
            sigma,
            samples,
        ),
        Command::Selftest => {
            let checks = selftest::run_all();
            let mut all_pass = true;
            for c in &checks {
                let status = if c.pass { "ok " } else { "FAIL" };
                println!(
                    "[{status}] {} (tolerance {:.1e}, worst {:.3e})",
                    c.name, c.tolerance, c.worst
                );
                all_pass &= c.pass;
            }
            if all_pass {
                println!("selftest: {} checks passed", checks.len());
                Ok(0)
            } else {
                println!("selftest: FAILURE");
                Ok(3)
            }
        }
    }
}

fn check_mismatch(eps: f64) -> Result<()> {
    if !(0.0..1.0).contains(&eps) {
        return Err(CoreError::invalid_argument(format!(
            "power mismatch must be in [0, 1), got {eps}"
        ))
        .into());
    }
    Ok(())
}

fn load_spec(spec: &SpecArgs) -> Result<(NetworkConfig, NetworkSpec)> {
    let text = std::fs::read_to_string(&spec.spec)
        .with_context(|| format!("reading {}", spec.spec.display()))?;
    let loaded = load_network(&text, &spec.overrides)?;
    Ok(loaded)
}

#[allow(clippy::too_many_arguments)]
fn run_chain(
    nodes: usize,
    eps: f64,
    sqz_db: f64,
    phi: Option<f64>,
    phi_sweep: Option<usize>,
    threshold_db: f64,
    policy: &str,
    out: &OutputArgs,
) -> Result<u8> {
    let r_in = squeeze_param_from_db(sqz_db);
    let mut chain = ChainSpec::new(nodes, eps, phi.unwrap_or(0.0), r_in)?;
    if policy == "refreshed" {
        chain = chain.with_policy(HomPolicy::Refreshed);
    }
    let baseline = incoherent_baseline(nodes, eps, r_in);
    println!(
        "chain: {nodes} nodes, eps = {eps:.4} per node, input = {sqz_db:.2} dB, policy = {policy}"
    );
    println!(
        "incoherent baseline (mismatch as plain loss, lambda_total = 1-(1-eps)^N): {baseline:.2} dB"
    );
    println!(
        "note: commonly quoted baselines of 10.2 dB (1%/node) and 7.4 dB (2%/node) for 15 dB input"
    );
    println!(
        "      assume an unstated loss-accounting convention and are not reproduced by this map."
    );

    if let Some(n_points) = phi_sweep {
        if n_points == 0 {
            return Err(CoreError::invalid_argument("phi sweep needs at least one point").into());
        }
        let grid = phi_grid(n_points);
        let sweep = chain_phase_sweep(&chain, &grid)?;
        let below_sqz = fraction_below_threshold(&chain, threshold_db, &grid)?;
        let below_tomo = sweep
            .points
            .iter()
            .filter(|p| variance_to_db(p.v_min) < threshold_db - 1e-9)
            .count() as f64
            / grid.len() as f64;
        println!(
            "fraction of phases below {threshold_db:.2} dB: {below_sqz:.4} (squeezed-quadrature readout)"
        );
        println!(
            "fraction of phases below {threshold_db:.2} dB: {below_tomo:.4} (tomographic readout)"
        );
        println!(
            "fraction at or above {threshold_db:.2} dB: {:.4} (squeezed-quadrature readout)",
            1.0 - below_sqz
        );
        let best = sweep
            .points
            .iter()
            .min_by(|a, b| a.v_sqz.total_cmp(&b.v_sqz))
            .expect("non-empty sweep");
        println!(
            "best phase: phi = {:.4}, squeezing = {:.2} dB",
            best.axis_value,
            variance_to_db(best.v_sqz)
        );
        if let Some(path) = &out.output {
            let meta = chain_meta(nodes, eps, sqz_db, threshold_db, policy, n_points);
            let table = Table {
                columns: vec![
                    "phi_rad",
                    "v_sqz_rel_shot",
                    "v_min_rel_shot",
                    "v_max_rel_shot",
                    "squeezing_db",
                    "squeezing_db_tomographic",
                ],
                rows: sweep
                    .points
                    .iter()
                    .map(|p| {
                        vec![
                            p.axis_value,
                            p.v_sqz,
                            p.v_min,
                            p.v_max,
                            variance_to_db(p.v_sqz),
                            variance_to_db(p.v_min),
                        ]
                    })
                    .collect(),
            };
            write_table(path, out.format, &meta, &table)?;
            println!("wrote {} points to {}", table.rows.len(), path.display());
        }
    } else {
        let outcome = chain.outcome()?;
        println!(
            "phi = {:.4}: squeezing = {:.2} dB (squeezed quadrature), tomographic min = {:.2} dB",
            phi.unwrap_or(0.0),
            variance_to_db(outcome.v_sqz),
            variance_to_db(outcome.v_min)
        );
    }
    Ok(0)
}

fn chain_meta(
    nodes: usize,
    eps: f64,
    sqz_db: f64,
    threshold_db: f64,
    policy: &str,
    points: usize,
) -> RunMeta {
    #[derive(Serialize)]
    struct ChainArgs<'a> {
        nodes: usize,
        eps: f64,
        sqz_db: f64,
        threshold_db: f64,
        policy: &'a str,
        phi_points: usize,
    }
    RunMeta {
        schema: output::OUTPUT_SCHEMA,
        command: "chain".into(),
        config: serde_json::to_value(ChainArgs {
            nodes,
            eps,
            sqz_db,
            threshold_db,
            policy,
            phi_points: points,
        })
        .expect("serializable args"),
    }
}

fn network_meta(command: &str, cfg: &NetworkConfig, extra: serde_json::Value) -> RunMeta {
    let mut config = serde_json::json!({
        "network": serde_json::to_value(cfg).expect("serializable network config"),
    });
    if let (Some(obj), Some(extra_obj)) = (config.as_object_mut(), extra.as_object()) {
        for (k, v) in extra_obj {
            obj.insert(k.clone(), v.clone());
        }
    }
    RunMeta {
        schema: output::OUTPUT_SCHEMA,
        command: command.into(),
        config,
    }
}

fn run_sweep(
    spec: &SpecArgs,
    param: &str,
    points: usize,
    phi_fixed: f64,
    eps_max: f64,
    out: &OutputArgs,
) -> Result<u8> {
    if points == 0 {
        return Err(CoreError::invalid_argument("sweep needs at least one point").into());
    }
    let (cfg, net) = load_spec(spec)?;
    let (sweep, extra) = if param == "phi" {
        let grid = phi_grid(points);
        (
            phase_sweep(&net, &grid)?,
            serde_json::json!({ "param": "phi", "points": points }),
        )
    } else {
        let grid: Vec<f64> = (0..points)
            .map(|i| eps_max * i as f64 / (points.max(2) - 1) as f64)
            .collect();
        (
            mismatch_sweep(&net, &grid, phi_fixed)?,
            serde_json::json!({ "param": "eps", "points": points, "phi": phi_fixed, "eps_max": eps_max }),
        )
    };

    let slice_hz = sweep.omega / (2.0 * std::f64::consts::PI);
    let best = sweep
        .points
        .iter()
        .min_by(|a, b| a.v_min.total_cmp(&b.v_min))
        .expect("non-empty sweep");
    println!(
        "best squeezing {:.2} dB at {} = {:.4} (slice {:.3} MHz)",
        variance_to_db(best.v_min),
        sweep.axis_name,
        best.axis_value,
        slice_hz / 1e6
    );
    let hyper = analysis::hyperloss_region(&sweep);
    if let Some(&idx) = hyper
        .iter()
        .max_by(|&&a, &&b| sweep.points[a].v_sqz.total_cmp(&sweep.points[b].v_sqz))
    {
        let p = &sweep.points[idx];
        println!(
            "hyperloss detected at {} = {:.3}: squeezed quadrature {:.2} dB above shot noise ({} of {} grid points)",
            sweep.axis_name,
            p.axis_value,
            -variance_to_db(p.v_sqz),
            hyper.len(),
            sweep.points.len()
        );
    } else {
        println!("no hyperloss: squeezed quadrature stays at or below shot noise on this grid");
    }

    if let Some(path) = &out.output {
        let meta = network_meta("sweep", &cfg, extra);
        let axis_col: &'static str = if param == "phi" {
            "phi_rad"
        } else {
            "eps_frac"
        };
        let table = Table {
            columns: vec![
                axis_col,
                "omega_hz",
                "v_min_rel_shot",
                "v_max_rel_shot",
                "squeezing_db",
                "cold_loss_frac",
                "v_sqz_rel_shot",
            ],
            rows: sweep
                .points
                .iter()
                .map(|p| {
                    vec![
                        p.axis_value,
                        slice_hz,
                        p.v_min,
                        p.v_max,
                        variance_to_db(p.v_min),
                        p.cold_loss.unwrap_or(f64::NAN),
                        p.v_sqz,
                    ]
                })
                .collect(),
        };
        write_table(path, out.format, &meta, &table)?;
        println!("wrote {} points to {}", table.rows.len(), path.display());
    }
    Ok(0)
}

fn run_map(spec: &SpecArgs, points: usize, out: &OutputArgs) -> Result<u8> {
    if points == 0 {
        return Err(CoreError::invalid_argument("map needs at least one phase point").into());
    }
    let (cfg, net) = load_spec(spec)?;
    let grid = phi_grid(points);
    let map = hyperloss_map(&net, &grid)?;
    let baseline = analysis::baseline_variance(&net);
    let slice_col = map.slice_column();
    let hyper_rows = map.hyperloss_rows();
    let recovery_rows = map.rows_below(baseline);
    let marker = map.hyperloss_slice_row();
    println!(
        "map: {} phases x {} frequencies, slice at {:.3} MHz",
        map.axis.len(),
        map.omega_grid.len(),
        map.slice_omega / (2.0 * std::f64::consts::PI * 1e6)
    );
    println!(
        "incoherent baseline variance {:.4} ({:.2} dB); {} hyperloss rows (v_min > 1), {} recovery rows (v_min < baseline)",
        baseline,
        variance_to_db(baseline),
        hyper_rows.len(),
        recovery_rows.len()
    );
    println!(
        "hyperloss slice marker at {} = {:.4}: v_min = {:.4} ({:.2} dB above shot noise)",
        map.axis_name,
        map.axis[marker],
        map.v_min[marker][slice_col],
        -variance_to_db(map.v_min[marker][slice_col])
    );

    if let Some(path) = &out.output {
        let meta = network_meta("map", &cfg, serde_json::json!({ "points": points }));
        let mut rows = Vec::with_capacity(map.axis.len() * map.omega_grid.len());
        for (i, &phi) in map.axis.iter().enumerate() {
            for (j, &omega) in map.omega_grid.iter().enumerate() {
                rows.push(vec![
                    phi,
                    omega / (2.0 * std::f64::consts::PI),
                    map.v_min[i][j],
                ]);
            }
        }
        let table = Table {
            columns: vec!["phi_rad", "omega_hz", "v_min_rel_shot"],
            rows,
        };
        write_table(path, out.format, &meta, &table)?;
        println!("wrote {} rows to {}", table.rows.len(), path.display());
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn run_optimize(
    spec: &SpecArgs,
    free: &[usize],
    grid_density: usize,
    seeds: usize,
    seed: u64,
    band: bool,
    sigma: Option<f64>,
    samples: usize,
) -> Result<u8> {
    let (_cfg, net) = load_spec(spec)?;
    let free_phases: Vec<usize> = if free.is_empty() {
        net.sweep_component.into_iter().collect()
    } else {
        free.to_vec()
    };
    let objective = if band {
        Objective::WorstCaseOverBand
    } else {
        Objective::SqueezingAtSlice
    };
    let problem = OptProblem::Network {
        spec: net.clone(),
        free_phases: free_phases.clone(),
        objective,
    };
    let res = optimize_phases(&problem, grid_density, seeds, seed)?;
    let phis: Vec<String> = res.phi_star.iter().map(|p| format!("{p:.6}")).collect();
    println!("phi* = [{}]", phis.join(", "));
    println!(
        "value = {:.4} dB (coarse grid best {:.4} dB, {} evaluations)",
        res.value, res.coarse_best, res.n_evals
    );
    if free_phases.len() == 1 && net.sweep_component == Some(free_phases[0]) {
        let rep = recovery_report(&net, res.phi_star[0])?;
        println!(
            "recovery at phi* = {:.4}: {:.2} dB below shot noise (v_min = {:.4})",
            rep.phi_star, rep.recovered_db, rep.v_min
        );
        println!(
            "effective loss: total {:.4}, mismatch-attributed {:.4} (external loss {:.4})",
            rep.effective_loss_total, rep.effective_loss_mismatch, net.external_loss
        );
    }
    if let Some(sigma) = sigma {
        let rob = robustness(&problem, &res.phi_star, sigma, samples, seed)?;
        println!(
            "robustness (sigma = {sigma:.3} rad, {samples} samples): mean {:.2} dB, 5th percentile {:.2} dB",
            rob.mean_db, rob.p05_db
        );
    }
    Ok(0)
}
