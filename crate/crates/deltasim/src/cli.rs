//! Batch command-line front end. One thin binary delegates here; every
//! subcommand reads a JSON experiment config and writes deterministic
//! CSV/JSON results plus a metadata record.

use clap::{Parser, Subcommand};
use num_complex::Complex64 as C64;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::{
    CircuitConfig, CircuitKind, ExperimentConfig, ExperimentKind, SchemeKind,
};
use crate::lindblad::{decay_operator, dephasing_operator, lindblad_evolve_sampled};
use crate::presets::{parse_preset, run_preset};
use crate::report::{config_hash, format_sig, ReportWriter};
use crate::robustness::{decoherence_gate_curve, robustness_grid};
use crate::state::StateVector;
use crate::synthesis::{ideal_gate_operator, solve_toc_parameters};
use crate::transmon::{simulate_logical_gate, two_qubit_physical, LatticeConfig};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "deltasim", version, about = "Holonomic gate synthesis and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory (overrides the config's `output`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Integrator step override.
    #[arg(long, global = true)]
    step_override: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the drive parameters for one gate.
    Synthesize {
        #[arg(long)]
        config: PathBuf,
    },
    /// Open-system state evolution of one gate.
    Evolve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Systematic-error robustness sweep.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Gate fidelity against the decoherence rate.
    Decoherence {
        #[arg(long)]
        config: PathBuf,
    },
    /// Physical transmon-circuit simulation.
    Circuit {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a named figure preset (fig2, fig3, fig4, fig5, table-accel).
    Preset { name: String },
    /// Parse and validate a config without running it.
    Validate { config: PathBuf },
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message; usage problems are config errors
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // ignore failure when a global pool already exists (tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Vec<PathBuf>> {
    match &cli.command {
        Command::Preset { name } => {
            let preset = parse_preset(name)?;
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            run_preset(preset, &out)
        }
        Command::Validate { config } => {
            let cfg = ExperimentConfig::from_file(config)?;
            println!(
                "ok: {} experiment, config-sha256={}",
                cfg.experiment.name(),
                config_hash(&cfg.canonical_json())
            );
            Ok(vec![])
        }
        Command::Synthesize { config } => run_checked(cli, config, ExperimentKind::Synthesize),
        Command::Evolve { config } => run_checked(cli, config, ExperimentKind::Evolve),
        Command::Sweep { config } => run_checked(cli, config, ExperimentKind::Sweep),
        Command::Decoherence { config } => run_checked(cli, config, ExperimentKind::Decoherence),
        Command::Circuit { config } => run_checked(cli, config, ExperimentKind::Circuit),
    }
}

fn run_checked(cli: &Cli, config: &Path, expected: ExperimentKind) -> Result<Vec<PathBuf>> {
    let mut cfg = ExperimentConfig::from_file(config)?;
    if cfg.experiment != expected {
        return Err(Error::Config(format!(
            "config declares experiment '{}' but the subcommand is '{}'",
            cfg.experiment.name(),
            expected.name()
        )));
    }
    if let Some(s) = cli.step_override {
        cfg.step_override = Some(s);
    }
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    run_config(&cfg, &out)
}

/// Dispatches a validated config and writes results plus `metadata.json`
/// (tool version, config echo, wall time). Result files are
/// deterministic; the metadata record is not part of that contract.
pub fn run_config(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let started = Instant::now();
    let hash = config_hash(&cfg.canonical_json());
    let mut writer = ReportWriter::new(out_dir, cfg.experiment.name(), &hash)?;
    match cfg.experiment {
        ExperimentKind::Synthesize => synthesize(cfg, &mut writer)?,
        ExperimentKind::Evolve => evolve(cfg, &mut writer)?,
        ExperimentKind::Sweep => sweep(cfg, &mut writer)?,
        ExperimentKind::Decoherence => decoherence(cfg, &mut writer)?,
        ExperimentKind::Circuit => circuit(cfg, &mut writer)?,
        ExperimentKind::FigurePreset => {
            let preset = parse_preset(cfg.preset.as_deref().unwrap_or_default())?;
            let mut files = run_preset(preset, out_dir)?;
            files.extend(write_metadata(cfg, out_dir, &hash, started)?);
            return Ok(files);
        }
    }
    let mut files = writer.written().to_vec();
    files.extend(write_metadata(cfg, out_dir, &hash, started)?);
    Ok(files)
}

fn write_metadata(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    hash: &str,
    started: Instant,
) -> Result<Vec<PathBuf>> {
    let mut writer = ReportWriter::new(out_dir, "metadata", hash)?;
    writer.json(
        "metadata.json",
        json!({
            "version": env!("CARGO_PKG_VERSION"),
            "config": serde_json::to_value(cfg)
                .map_err(|e| Error::Config(format!("config echo: {e}")))?,
            "wall_time_s": started.elapsed().as_secs_f64(),
        }),
    )?;
    Ok(writer.written().to_vec())
}

fn gate_and_detuning(cfg: &ExperimentConfig) -> Result<(crate::synthesis::GateSpec, f64)> {
    let spec = cfg
        .gate
        .as_ref()
        .ok_or_else(|| Error::Config("gate is required".into()))?
        .to_spec()?;
    Ok((spec, cfg.delta2_over_omega.unwrap_or(-0.5)))
}

fn synthesize(cfg: &ExperimentConfig, writer: &mut ReportWriter) -> Result<()> {
    let (spec, d2) = gate_and_detuning(cfg)?;
    let sol = solve_toc_parameters(spec.gamma, d2, 1.0)?;
    writer.json(
        "solution.json",
        json!({
            "gate": {"gamma": spec.gamma, "theta": spec.theta, "phi": spec.phi},
            "solution": sol,
            "tau_over_tauc": sol.tau_over_tau_c(),
        }),
    )?;
    Ok(())
}

fn evolve(cfg: &ExperimentConfig, writer: &mut ReportWriter) -> Result<()> {
    let (spec, d2) = gate_and_detuning(cfg)?;
    let scheme = cfg.scheme.unwrap_or(SchemeKind::Ours).to_scheme(d2);
    let noise = cfg.noise.unwrap_or_default().model()?;
    let samples = cfg.samples.unwrap_or(200).max(2);

    let init2 = match cfg.initial_state {
        Some([re0, im0, re1, im1]) => StateVector::normalized(ndarray::array![
            C64::new(re0, im0),
            C64::new(re1, im1)
        ])
        .map_err(|e| Error::Config(format!("initial_state: {e}")))?,
        None => StateVector::basis(2, 0),
    };
    let target = init2.apply(&ideal_gate_operator(&spec))?.embedded(3)?;

    let mut sched = scheme.rotating_schedule(&spec)?;
    if let Some(s) = cfg.step_override {
        sched = sched.with_step(s)?;
    }
    let rho0 = init2.embedded(3)?.density();
    let snapshots = lindblad_evolve_sampled(
        &sched,
        &[decay_operator(), dephasing_operator()],
        &[noise.gamma_minus, noise.gamma_z],
        &rho0,
        samples,
    )?;

    let mut state_rows = Vec::with_capacity(snapshots.len());
    let mut bloch_rows = Vec::with_capacity(snapshots.len());
    for (t, rho) in &snapshots {
        let fidelity = rho.expectation(&target)?;
        state_rows.push(vec![
            format_sig(*t),
            format_sig(rho.population(0)),
            format_sig(rho.population(1)),
            format_sig(rho.population(2)),
            format_sig(fidelity),
        ]);
        // Bloch coordinates of the renormalized computational block
        let p = rho.population(0) + rho.population(1);
        let coh = rho.operator().get(1, 0);
        let (x, y, z) = if p < 1e-6 {
            (0.0, 0.0, 0.0)
        } else {
            (2.0 * coh.re / p, 2.0 * coh.im / p, (rho.population(0) - rho.population(1)) / p)
        };
        bloch_rows.push(vec![
            format_sig(*t),
            format_sig(x),
            format_sig(y),
            format_sig(z),
            format_sig(rho.population(2)),
        ]);
    }
    let final_fidelity = snapshots.last().map(|(_, r)| r.expectation(&target)).transpose()?;
    writer.csv("state.csv", &["t", "pop0", "pop1", "pop2", "fidelity"], state_rows)?;
    writer.csv("bloch.csv", &["t", "x", "y", "z", "leakage"], bloch_rows)?;
    writer.json(
        "summary.json",
        json!({
            "scheme": scheme.label(),
            "final_fidelity": final_fidelity,
            "duration": sched.duration(),
        }),
    )?;
    Ok(())
}

fn sweep(cfg: &ExperimentConfig, writer: &mut ReportWriter) -> Result<()> {
    let (spec, d2) = gate_and_detuning(cfg)?;
    let default_grid = crate::config::GridConfig { min: -0.1, max: 0.1, points: 41 };
    let delta_axis = cfg.delta_grid.unwrap_or(default_grid).axis()?;
    let eps_axis = cfg.epsilon_grid.unwrap_or(default_grid).axis()?;
    let joint = cfg.joint_grid.unwrap_or(false);
    let result = robustness_grid(&spec, d2, &delta_axis, &eps_axis, joint)?;
    let scheme = cfg.scheme.unwrap_or(SchemeKind::Ours).to_scheme(d2);
    writer.csv(
        "sweep.csv",
        &crate::presets::SWEEP_COLUMNS,
        crate::presets::sweep_rows(&result, &scheme),
    )?;
    Ok(())
}

fn decoherence(cfg: &ExperimentConfig, writer: &mut ReportWriter) -> Result<()> {
    let (spec, d2) = gate_and_detuning(cfg)?;
    let kappas = cfg
        .kappa_grid
        .unwrap_or(crate::config::GridConfig { min: 0.0, max: 1e-3, points: 11 })
        .axis()?;
    let result = decoherence_gate_curve(&spec, d2, &kappas)?;
    let scheme = cfg.scheme.unwrap_or(SchemeKind::Ours).to_scheme(d2);
    writer.csv(
        "decoherence.csv",
        &crate::presets::SWEEP_COLUMNS,
        crate::presets::sweep_rows(&result, &scheme),
    )?;
    Ok(())
}

fn circuit(cfg: &ExperimentConfig, writer: &mut ReportWriter) -> Result<()> {
    let circuit = cfg
        .circuit
        .as_ref()
        .ok_or_else(|| Error::Config("circuit section is required".into()))?;
    match circuit.kind {
        CircuitKind::SingleQubit => circuit_single(cfg, circuit, writer),
        CircuitKind::TwoQubit => circuit_two_qubit(cfg, circuit, writer),
    }
}

fn circuit_single(
    cfg: &ExperimentConfig,
    circuit: &CircuitConfig,
    writer: &mut ReportWriter,
) -> Result<()> {
    let spec = cfg
        .gate
        .as_ref()
        .ok_or_else(|| Error::Config("gate is required for single-qubit circuits".into()))?
        .to_spec()?;
    let mut lattice = match &circuit.lattice {
        Some(l) => l.to_lattice()?,
        None => LatticeConfig::default_single_unit(),
    };
    if let Some(s) = circuit.separation_scale {
        lattice = lattice.with_separation_scaled(s);
    }
    let omega = circuit.omega_ghz.unwrap_or(0.015) * crate::transmon::GHZ;
    let d2 = cfg.delta2_over_omega.unwrap_or(-0.5) * omega;
    let result = simulate_logical_gate(&spec, d2, omega, &lattice, cfg.step_override)?;

    let rows = result
        .leakage_series
        .iter()
        .map(|s| {
            vec![
                format_sig(s.t),
                format_sig(s.pop_single_excitation),
                format_sig(s.pop_double_excitation),
                format_sig(s.pop_level2),
            ]
        })
        .collect::<Vec<_>>();
    writer.csv(
        "leakage.csv",
        &["time", "pop_single_excitation", "pop_double_excitation", "pop_level2"],
        rows,
    )?;
    writer.json(
        "circuit_summary.json",
        json!({
            "kind": "single_qubit",
            "computational_fidelity": result.computational_fidelity,
            "max_leakage": result.max_leakage,
            "flagged": result.flagged,
            "tau_ns": result.settings.solution.tau,
            "drive_settings": result.settings,
        }),
    )?;
    Ok(())
}

fn circuit_two_qubit(
    cfg: &ExperimentConfig,
    circuit: &CircuitConfig,
    writer: &mut ReportWriter,
) -> Result<()> {
    let mut lattice = match &circuit.lattice {
        Some(l) => l.to_lattice()?,
        None => LatticeConfig::default_two_qubit_pair(),
    };
    if let Some(s) = circuit.separation_scale {
        lattice = lattice.with_separation_scaled(s);
    }
    let gamma = circuit.gamma_prime_over_pi.unwrap_or(1.0) * std::f64::consts::PI;
    // Delta'_3 is configured in units of the effective coupling
    let g23 = lattice
        .coupling(0, 1)
        .ok_or_else(|| Error::Config("circuit.lattice: missing coupling".into()))?;
    let beta3 = circuit.beta3;
    let g_eff = 2.0f64.sqrt()
        * crate::transmon::bessel_j1(beta3.unwrap_or(crate::transmon::DEFAULT_BETA3))?
        * g23;
    let delta3 = circuit.delta3_prime_over_g.unwrap_or(0.0) * g_eff;
    let result = two_qubit_physical(&lattice, gamma, delta3, beta3, cfg.step_override)?;
    writer.json(
        "circuit_summary.json",
        json!({
            "kind": "two_qubit",
            "fidelity": result.fidelity,
            "phase_11": result.phase_11,
            "residual_f_population": result.residual_f_population,
            "tau_ns": result.solution.tau,
            "eta": result.solution.eta,
            "effective_g": result.solution.g,
        }),
    )?;
    Ok(())
}
