//! Figure presets: deterministic datasets behind each of the headline
//! plots, emitted as CSV.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use crate::report::{config_hash, format_sig, ReportWriter};
use crate::robustness::{
    decoherence_gate_curve, decoherence_state_run, linspace, robustness_grid, DecoherenceGate,
    Scheme, SweepResult,
};
use crate::synthesis::{favorable_detuning, solve_toc_parameters, GateSpec};
use crate::{Error, Result};

/// The available presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Gate time vs rotation angle for a family of detunings.
    Fig2,
    /// Systematic-error robustness comparison (per-axis panels).
    Fig3,
    /// Population and fidelity dynamics under decoherence.
    Fig4,
    /// Cardinal-state gate fidelity vs decoherence rate.
    Fig5,
    /// Acceleration table at representative rotation angles.
    TableAccel,
}

pub fn parse_preset(name: &str) -> Result<Preset> {
    match name {
        "fig2" => Ok(Preset::Fig2),
        "fig3" => Ok(Preset::Fig3),
        "fig4" => Ok(Preset::Fig4),
        "fig5" => Ok(Preset::Fig5),
        "table-accel" => Ok(Preset::TableAccel),
        other => Err(Error::Config(format!(
            "unknown preset '{other}' (expected fig2, fig3, fig4, fig5 or table-accel)"
        ))),
    }
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::TableAccel => "table-accel",
        }
    }
}

/// Runs one preset into `out_dir`, returning the written files.
pub fn run_preset(preset: Preset, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let hash = config_hash(&format!("preset:{}", preset.name()));
    let mut writer = ReportWriter::new(out_dir, preset.name(), &hash)?;
    match preset {
        Preset::Fig2 => fig2(&mut writer)?,
        Preset::Fig3 => fig3(&mut writer)?,
        Preset::Fig4 => fig4(&mut writer)?,
        Preset::Fig5 => fig5(&mut writer)?,
        Preset::TableAccel => table_accel(&mut writer)?,
    }
    Ok(writer.written().to_vec())
}

/// tau/tau_c and eta against gamma for Delta_2/Omega in
/// {0, +-1/4, +-1/2, +-1}.
fn fig2(writer: &mut ReportWriter) -> Result<()> {
    let detunings = [0.0, 0.25, -0.25, 0.5, -0.5, 1.0, -1.0];
    let mut rows = Vec::new();
    for d2 in detunings {
        for k in 1..200 {
            let gamma = 0.01 * PI * k as f64;
            let sol = solve_toc_parameters(gamma, d2, 1.0)?;
            rows.push(vec![
                format_sig(gamma / PI),
                format_sig(d2),
                format_sig(sol.eta),
                format_sig(sol.tau_over_tau_c()),
            ]);
        }
    }
    writer.csv(
        "fig2.csv",
        &["gamma_over_pi", "delta2_over_omega", "eta_over_omega", "tau_over_tauc"],
        rows,
    )?;
    Ok(())
}

/// Standard sweep emission in the 11-column contract: one row per cell,
/// carrying the selected scheme's fidelity plus its differences against
/// the two baselines (their absolute values are recoverable from the
/// diff columns).
pub(crate) fn sweep_rows(result: &SweepResult, scheme: &Scheme) -> Vec<Vec<String>> {
    let spec = result.gate;
    let tau = scheme.duration(&spec).map(|t| t / (2.0 * PI)).unwrap_or(f64::NAN);
    let mut rows = Vec::with_capacity(result.cells.len());
    for cell in &result.cells {
        let f = match scheme {
            Scheme::Ours { .. } => cell.f_ours,
            Scheme::TocBaseline => cell.f_toc,
            Scheme::SingleLoop => cell.f_single_loop,
        };
        rows.push(vec![
            scheme.label().to_string(),
            format_sig(spec.gamma),
            format_sig(spec.theta),
            format_sig(spec.phi),
            format_sig(cell.delta),
            format_sig(cell.epsilon),
            format_sig(cell.kappa),
            format_sig(tau),
            format_sig(f),
            format_sig(f - cell.f_single_loop),
            format_sig(f - cell.f_toc),
        ]);
    }
    rows
}

pub(crate) const SWEEP_COLUMNS: [&str; 11] = [
    "scheme",
    "gamma",
    "theta",
    "phi",
    "delta",
    "epsilon",
    "kappa",
    "tau_over_tauc",
    "fidelity",
    "fidelity_diff_vs_single_loop",
    "fidelity_diff_vs_toc",
];

/// Per-axis robustness panels for the three pi/2 rotations at
/// Delta_2/Omega = -1/2.
fn fig3(writer: &mut ReportWriter) -> Result<()> {
    let axis = linspace(-0.1, 0.1, 41);
    let mut rows = Vec::new();
    let ours = Scheme::Ours { delta2_over_omega: -0.5 };
    for spec in [
        GateSpec::rx(PI / 2.0)?,
        GateSpec::ry(PI / 2.0)?,
        GateSpec::rz(PI / 2.0)?,
    ] {
        let result = robustness_grid(&spec, -0.5, &axis, &axis, false)?;
        rows.extend(sweep_rows(&result, &ours));
    }
    writer.csv("fig3.csv", &SWEEP_COLUMNS, rows)?;
    Ok(())
}

/// Population and fidelity dynamics of R_x(pi/2) from |0> and R_z(pi/2)
/// from (|0>+|1>)/sqrt2 at kappa = 4e-4.
fn fig4(writer: &mut ReportWriter) -> Result<()> {
    let mut rows = Vec::new();
    for (label, gate) in
        [("rx_half_pi", DecoherenceGate::RxHalfPi), ("rz_half_pi", DecoherenceGate::RzHalfPi)]
    {
        let run = decoherence_state_run(gate, -0.5, 4e-4, 200)?;
        let tau = run.samples.last().expect("sampled").t;
        for s in &run.samples {
            rows.push(vec![
                label.to_string(),
                format_sig(s.t / tau),
                format_sig(s.pop0),
                format_sig(s.pop1),
                format_sig(s.pop2),
                format_sig(s.fidelity),
            ]);
        }
    }
    writer.csv(
        "fig4.csv",
        &["gate", "t_over_tau", "pop0", "pop1", "pop2", "fidelity"],
        rows,
    )?;
    Ok(())
}

/// Cardinal-state gate fidelities of the three schemes against the
/// decoherence rate, for R_x(pi/2) and R_z(pi/2).
fn fig5(writer: &mut ReportWriter) -> Result<()> {
    let kappas = linspace(0.0, 1e-3, 11);
    let mut rows = Vec::new();
    let ours = Scheme::Ours { delta2_over_omega: -0.5 };
    for spec in [GateSpec::rx(PI / 2.0)?, GateSpec::rz(PI / 2.0)?] {
        let result = decoherence_gate_curve(&spec, -0.5, &kappas)?;
        rows.extend(sweep_rows(&result, &ours));
    }
    writer.csv("fig5.csv", &SWEEP_COLUMNS, rows)?;
    Ok(())
}

/// Gate times at representative angles for increasing favorable detuning.
fn table_accel(writer: &mut ReportWriter) -> Result<()> {
    let mut rows = Vec::new();
    for gamma_over_pi in [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75] {
        let gamma = gamma_over_pi * PI;
        for mag in [0.0, 0.25, 0.5, 1.0] {
            let d2 = favorable_detuning(gamma, mag);
            let sol = solve_toc_parameters(gamma, d2, 1.0)?;
            rows.push(vec![
                format_sig(gamma_over_pi),
                format_sig(d2),
                format_sig(sol.eta),
                format_sig(sol.tau_over_tau_c()),
            ]);
        }
    }
    writer.csv(
        "table_accel.csv",
        &["gamma_over_pi", "delta2_over_omega", "eta_over_omega", "tau_over_tauc"],
        rows,
    )?;
    Ok(())
}
