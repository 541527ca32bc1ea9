//! Experiment configuration: a single JSON document with strict key
//! checking. Abstract experiments express rates in units of Omega;
//! lattice parameters are entered in GHz (converted internally to
//! angular frequencies).

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use crate::robustness::{NoiseModel, Scheme};
use crate::synthesis::GateSpec;
use crate::transmon::{LatticeConfig, TransmonParams, GHZ};
use crate::{Error, Result};

/// Top-level experiment document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Figure preset name (`figure_preset` experiments only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate: Option<GateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<SchemeKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta2_over_omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_grid: Option<GridConfig>,
    /// Sweep the full delta x epsilon product instead of the two axes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint_grid: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseConfig>,
    /// Computational-subspace initial state [re0, im0, re1, im1]
    /// (normalized internally) for `evolve`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<[f64; 4]>,
    /// Number of output samples along trajectories.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit: Option<CircuitConfig>,
    /// Output directory (CLI --out overrides).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Reserved for randomized corpora; current experiments are
    /// deterministic and ignore it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Integrator step override (inverse-Omega units for abstract runs,
    /// ns for circuit runs).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_override: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Synthesize,
    Evolve,
    Sweep,
    Decoherence,
    Circuit,
    FigurePreset,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Synthesize => "synthesize",
            ExperimentKind::Evolve => "evolve",
            ExperimentKind::Sweep => "sweep",
            ExperimentKind::Decoherence => "decoherence",
            ExperimentKind::Circuit => "circuit",
            ExperimentKind::FigurePreset => "figure_preset",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Ours,
    TocBaseline,
    SingleLoop,
}

impl SchemeKind {
    pub fn to_scheme(self, delta2_over_omega: f64) -> Scheme {
        match self {
            SchemeKind::Ours => Scheme::Ours { delta2_over_omega },
            SchemeKind::TocBaseline => Scheme::TocBaseline,
            SchemeKind::SingleLoop => Scheme::SingleLoop,
        }
    }
}

/// Gate selection: either a named preset with its rotation angle, or the
/// explicit (gamma, theta, phi) triple. Angles in units of pi.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<GatePreset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_over_pi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_over_pi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_over_pi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_over_pi: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GatePreset {
    Rx,
    Ry,
    Rz,
}

impl GateConfig {
    pub fn to_spec(&self) -> Result<GateSpec> {
        match (self.preset, self.gamma_over_pi) {
            (Some(p), None) => {
                let angle = self.angle_over_pi.ok_or_else(|| {
                    Error::Config("gate.angle_over_pi is required with gate.preset".into())
                })? * PI;
                if self.theta_over_pi.is_some() || self.phi_over_pi.is_some() {
                    return Err(Error::Config(
                        "gate.theta_over_pi/phi_over_pi conflict with gate.preset".into(),
                    ));
                }
                match p {
                    GatePreset::Rx => GateSpec::rx(angle),
                    GatePreset::Ry => GateSpec::ry(angle),
                    GatePreset::Rz => GateSpec::rz(angle),
                }
                .map_err(|e| Error::Config(format!("gate.angle_over_pi: {e}")))
            }
            (None, Some(g)) => {
                let theta = self.theta_over_pi.ok_or_else(|| {
                    Error::Config("gate.theta_over_pi is required without a preset".into())
                })?;
                let phi = self.phi_over_pi.ok_or_else(|| {
                    Error::Config("gate.phi_over_pi is required without a preset".into())
                })?;
                GateSpec::new(g * PI, theta * PI, phi * PI)
                    .map_err(|e| Error::Config(format!("gate: {e}")))
            }
            (Some(_), Some(_)) => {
                Err(Error::Config("gate.preset and gate.gamma_over_pi are exclusive".into()))
            }
            (None, None) => Err(Error::Config(
                "gate needs either preset + angle_over_pi or the (gamma, theta, phi) triple"
                    .into(),
            )),
        }
    }
}

/// Uniform grid: `points` values spanning [min, max].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridConfig {
    pub fn axis(&self) -> Result<Vec<f64>> {
        if self.points == 0 {
            return Err(Error::Config("grid.points must be positive".into()));
        }
        if self.max < self.min {
            return Err(Error::Config(format!(
                "grid.max ({}) must be >= grid.min ({})",
                self.max, self.min
            )));
        }
        Ok(crate::robustness::linspace(self.min, self.max, self.points))
    }
}

/// Decoherence rates in units of Omega: either the shared kappa or the
/// individual rates.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_over_omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_minus_over_omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_z_over_omega: Option<f64>,
}

impl NoiseConfig {
    pub fn model(&self) -> Result<NoiseModel> {
        match (self.kappa_over_omega, self.gamma_minus_over_omega, self.gamma_z_over_omega) {
            (Some(k), None, None) => NoiseModel::uniform(k),
            (None, gm, gz) => NoiseModel::new(gm.unwrap_or(0.0), gz.unwrap_or(0.0)),
            _ => Err(Error::Validation(
                "kappa_over_omega conflicts with the individual rates".into(),
            )),
        }
        .map_err(|e| Error::Config(format!("noise: {e}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitKind {
    SingleQubit,
    TwoQubit,
}

/// One transmon entry of a lattice override, in GHz.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmonGhz {
    pub frequency_ghz: f64,
    pub anharmonicity_ghz: f64,
}

/// Lattice override, in GHz.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeGhz {
    pub transmons: Vec<TransmonGhz>,
    /// (i, j, g_ghz) coupling list.
    pub couplings: Vec<(usize, usize, f64)>,
}

impl LatticeGhz {
    pub fn to_lattice(&self) -> Result<LatticeConfig> {
        let transmons: Result<Vec<TransmonParams>> = self
            .transmons
            .iter()
            .map(|t| TransmonParams::new(t.frequency_ghz * GHZ, t.anharmonicity_ghz * GHZ))
            .collect();
        let cfg = LatticeConfig {
            transmons: transmons.map_err(|e| Error::Config(format!("circuit.lattice: {e}")))?,
            couplings: self.couplings.iter().map(|(i, j, g)| (*i, *j, g * GHZ)).collect(),
            drives: vec![None; self.transmons.len()],
        };
        cfg.validate().map_err(|e| Error::Config(format!("circuit.lattice: {e}")))?;
        Ok(cfg)
    }
}

/// Physical-layer experiment settings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitConfig {
    pub kind: CircuitKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeGhz>,
    /// Drive amplitude Omega in GHz (single-qubit circuits); default
    /// 0.015.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_ghz: Option<f64>,
    /// Controlled phase gamma' in units of pi (two-qubit circuits);
    /// default 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_prime_over_pi: Option<f64>,
    /// Detuning Delta'_3 in units of the effective coupling g; default 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta3_prime_over_g: Option<f64>,
    /// Modulation index of the two-qubit drive; default 2.4048 (the J_0
    /// zero).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta3: Option<f64>,
    /// Frequency-separation scale factor applied to the lattice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation_scale: Option<f64>,
}

impl ExperimentConfig {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| {
            Error::Config(format!(
                "parse error at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Cross-field validation; every error names the offending field.
    pub fn validate(&self) -> Result<()> {
        match self.experiment {
            ExperimentKind::Synthesize
            | ExperimentKind::Evolve
            | ExperimentKind::Sweep
            | ExperimentKind::Decoherence => {
                let gate = self
                    .gate
                    .as_ref()
                    .ok_or_else(|| Error::Config("gate is required for this experiment".into()))?;
                gate.to_spec()?;
            }
            ExperimentKind::Circuit => {
                if self.circuit.is_none() {
                    return Err(Error::Config("circuit section is required".into()));
                }
            }
            ExperimentKind::FigurePreset => {
                let name = self
                    .preset
                    .as_deref()
                    .ok_or_else(|| Error::Config("preset name is required".into()))?;
                crate::presets::parse_preset(name)?;
            }
        }
        if let Some(n) = &self.noise {
            n.model()?;
        }
        for (label, grid) in [
            ("delta_grid", &self.delta_grid),
            ("epsilon_grid", &self.epsilon_grid),
            ("kappa_grid", &self.kappa_grid),
        ] {
            if let Some(g) = grid {
                g.axis().map_err(|e| Error::Config(format!("{label}: {e}")))?;
            }
        }
        if let Some(c) = &self.circuit {
            if let Some(l) = &c.lattice {
                l.to_lattice()?;
            }
            if let Some(s) = c.separation_scale {
                if s.is_nan() || s <= 0.0 {
                    return Err(Error::Config(
                        "circuit.separation_scale must be positive".into(),
                    ));
                }
            }
        }
        if let Some(s) = self.step_override {
            if s.is_nan() || s <= 0.0 {
                return Err(Error::Config("step_override must be positive".into()));
            }
        }
        Ok(())
    }

    /// Canonical serialization used for the output-file hash.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        let r = ExperimentConfig::from_json(
            r#"{"experiment": "synthesize", "gate": {"preset": "rx", "angle_over_pi": 0.5},
                "bogus_key": 1}"#,
        );
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn parse_error_carries_position() {
        let err = ExperimentConfig::from_json("{ not json").unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("line") && msg.contains("column"), "{msg}");
    }

    #[test]
    fn gate_preset_and_triple_are_exclusive() {
        let cfg = GateConfig {
            preset: Some(GatePreset::Rx),
            angle_over_pi: Some(0.5),
            gamma_over_pi: Some(0.5),
            theta_over_pi: None,
            phi_over_pi: None,
        };
        assert!(cfg.to_spec().is_err());
    }

    #[test]
    fn valid_synthesize_config() {
        let cfg = ExperimentConfig::from_json(
            r#"{"experiment": "synthesize",
                "gate": {"preset": "rx", "angle_over_pi": 0.5},
                "delta2_over_omega": -0.5}"#,
        )
        .unwrap();
        let spec = cfg.gate.unwrap().to_spec().unwrap();
        assert!((spec.gamma - PI / 2.0).abs() < 1e-12);
        assert!((spec.theta - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn lattice_ghz_conversion() {
        let l = LatticeGhz {
            transmons: vec![
                TransmonGhz { frequency_ghz: 5.2, anharmonicity_ghz: 0.25 },
                TransmonGhz { frequency_ghz: 6.0, anharmonicity_ghz: 0.25 },
            ],
            couplings: vec![(0, 1, 0.015)],
        };
        let cfg = l.to_lattice().unwrap();
        assert!((cfg.transmons[0].omega_q - 5.2 * GHZ).abs() < 1e-12);
        assert!((cfg.coupling(0, 1).unwrap() - 0.015 * GHZ).abs() < 1e-12);
    }

    #[test]
    fn invalid_gate_domain_is_config_error() {
        let r = ExperimentConfig::from_json(
            r#"{"experiment": "synthesize", "gate": {"preset": "rx", "angle_over_pi": 2.5}}"#,
        );
        assert!(matches!(r, Err(Error::Config(_))), "{r:?}");
    }
}
