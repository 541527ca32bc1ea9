//! Physical realization on parametrically driven transmons: a three-qubit
//! logical unit in the single-excitation decoherence-free subspace plus a
//! two-transmon inter-unit coupling for the controlled-phase gate.
//!
//! All simulations run in the diagonal rotating frame of the drive
//! transformation, computed exactly (conjugate the lab Hamiltonian and add
//! the frame generator); the post-RWA effective models serve as oracle
//! targets, never as the simulation itself.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::fidelity::trace_fidelity;
use crate::operator::Operator;
use crate::propagate::{propagate, propagate_sampled};
use crate::schedule::Schedule;
use crate::state::StateVector;
use crate::synthesis::{
    ideal_gate_operator, solve_toc_parameters, solve_two_qubit_parameters, two_qubit_gate,
    DriveSolution, GateSpec, TwoQubitDriveSolution,
};
use crate::{Error, Result};

/// Location of the first maximum of J_1 (end of the monotone branch used
/// for inversion).
pub const J1_PEAK_X: f64 = 1.8411837813406593;
/// Peak value of J_1.
pub const J1_PEAK: f64 = 0.5818652242815964;

/// rad/ns per GHz of ordinary frequency.
pub const GHZ: f64 = 2.0 * PI;

/// Bessel function of the first kind J_1 via the alternating series
/// sum_k (-1)^k (x/2)^{2k+1} / (k! (k+1)!), 25 terms.
pub fn bessel_j1(x: f64) -> Result<f64> {
    bessel_j1_terms(x, 25)
}

/// Series evaluation with an explicit term count (the convergence check
/// compares 25 against 40 terms).
pub fn bessel_j1_terms(x: f64, terms: usize) -> Result<f64> {
    if x.abs() > 10.0 {
        return Err(Error::Domain(format!("bessel_j1 series domain is |x| <= 10, got {x}")));
    }
    let half = 0.5 * x;
    let mut term = half;
    let mut acc = half;
    for k in 1..terms {
        term *= -(half * half) / (k as f64 * (k as f64 + 1.0));
        acc += term;
    }
    Ok(acc)
}

/// Inverts J_1 on the monotone branch [0, J1_PEAK_X) by bisection.
pub fn invert_j1(target: f64) -> Result<f64> {
    if !(0.0..=J1_PEAK).contains(&target) {
        return Err(Error::Capability(format!(
            "required J_1 value {target} outside the attainable range [0, {J1_PEAK}]"
        )));
    }
    if target == 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, J1_PEAK_X);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bessel_j1(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One transmon: 0-1 transition frequency and anharmonicity (level |2> at
/// 2 omega_q - alpha). Angular frequencies in rad/ns.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TransmonParams {
    pub omega_q: f64,
    pub alpha: f64,
}

impl TransmonParams {
    pub fn new(omega_q: f64, alpha: f64) -> Result<Self> {
        if alpha <= 0.0 {
            return Err(Error::Validation(format!("anharmonicity must be positive, got {alpha}")));
        }
        Ok(Self { omega_q, alpha })
    }

    fn level_energy(&self, n: usize) -> f64 {
        match n {
            0 => 0.0,
            1 => self.omega_q,
            _ => 2.0 * self.omega_q - self.alpha,
        }
    }
}

/// Parametric frequency modulation omega_q(t) = omega_q + eps sin(nu t +
/// phase(t)) with phase(t) = phase_offset + phase_rate * t.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct ParametricDrive {
    pub epsilon_d: f64,
    pub nu: f64,
    pub phase_offset: f64,
    pub phase_rate: f64,
}

impl ParametricDrive {
    /// Modulation index beta = eps / nu (the modulation amplitude carries
    /// the sign of nu, so beta stays nonnegative).
    pub fn beta(&self) -> f64 {
        if self.nu == 0.0 {
            0.0
        } else {
            self.epsilon_d / self.nu
        }
    }

    pub fn phase(&self, t: f64) -> f64 {
        self.phase_offset + self.phase_rate * t
    }
}

/// A set of capacitively coupled transmons with optional parametric
/// drives. Couplings are symmetric; only declared pairs couple.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub transmons: Vec<TransmonParams>,
    /// (i, j, g_ij) with i < j.
    pub couplings: Vec<(usize, usize, f64)>,
    /// Drive per transmon (None = undriven).
    pub drives: Vec<Option<ParametricDrive>>,
}

impl LatticeConfig {
    pub fn validate(&self) -> Result<()> {
        let n = self.transmons.len();
        if self.drives.len() != n {
            return Err(Error::Validation(format!(
                "{} drive slots for {} transmons",
                self.drives.len(),
                n
            )));
        }
        for t in &self.transmons {
            if t.alpha <= 0.0 {
                return Err(Error::Validation("anharmonicity must be positive".into()));
            }
        }
        for (i, j, g) in &self.couplings {
            if *i >= n || *j >= n || i == j {
                return Err(Error::Validation(format!("invalid coupling pair ({i}, {j})")));
            }
            if !g.is_finite() {
                return Err(Error::Validation("coupling must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn coupling(&self, a: usize, b: usize) -> Option<f64> {
        self.couplings
            .iter()
            .find(|(i, j, _)| (*i == a && *j == b) || (*i == b && *j == a))
            .map(|(_, _, g)| *g)
    }

    /// Default single logical unit (T_1, T_a, T_2): frequencies 5.2, 6.0,
    /// 4.6 GHz, anharmonicities 250 MHz, all couplings 15 MHz. This g_12
    /// equals the consistency requirement of the R_x/R_y family at
    /// Delta_2 = -Omega/2 with Omega = 2 pi x 15 MHz.
    pub fn default_single_unit() -> Self {
        let alpha = 0.250 * GHZ;
        Self {
            transmons: vec![
                TransmonParams { omega_q: 5.2 * GHZ, alpha },
                TransmonParams { omega_q: 6.0 * GHZ, alpha },
                TransmonParams { omega_q: 4.6 * GHZ, alpha },
            ],
            couplings: vec![(0, 1, 0.015 * GHZ), (1, 2, 0.015 * GHZ), (0, 2, 0.015 * GHZ)],
            drives: vec![None, None, None],
        }
    }

    /// Default drive amplitude for gates on the single unit.
    pub fn default_omega() -> f64 {
        0.015 * GHZ
    }

    /// Default inter-unit pair (T_2, T_3): 4.6 and 3.75 GHz, 250 MHz
    /// anharmonicities, g_23 = 8 MHz. The frequency split keeps the
    /// parametric sidebands (spaced by nu_3 = Delta_23 - alpha_2) more
    /// than 20x above the effective coupling.
    pub fn default_two_qubit_pair() -> Self {
        let alpha = 0.250 * GHZ;
        Self {
            transmons: vec![
                TransmonParams { omega_q: 4.6 * GHZ, alpha },
                TransmonParams { omega_q: 3.75 * GHZ, alpha },
            ],
            couplings: vec![(0, 1, 0.008 * GHZ)],
            drives: vec![None, None],
        }
    }

    /// Spreads qubit frequencies away from their mean and scales the
    /// anharmonicities by `factor`, keeping couplings fixed (the
    /// RWA-validity trend knob).
    pub fn with_separation_scaled(&self, factor: f64) -> Self {
        let mean =
            self.transmons.iter().map(|t| t.omega_q).sum::<f64>() / self.transmons.len() as f64;
        Self {
            transmons: self
                .transmons
                .iter()
                .map(|t| TransmonParams {
                    omega_q: mean + (t.omega_q - mean) * factor,
                    alpha: t.alpha * factor,
                })
                .collect(),
            couplings: self.couplings.clone(),
            drives: self.drives.clone(),
        }
    }
}

fn product_dim(n_transmons: usize) -> usize {
    3usize.pow(n_transmons as u32)
}

/// Base-3 digits of a product-space index, most significant = transmon 0.
fn digits(index: usize, n_transmons: usize) -> Vec<usize> {
    let mut out = vec![0; n_transmons];
    let mut rem = index;
    for slot in (0..n_transmons).rev() {
        out[slot] = rem % 3;
        rem /= 3;
    }
    out
}

fn index_of(digits: &[usize]) -> usize {
    digits.iter().fold(0, |acc, d| acc * 3 + d)
}

/// Logical basis bookkeeping. Single unit (ordering `(n_1, n_a, n_2)`):
/// `|0>_L = |100>`, `|1>_L = |001>`, auxiliary `|e>_L = |010>`.
/// Two-transmon pair `(n_2, n_3)`: `|00>_L -> |01>`, `|01>_L -> |00>`,
/// `|10>_L -> |11>`, `|11>_L -> |10>`, auxiliary `|f>_L -> |20>`.
#[derive(Clone, Copy, Debug)]
pub struct LogicalEncoding;

impl LogicalEncoding {
    pub const ZERO_L: usize = 9;
    pub const ONE_L: usize = 1;
    pub const E_L: usize = 3;
    pub const S2_INDICES: [usize; 4] = [1, 0, 4, 3];
    pub const F_L: usize = 6;
}

/// The lab-frame Hamiltonian of the three-transmon logical unit,
/// including |2> levels and counter-rotating coupling terms:
/// `sum_j [omega_qj(t)|1><1| + (2 omega_qj(t) - alpha_j)|2><2|] +
/// sum_pairs g_ij (sigma_i + sigma_i^+)(sigma_j + sigma_j^+)` with
/// `sigma = |0><1| + sqrt(2)|1><2|`.
pub fn physical_hamiltonian_single_unit(cfg: &LatticeConfig, t: f64) -> Result<Operator> {
    cfg.validate()?;
    if cfg.transmons.len() != 3 {
        return Err(Error::Validation(format!(
            "single unit needs exactly 3 transmons, got {}",
            cfg.transmons.len()
        )));
    }
    for (a, b) in [(0usize, 1usize), (1, 2), (0, 2)] {
        if cfg.coupling(a, b).is_none() {
            return Err(Error::Validation(format!(
                "missing coupling between transmons {a} and {b}"
            )));
        }
    }
    let mut h = coupling_structure(cfg)?;
    let dim = h.dim();
    for m in 0..dim {
        let dg = digits(m, 3);
        let mut e = 0.0;
        for (j, n) in dg.iter().enumerate() {
            let wq = instantaneous_frequency(cfg, j, t);
            e += match n {
                0 => 0.0,
                1 => wq,
                _ => 2.0 * wq - cfg.transmons[j].alpha,
            };
        }
        h.set(m, m, C64::new(e, 0.0));
    }
    Ok(h)
}

fn instantaneous_frequency(cfg: &LatticeConfig, j: usize, t: f64) -> f64 {
    let base = cfg.transmons[j].omega_q;
    match &cfg.drives[j] {
        Some(d) => base + d.epsilon_d * (d.nu * t + d.phase(t)).sin(),
        None => base,
    }
}

/// Static coupling part on the full product space.
fn coupling_structure(cfg: &LatticeConfig) -> Result<Operator> {
    let n = cfg.transmons.len();
    let mut x1 = Operator::zeros(3);
    x1.set(0, 1, C64::new(1.0, 0.0));
    x1.set(1, 0, C64::new(1.0, 0.0));
    x1.set(1, 2, C64::new(2.0f64.sqrt(), 0.0));
    x1.set(2, 1, C64::new(2.0f64.sqrt(), 0.0));
    let mut total = Operator::zeros(product_dim(n));
    for (i, j, g) in &cfg.couplings {
        let mut term = if *i == 0 || *j == 0 { x1.clone() } else { Operator::identity(3) };
        for slot in 1..n {
            let factor =
                if slot == *i || slot == *j { x1.clone() } else { Operator::identity(3) };
            term = term.kron(&factor);
        }
        total = total.add(&term.scale(C64::new(*g, 0.0)));
    }
    Ok(total)
}

/// Drive settings produced by the gate mapping.
#[derive(Clone, Debug, Serialize)]
pub struct DriveSettings {
    /// Frame detunings (Delta'_1, Delta'_a, Delta'_2).
    pub frame_detunings: [f64; 3],
    /// Modulation indices (beta_1, beta_2) of the driven transmons.
    pub beta: [f64; 2],
    /// Modulation frequencies (nu_1, nu_2).
    pub nu: [f64; 2],
    /// Physical drive phase offsets.
    pub phase_offsets: [f64; 2],
    /// Physical drive phase rates.
    pub phase_rates: [f64; 2],
    /// The g_12 value demanded by the mapping.
    pub required_g12: f64,
    /// Relative mismatch of the configured g_12 against the requirement.
    pub g12_mismatch: f64,
    /// The underlying single-qubit pulse solution.
    pub solution: DriveSolution,
}

/// Relative g_12 mismatch beyond which the mapping refuses to proceed.
pub const G12_MISMATCH_LIMIT: f64 = 0.05;

/// Maps an abstract gate (spec, Delta_2, Omega) onto parametric drive
/// settings: Delta'_1 = -(Delta_2/2) sin^2(theta/2), Delta'_a = Delta_2/2,
/// Delta'_2 = -(Delta_2/2) cos^2(theta/2); the modulation indices invert
/// g_1a J_1(beta_1) = (Omega/2) sin(theta/2), g_a2 J_1(beta_2) =
/// (Omega/2) cos(theta/2) on the monotone branch; modulation frequencies
/// nu_1 = Delta'_1a, nu_2 = Delta'_a2. The RWA drive phases are
/// phi'_1(t) = phi_0(t) and phi'_2(t) = -phi_1(t) of the pulse, carried
/// physically as phi_1 = phi'_1 - pi/2 and phi_2 = phi'_2 + pi/2.
pub fn map_gate_to_drives(
    spec: &GateSpec,
    delta2: f64,
    omega: f64,
    cfg: &LatticeConfig,
) -> Result<DriveSettings> {
    cfg.validate()?;
    let sol = solve_toc_parameters(spec.gamma, delta2, omega)?;
    let s = (spec.theta / 2.0).sin();
    let c = (spec.theta / 2.0).cos();
    let g1a = cfg.coupling(0, 1).ok_or_else(|| Error::Validation("missing g_1a".into()))?;
    let ga2 = cfg.coupling(1, 2).ok_or_else(|| Error::Validation("missing g_a2".into()))?;
    let g12 = cfg.coupling(0, 2).ok_or_else(|| Error::Validation("missing g_12".into()))?;

    let j1_req_1 = 0.5 * omega * s / g1a;
    let j1_req_2 = 0.5 * omega * c / ga2;
    for (leg, req) in [("1a", j1_req_1), ("a2", j1_req_2)] {
        if req > J1_PEAK {
            return Err(Error::Capability(format!(
                "coupling leg {leg} requires J_1 = {req:.4} beyond the peak {J1_PEAK:.4}"
            )));
        }
        if req < 0.0 {
            return Err(Error::Capability(format!("coupling leg {leg} requires negative J_1")));
        }
    }
    let beta1 = invert_j1(j1_req_1)?;
    let beta2 = invert_j1(j1_req_2)?;

    let product = bessel_j1(beta1)? * bessel_j1(beta2)?;
    let required_g12 =
        if product.abs() < 1e-14 { 0.0 } else { -(delta2 / 2.0) * s * c / product };
    // the mismatch is measured as the spurious (or missing) resonant
    // 0<->1 coupling amplitude relative to the drive scale Omega/2
    let g12_mismatch = (g12 - required_g12).abs() * product.abs() / (0.5 * omega);
    if g12_mismatch > G12_MISMATCH_LIMIT {
        return Err(Error::Capability(format!(
            "configured g_12 = {g12:.6} vs required {required_g12:.6}: the resonant 0<->1 \
             coupling is off by {:.1}% of Omega/2",
            g12_mismatch * 100.0
        )));
    }

    let dp1 = -(delta2 / 2.0) * s * s;
    let dpa = delta2 / 2.0;
    let dp2 = -(delta2 / 2.0) * c * c;
    let d1a = cfg.transmons[0].omega_q - cfg.transmons[1].omega_q;
    let da2 = cfg.transmons[1].omega_q - cfg.transmons[2].omega_q;

    Ok(DriveSettings {
        frame_detunings: [dp1, dpa, dp2],
        beta: [beta1, beta2],
        nu: [d1a - dp1 + dpa, da2 - dpa + dp2],
        phase_offsets: [spec.phi - PI / 2.0, PI / 2.0],
        phase_rates: [sol.eta, -sol.eta],
        required_g12,
        g12_mismatch,
        solution: sol,
    })
}

/// The post-RWA effective Hamiltonian of the driven unit on the logical
/// basis ordered (|0>_L, |1>_L, |e>_L), directly comparable entrywise to
/// the rotating-frame three-level model.
pub fn effective_logical_hamiltonian(
    cfg: &LatticeConfig,
    settings: &DriveSettings,
    t: f64,
) -> Result<Operator> {
    let g1a = cfg.coupling(0, 1).ok_or_else(|| Error::Validation("missing g_1a".into()))?;
    let ga2 = cfg.coupling(1, 2).ok_or_else(|| Error::Validation("missing g_a2".into()))?;
    let g12 = cfg.coupling(0, 2).ok_or_else(|| Error::Validation("missing g_12".into()))?;
    let [dp1, dpa, dp2] = settings.frame_detunings;
    let j1 = bessel_j1(settings.beta[0])?;
    let j2 = bessel_j1(settings.beta[1])?;
    // the RWA phases phi'_j recover the physical offsets' shifts
    let p1 = settings.phase_offsets[0] + settings.phase_rates[0] * t + PI / 2.0;
    let p2 = settings.phase_offsets[1] + settings.phase_rates[1] * t - PI / 2.0;
    let mut h = Operator::zeros(3);
    h.set(0, 0, C64::new(dp1, 0.0));
    h.set(1, 1, C64::new(dp2, 0.0));
    h.set(2, 2, C64::new(dpa, 0.0));
    let c0e = C64::from_polar(g1a * j1, -p1);
    let c1e = C64::from_polar(ga2 * j2, p2);
    let c01 = C64::from_polar(g12 * j1 * j2, -(p1 + p2));
    h.set(0, 2, c0e);
    h.set(2, 0, c0e.conj());
    h.set(1, 2, c1e);
    h.set(2, 1, c1e.conj());
    h.set(0, 1, c01);
    h.set(1, 0, c01.conj());
    Ok(h)
}

/// Exact diagonal-frame schedule of a driven lattice over `[0, tau]`:
/// H_T(t) = V H(t) V^+ - diag(dPhi/dt) with V = diag(e^{i Phi_m(t)}) and
/// Phi_m = sum_j [E'_j(n_j) t - beta_j cos(nu_j t + phi_j(t)) n_j],
/// E'_j(n) the undriven level energy minus the frame offset Delta'_j.
pub(crate) fn diagonal_frame_schedule(
    cfg: LatticeConfig,
    frame_offsets: Vec<f64>,
    tau: f64,
) -> Result<Schedule> {
    cfg.validate()?;
    let n = cfg.transmons.len();
    let dim = product_dim(n);
    let coupling = coupling_structure(&cfg)?;
    let level_digits: Vec<Vec<usize>> = (0..dim).map(|m| digits(m, n)).collect();
    let mut entries: Vec<(usize, usize, C64)> = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = coupling.get(i, j);
            if v.norm() > 0.0 {
                entries.push((i, j, v));
            }
        }
    }

    // fastest phase rate over coupled entries sets the sampling density
    let single_rate = |m: usize| -> f64 {
        level_digits[m]
            .iter()
            .enumerate()
            .map(|(j, nl)| {
                if *nl == 0 {
                    return 0.0;
                }
                let e = cfg.transmons[j].level_energy(*nl) - frame_offsets[j];
                let wiggle = cfg.drives[j]
                    .as_ref()
                    .map(|d| (d.epsilon_d.abs() + d.beta().abs() * d.phase_rate.abs()) * *nl as f64)
                    .unwrap_or(0.0);
                e.abs() + wiggle
            })
            .sum()
    };
    let mut max_rate = 1e-12f64;
    for (i, j, _) in &entries {
        max_rate = max_rate.max(single_rate(*i) + single_rate(*j));
    }
    // 40 samples per period of the fastest coupled phase; the phases of
    // the dynamically populated manifold are several times slower, so
    // they come out proportionally finer. The tau/2000 cap still applies
    // for short windows.
    let step = (2.0 * PI / max_rate / 40.0).min(tau / 2000.0);

    Schedule::new(tau, step, dim, move |t| {
        let mut phases: Vec<(f64, f64)> = Vec::with_capacity(dim);
        for dg in &level_digits {
            let mut phi = 0.0;
            let mut rate = 0.0;
            for (j, nl) in dg.iter().enumerate() {
                if *nl == 0 {
                    continue;
                }
                let ep = cfg.transmons[j].level_energy(*nl) - frame_offsets[j];
                phi += ep * t;
                rate += ep;
                if let Some(d) = &cfg.drives[j] {
                    let w = *nl as f64;
                    let arg = d.nu * t + d.phase(t);
                    phi -= d.beta() * arg.cos() * w;
                    rate += d.beta() * (d.nu + d.phase_rate) * arg.sin() * w;
                }
            }
            phases.push((phi, rate));
        }
        let mut data = Array2::<C64>::zeros((dim, dim));
        for (i, j, g) in &entries {
            let v = *g * C64::from_polar(1.0, phases[*i].0 - phases[*j].0);
            data[(*i, *j)] = v;
            data[(*j, *i)] = v.conj();
        }
        for m in 0..dim {
            let mut diag = 0.0;
            for (j, nl) in level_digits[m].iter().enumerate() {
                if *nl == 0 {
                    continue;
                }
                let wq = instantaneous_frequency(&cfg, j, t);
                diag += match nl {
                    1 => wq,
                    _ => 2.0 * wq - cfg.transmons[j].alpha,
                };
            }
            data[(m, m)] = C64::new(diag - phases[m].1, 0.0);
        }
        Operator::new(data).expect("square by construction")
    })
}

/// Transformed-frame schedule of the driven single unit over the gate
/// window.
pub fn single_unit_schedule(cfg: &LatticeConfig, settings: &DriveSettings) -> Result<Schedule> {
    if cfg.transmons.len() != 3 {
        return Err(Error::Validation("single unit needs exactly 3 transmons".into()));
    }
    let mut driven = cfg.clone();
    driven.drives = vec![
        Some(ParametricDrive {
            epsilon_d: settings.beta[0] * settings.nu[0],
            nu: settings.nu[0],
            phase_offset: settings.phase_offsets[0],
            phase_rate: settings.phase_rates[0],
        }),
        None,
        Some(ParametricDrive {
            epsilon_d: settings.beta[1] * settings.nu[1],
            nu: settings.nu[1],
            phase_offset: settings.phase_offsets[1],
            phase_rate: settings.phase_rates[1],
        }),
    ];
    diagonal_frame_schedule(driven, settings.frame_detunings.to_vec(), settings.solution.tau)
}

/// Per-time leakage sample of a transmon run.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LeakageSample {
    pub t: f64,
    pub pop_single_excitation: f64,
    pub pop_double_excitation: f64,
    pub pop_level2: f64,
}

/// Result of the full single-unit simulation.
#[derive(Clone, Debug)]
pub struct LogicalGateResult {
    /// Achieved operator on (|0>_L, |1>_L, |e>_L).
    pub achieved: Operator,
    /// Computational-subspace trace fidelity against the ideal rotation.
    pub computational_fidelity: f64,
    /// Largest population leaked out of {|0>_L, |1>_L, |e>_L} by any
    /// logical basis input at the final time.
    pub max_leakage: f64,
    /// Leakage exceeded 10%.
    pub flagged: bool,
    /// Time series from the (|0>_L + |1>_L)/sqrt(2) input.
    pub leakage_series: Vec<LeakageSample>,
    /// The drive settings used.
    pub settings: DriveSettings,
}

fn excitation_number(dg: &[usize]) -> usize {
    dg.iter().sum()
}

/// Simulates the full 27-dim driven unit for one holonomic gate and
/// compares against the ideal rotation on the computational subspace.
pub fn simulate_logical_gate(
    spec: &GateSpec,
    delta2: f64,
    omega: f64,
    cfg: &LatticeConfig,
    step_override: Option<f64>,
) -> Result<LogicalGateResult> {
    let settings = map_gate_to_drives(spec, delta2, omega, cfg)?;
    let mut sched = single_unit_schedule(cfg, &settings)?;
    if let Some(s) = step_override {
        sched = sched.with_step(s)?;
    }

    let n_series = 200usize;
    let tau = sched.duration();
    let times: Vec<f64> = (0..=n_series).map(|k| tau * k as f64 / n_series as f64).collect();
    let props = propagate_sampled(&sched, &times)?;

    let dim = sched.dim();
    let (i0, i1, ie) = (LogicalEncoding::ZERO_L, LogicalEncoding::ONE_L, LogicalEncoding::E_L);

    let mut init = ndarray::Array1::<C64>::zeros(dim);
    init[i0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    init[i1] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let init = StateVector::new(init)?;
    let mut series = Vec::with_capacity(props.len());
    for (t, u) in &props {
        let psi = init.apply(u)?;
        let mut single = 0.0;
        let mut double = 0.0;
        let mut lvl2 = 0.0;
        for m in 0..dim {
            let p = psi.amplitude(m).norm_sqr();
            let dg = digits(m, 3);
            match excitation_number(&dg) {
                1 => single += p,
                2 => double += p,
                _ => {}
            }
            if dg.contains(&2) {
                lvl2 += p;
            }
        }
        series.push(LeakageSample {
            t: *t,
            pop_single_excitation: single,
            pop_double_excitation: double,
            pop_level2: lvl2,
        });
    }

    let u_final = &props.last().expect("sampled").1;
    let logical = [i0, i1, ie];
    let mut achieved = Operator::zeros(3);
    for (r, ri) in logical.iter().enumerate() {
        for (c, ci) in logical.iter().enumerate() {
            achieved.set(r, c, u_final.get(*ri, *ci));
        }
    }
    let mut max_leakage = 0.0f64;
    for ci in logical {
        let retained: f64 = logical.iter().map(|ri| u_final.get(*ri, ci).norm_sqr()).sum();
        max_leakage = max_leakage.max(1.0 - retained);
    }

    let mut comp = Operator::zeros(2);
    for r in 0..2 {
        for c in 0..2 {
            comp.set(r, c, achieved.get(r, c));
        }
    }
    let computational_fidelity = trace_fidelity(&ideal_gate_operator(spec), &comp)?;

    Ok(LogicalGateResult {
        achieved,
        computational_fidelity,
        max_leakage,
        flagged: max_leakage > 0.10,
        leakage_series: series,
        settings,
    })
}

/// Result of the two-transmon controlled-phase simulation.
#[derive(Clone, Debug)]
pub struct TwoQubitResult {
    /// Achieved operator on (|00>_L, |01>_L, |10>_L, |11>_L, |f>_L).
    pub achieved: Operator,
    /// Trace fidelity of the S_2 block against diag(1, 1, e^{i gamma'}, 1).
    pub fidelity: f64,
    /// Residual phase of the |11>_L state (must return to ~0).
    pub phase_11: f64,
    /// Population left on the auxiliary |f>_L by the |10>_L input.
    pub residual_f_population: f64,
    pub solution: TwoQubitDriveSolution,
}

/// Default modulation index of the two-qubit drive: the first zero of
/// J_0, which silences the static (n = 0) sideband of the parametric
/// coupling.
pub const DEFAULT_BETA3: f64 = 2.404_825_557_695_773;

/// Simulates the parametrically driven T_2-T_3 pair implementing the
/// logical controlled phase gamma'. The drive frequency is
/// nu_3 = Delta_23 - alpha_2 - Delta'_3; the physical drive phase is
/// phi_3(t) = eta' t + pi/2. The returned operator includes the U_2 frame
/// correction (-+ Delta'_3 tau'/2 phases on |10>_L and |f>_L).
pub fn two_qubit_physical(
    cfg: &LatticeConfig,
    gamma: f64,
    delta3: f64,
    beta3: Option<f64>,
    step_override: Option<f64>,
) -> Result<TwoQubitResult> {
    cfg.validate()?;
    if cfg.transmons.len() != 2 {
        return Err(Error::Validation(format!(
            "two-qubit pair needs exactly 2 transmons, got {}",
            cfg.transmons.len()
        )));
    }
    let g23 =
        cfg.coupling(0, 1).ok_or_else(|| Error::Validation("missing coupling g_23".into()))?;
    let d23 = cfg.transmons[0].omega_q - cfg.transmons[1].omega_q;
    let alpha2 = cfg.transmons[0].alpha;
    if delta3.abs() >= d23.abs().min(alpha2) / 10.0 {
        return Err(Error::Capability(format!(
            "detuning Delta'_3 = {delta3} violates |Delta'_3| < min(Delta_23, alpha_2)/10"
        )));
    }
    let beta3 = beta3.unwrap_or(DEFAULT_BETA3);
    let g = 2.0f64.sqrt() * bessel_j1(beta3)? * g23;
    let sol = solve_two_qubit_parameters(gamma, g, delta3)?;
    let nu3 = d23 - alpha2 - delta3;

    let mut driven = cfg.clone();
    driven.drives = vec![
        None,
        Some(ParametricDrive {
            epsilon_d: beta3 * nu3,
            nu: nu3,
            phase_offset: PI / 2.0,
            phase_rate: sol.eta,
        }),
    ];
    let mut sched = diagonal_frame_schedule(driven, vec![0.0, 0.0], sol.tau)?;
    if let Some(s) = step_override {
        sched = sched.with_step(s)?;
    }
    let u_raw = propagate(&sched)?;

    let corr_10 = C64::from_polar(1.0, 0.5 * delta3 * sol.tau);
    let dim = u_raw.dim();
    let mut u = Operator::zeros(dim);
    for r in 0..dim {
        let factor = if r == LogicalEncoding::S2_INDICES[2] {
            corr_10
        } else if r == LogicalEncoding::F_L {
            corr_10.conj()
        } else {
            C64::new(1.0, 0.0)
        };
        for c in 0..dim {
            u.set(r, c, factor * u_raw.get(r, c));
        }
    }

    let rows: Vec<usize> = LogicalEncoding::S2_INDICES
        .iter()
        .copied()
        .chain(std::iter::once(LogicalEncoding::F_L))
        .collect();
    let mut achieved = Operator::zeros(5);
    for (r, ri) in rows.iter().enumerate() {
        for (c, ci) in rows.iter().enumerate() {
            achieved.set(r, c, u.get(*ri, *ci));
        }
    }
    let mut s2 = Operator::zeros(4);
    for r in 0..4 {
        for c in 0..4 {
            s2.set(r, c, achieved.get(r, c));
        }
    }
    let fidelity = trace_fidelity(&two_qubit_gate(gamma)?, &s2)?;
    let phase_11 = achieved.get(3, 3).arg();
    let residual_f_population = achieved.get(4, 2).norm_sqr();

    Ok(TwoQubitResult { achieved, fidelity, phase_11, residual_f_population, solution: sol })
}

/// Encodes an arbitrary qubit-1 state into the logical subspace:
/// a|1>_1 + b|0>_1 (others in ground) -> a|0>_L + b|1>_L, via an ideal
/// NOT on qubit 2 followed by a CNOT (qubit 1 control, qubit 2 target).
pub fn encode_logical(physical: &StateVector) -> Result<StateVector> {
    if physical.dim() != 27 {
        return Err(Error::Dimension(format!(
            "expected the 27-dim single-unit space, got {}",
            physical.dim()
        )));
    }
    let allowed = [0usize, 9];
    let outside: f64 = (0..27)
        .filter(|m| !allowed.contains(m))
        .map(|m| physical.amplitude(m).norm_sqr())
        .sum();
    if outside > 1e-12 {
        return Err(Error::Validation(format!(
            "population {outside:.3e} outside the assumed initial manifold"
        )));
    }
    physical.apply(&encode_unitary())
}

/// Inverse of [`encode_logical`]: a|0>_L + b|1>_L -> (a|1> + b|0>)_1.
pub fn decode_logical(logical: &StateVector) -> Result<StateVector> {
    if logical.dim() != 27 {
        return Err(Error::Dimension(format!(
            "expected the 27-dim single-unit space, got {}",
            logical.dim()
        )));
    }
    let allowed = [LogicalEncoding::ZERO_L, LogicalEncoding::ONE_L];
    let outside: f64 = (0..27)
        .filter(|m| !allowed.contains(m))
        .map(|m| logical.amplitude(m).norm_sqr())
        .sum();
    if outside > 1e-12 {
        return Err(Error::Validation(format!(
            "population {outside:.3e} outside the logical subspace"
        )));
    }
    logical.apply(&encode_unitary().dagger())
}

/// The composite NOT_2 then CNOT_{1->2} unitary on the qubit levels
/// (identity on any |2> component).
fn encode_unitary() -> Operator {
    let mut u = Operator::zeros(27);
    for m in 0..27 {
        let dg = digits(m, 3);
        let mut out = dg.clone();
        if out[2] < 2 {
            out[2] = 1 - out[2];
        }
        if out[0] == 1 && out[2] < 2 {
            out[2] = 1 - out[2];
        }
        u.set(index_of(&out), m, C64::new(1.0, 0.0));
    }
    u
}
