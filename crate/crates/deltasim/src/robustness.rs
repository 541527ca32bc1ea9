//! Systematic-error sweeps and open-system comparisons between the
//! detuned scheme and the two baselines.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::delta::{dressed_basis, effective_hamiltonian, RotatingFrameParams};
use crate::fidelity::{cardinal_gate_fidelity, state_fidelity, trace_fidelity};
use crate::lindblad::{decay_operator, dephasing_operator, lindblad_evolve, lindblad_evolve_sampled};
use crate::operator::Operator;
use crate::propagate::propagate;
use crate::schedule::{default_step, Schedule};
use crate::state::StateVector;
use crate::synthesis::{
    ideal_gate_operator, single_loop_schedule, single_loop_segments, solve_toc_parameters,
    DriveSolution, GateSpec,
};
use crate::{Error, Result};
use num_complex::Complex64 as C64;

/// Systematic-error offsets: the qubit-frequency drift enters as
/// Delta' = Delta_2 + delta Omega, the coupling deviation as
/// Omega' = (1 + epsilon) Omega.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct ErrorParams {
    pub delta: f64,
    pub epsilon: f64,
}

/// Decoherence rates in units of the drive amplitude.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct NoiseModel {
    pub gamma_minus: f64,
    pub gamma_z: f64,
}

impl NoiseModel {
    pub fn new(gamma_minus: f64, gamma_z: f64) -> Result<Self> {
        if gamma_minus < 0.0 || gamma_z < 0.0 {
            return Err(Error::Validation(format!(
                "rates must be nonnegative, got ({gamma_minus}, {gamma_z})"
            )));
        }
        Ok(Self { gamma_minus, gamma_z })
    }

    /// Gamma_- = Gamma_z = kappa.
    pub fn uniform(kappa: f64) -> Result<Self> {
        Self::new(kappa, kappa)
    }
}

/// Scheme selector for the comparisons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scheme {
    /// Detuned time-optimal scheme at the given Delta_2 / Omega.
    Ours { delta2_over_omega: f64 },
    /// Resonant time-optimal scheme (Delta_2 = 0).
    TocBaseline,
    /// Conventional single-loop construction (duration tau_c).
    SingleLoop,
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::Ours { .. } => "ours",
            Scheme::TocBaseline => "toc_baseline",
            Scheme::SingleLoop => "single_loop",
        }
    }

    /// Gate duration in units where Omega = 1.
    pub fn duration(&self, spec: &GateSpec) -> Result<f64> {
        match self {
            Scheme::Ours { delta2_over_omega } => {
                Ok(solve_toc_parameters(spec.gamma, *delta2_over_omega, 1.0)?.tau)
            }
            Scheme::TocBaseline => Ok(solve_toc_parameters(spec.gamma, 0.0, 1.0)?.tau),
            Scheme::SingleLoop => Ok(2.0 * PI),
        }
    }

    /// Three-level rotating-frame schedule (Omega = 1 units).
    pub fn rotating_schedule(&self, spec: &GateSpec) -> Result<Schedule> {
        match self {
            Scheme::Ours { delta2_over_omega } => {
                solve_toc_parameters(spec.gamma, *delta2_over_omega, 1.0)?.rotating_schedule(spec)
            }
            Scheme::TocBaseline => {
                solve_toc_parameters(spec.gamma, 0.0, 1.0)?.rotating_schedule(spec)
            }
            Scheme::SingleLoop => single_loop_schedule(spec, 1.0),
        }
    }
}

/// The perturbed effective Hamiltonian on (bright, auxiliary):
/// -(Delta'/2)(|b><b| - |2><2|) + (Omega'/2)(e^{-i phi_1(t)}|b><2| + h.c.)
/// with Delta' = Delta_2 + delta Omega, Omega' = (1 + epsilon) Omega and
/// the drive phase phi_1(t) = eta t left untouched.
pub fn perturbed_effective_hamiltonian(
    sol: &DriveSolution,
    err: &ErrorParams,
    t: f64,
) -> Operator {
    let params = RotatingFrameParams::new(
        (1.0 + err.epsilon) * sol.omega,
        PI / 2.0,
        0.0,
        sol.delta2 + err.delta * sol.omega,
        sol.eta,
        0.0,
    )
    .expect("perturbed parameters stay in domain");
    effective_hamiltonian(&params, t)
}

/// Effective two-level schedule of the perturbed pulse, over the nominal
/// (unperturbed) duration.
pub fn perturbed_effective_schedule(sol: &DriveSolution, err: ErrorParams) -> Result<Schedule> {
    let sol = *sol;
    let omega_ref = sol.omega.abs().max(sol.eta.abs()).max(sol.delta2.abs()).max(1e-12);
    let step = default_step(sol.tau, omega_ref);
    Schedule::new(sol.tau, step, 2, move |t| perturbed_effective_hamiltonian(&sol, &err, t))
}

/// Perturbed single-loop schedule: the same error pattern with
/// Delta_2 = 0, i.e. a diagonal drift delta*Omega plus coupling scale
/// (1 + epsilon) in both pi-area segments.
pub fn perturbed_single_loop_schedule(
    spec: &GateSpec,
    omega: f64,
    err: ErrorParams,
) -> Result<Schedule> {
    let [first, second] = single_loop_segments(spec, omega)?;
    let tau_c = 2.0 * PI / omega;
    let step = default_step(tau_c, omega);
    let perturb = move |params: &RotatingFrameParams, t: f64| {
        let mut h = Operator::zeros(2);
        let dl = err.delta * omega;
        h.set(0, 0, C64::new(-0.5 * dl, 0.0));
        h.set(1, 1, C64::new(0.5 * dl, 0.0));
        let c = C64::from_polar(0.5 * (1.0 + err.epsilon) * omega, -params.phi1(t));
        h.set(0, 1, c);
        h.set(1, 0, c.conj());
        h
    };
    Schedule::new(tau_c, step, 2, move |t| {
        if t < 0.5 * tau_c {
            perturb(&first, t)
        } else {
            perturb(&second, t)
        }
    })?
    .with_breakpoints(vec![0.5 * tau_c])
}

/// Achieved computational-subspace gate of a perturbed run: the effective
/// (bright, auxiliary) propagator folded back through the dressed basis,
/// with the dark state untouched.
pub fn computational_gate_from_effective(
    u_eff: &Operator,
    theta: f64,
    phi: f64,
) -> Result<Operator> {
    let basis = dressed_basis(theta, phi)?;
    let b = basis.bright;
    let ubb = u_eff.get(0, 0);
    let mut out = Operator::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            let bb = b.amplitude(i) * b.amplitude(j).conj();
            let dd = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) } - bb;
            out.set(i, j, ubb * bb + dd);
        }
    }
    Ok(out)
}

/// Gate fidelity of one scheme at one error cell (Omega = 1 units).
pub fn scheme_fidelity(scheme: &Scheme, spec: &GateSpec, err: ErrorParams) -> Result<f64> {
    let u_eff = match scheme {
        Scheme::Ours { delta2_over_omega } => {
            let sol = solve_toc_parameters(spec.gamma, *delta2_over_omega, 1.0)?;
            propagate(&perturbed_effective_schedule(&sol, err)?)?
        }
        Scheme::TocBaseline => {
            let sol = solve_toc_parameters(spec.gamma, 0.0, 1.0)?;
            propagate(&perturbed_effective_schedule(&sol, err)?)?
        }
        Scheme::SingleLoop => propagate(&perturbed_single_loop_schedule(spec, 1.0, err)?)?,
    };
    let achieved = computational_gate_from_effective(&u_eff, spec.theta, spec.phi)?;
    trace_fidelity(&ideal_gate_operator(spec), &achieved)
}

/// One sweep cell: fidelities of the three schemes at a grid point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepCell {
    pub delta: f64,
    pub epsilon: f64,
    pub kappa: f64,
    pub f_ours: f64,
    pub f_toc: f64,
    pub f_single_loop: f64,
}

impl SweepCell {
    pub fn diff_vs_single_loop(&self) -> f64 {
        self.f_ours - self.f_single_loop
    }

    pub fn diff_vs_toc(&self) -> f64 {
        self.f_ours - self.f_toc
    }
}

/// Result of a sweep: the axes plus one cell per grid point, ordered by
/// cell index.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub gate: GateSpec,
    pub delta2_over_omega: f64,
    pub delta_axis: Vec<f64>,
    pub epsilon_axis: Vec<f64>,
    pub kappa_axis: Vec<f64>,
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    fn validate(self) -> Result<Self> {
        for c in &self.cells {
            for f in [c.f_ours, c.f_toc, c.f_single_loop] {
                if !((-1e-9..=1.0 + 1e-9).contains(&f)) {
                    return Err(Error::Integration(format!("fidelity {f} outside [0, 1]")));
                }
            }
        }
        Ok(self)
    }

    pub fn mean_diff_vs_single_loop(&self) -> f64 {
        self.cells.iter().map(SweepCell::diff_vs_single_loop).sum::<f64>()
            / self.cells.len() as f64
    }

    pub fn mean_diff_vs_toc(&self) -> f64 {
        self.cells.iter().map(SweepCell::diff_vs_toc).sum::<f64>() / self.cells.len() as f64
    }

    pub fn min_diff_vs_single_loop(&self) -> f64 {
        self.cells.iter().map(SweepCell::diff_vs_single_loop).fold(f64::INFINITY, f64::min)
    }
}

/// Uniform grid helper.
pub fn linspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![0.5 * (min + max)];
    }
    (0..points)
        .map(|k| min + (max - min) * k as f64 / (points - 1) as f64)
        .collect()
}

/// Systematic-error sweep of all three schemes over the given grids. When
/// `joint` is false, only the two axes (epsilon = 0 and delta = 0 lines)
/// are evaluated; when true, the full outer product.
pub fn robustness_grid(
    spec: &GateSpec,
    delta2_over_omega: f64,
    delta_grid: &[f64],
    epsilon_grid: &[f64],
    joint: bool,
) -> Result<SweepResult> {
    if delta_grid.is_empty() || epsilon_grid.is_empty() {
        return Err(Error::Validation("error grids must be nonempty".into()));
    }
    let mut points: Vec<(f64, f64)> = Vec::new();
    if joint {
        for d in delta_grid {
            for e in epsilon_grid {
                points.push((*d, *e));
            }
        }
    } else {
        points.extend(delta_grid.iter().map(|d| (*d, 0.0)));
        points.extend(epsilon_grid.iter().map(|e| (0.0, *e)));
    }
    let ours = Scheme::Ours { delta2_over_omega };
    let cells: Result<Vec<SweepCell>> = points
        .par_iter()
        .map(|(d, e)| {
            let err = ErrorParams { delta: *d, epsilon: *e };
            Ok(SweepCell {
                delta: *d,
                epsilon: *e,
                kappa: 0.0,
                f_ours: scheme_fidelity(&ours, spec, err)?,
                f_toc: scheme_fidelity(&Scheme::TocBaseline, spec, err)?,
                f_single_loop: scheme_fidelity(&Scheme::SingleLoop, spec, err)?,
            })
        })
        .collect();
    SweepResult {
        gate: *spec,
        delta2_over_omega,
        delta_axis: delta_grid.to_vec(),
        epsilon_axis: epsilon_grid.to_vec(),
        kappa_axis: vec![],
        cells: cells?,
    }
    .validate()
}

/// The two reference gates of the state-fidelity decoherence runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoherenceGate {
    /// R_x(pi/2) from |0>.
    RxHalfPi,
    /// R_z(pi/2) from (|0> + |1>)/sqrt(2).
    RzHalfPi,
}

impl DecoherenceGate {
    pub fn spec(&self) -> GateSpec {
        match self {
            DecoherenceGate::RxHalfPi => GateSpec::rx(PI / 2.0).expect("valid preset"),
            DecoherenceGate::RzHalfPi => GateSpec::rz(PI / 2.0).expect("valid preset"),
        }
    }

    pub fn initial_state(&self) -> StateVector {
        match self {
            DecoherenceGate::RxHalfPi => StateVector::basis(3, 0),
            DecoherenceGate::RzHalfPi => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                StateVector::new(ndarray::array![
                    C64::new(r, 0.0),
                    C64::new(r, 0.0),
                    C64::new(0.0, 0.0)
                ])
                .expect("normalized")
            }
        }
    }

    /// Ideal final state (three-level embedding).
    pub fn target_state(&self) -> StateVector {
        let spec = self.spec();
        let g = ideal_gate_operator(&spec);
        let init = self.initial_state();
        let comp = StateVector::normalized(ndarray::array![
            init.amplitude(0),
            init.amplitude(1)
        ])
        .expect("computational part");
        comp.apply(&g).expect("2-dim").embedded(3).expect("embed")
    }
}

/// One sampled point of a state-fidelity trace.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StateRunSample {
    pub t: f64,
    pub pop0: f64,
    pub pop1: f64,
    pub pop2: f64,
    pub fidelity: f64,
}

/// Population and fidelity dynamics of one decoherence run.
#[derive(Clone, Debug)]
pub struct StateRunResult {
    pub samples: Vec<StateRunSample>,
    pub final_fidelity: f64,
}

/// Lindblad run of the rotating-frame schedule for the given gate,
/// returning the sampled populations, the instantaneous fidelity against
/// the ideal final state, and the final state fidelity.
pub fn decoherence_state_run(
    gate: DecoherenceGate,
    delta2_over_omega: f64,
    kappa: f64,
    n_samples: usize,
) -> Result<StateRunResult> {
    let noise = NoiseModel::uniform(kappa)?;
    let spec = gate.spec();
    let sol = solve_toc_parameters(spec.gamma, delta2_over_omega, 1.0)?;
    let sched = sol.rotating_schedule(&spec)?;
    let rho0 = gate.initial_state().density();
    let snapshots = lindblad_evolve_sampled(
        &sched,
        &[decay_operator(), dephasing_operator()],
        &[noise.gamma_minus, noise.gamma_z],
        &rho0,
        n_samples.max(1),
    )?;
    let target = gate.target_state();
    let mut samples = Vec::with_capacity(snapshots.len());
    for (t, rho) in &snapshots {
        samples.push(StateRunSample {
            t: *t,
            pop0: rho.population(0),
            pop1: rho.population(1),
            pop2: rho.population(2),
            fidelity: state_fidelity(rho, &target)?,
        });
    }
    let final_fidelity = samples.last().expect("nonempty").fidelity;
    Ok(StateRunResult { samples, final_fidelity })
}

/// Lindblad channel of one scheme at one decoherence rate: maps a
/// computational-subspace input to the evolved three-level density matrix.
pub fn lindblad_channel(
    scheme: &Scheme,
    spec: &GateSpec,
    noise: &NoiseModel,
    input: &StateVector,
) -> Result<crate::state::DensityMatrix> {
    let sched = scheme.rotating_schedule(spec)?;
    let rho0 = input.embedded(3)?.density();
    lindblad_evolve(
        &sched,
        &[decay_operator(), dephasing_operator()],
        &[noise.gamma_minus, noise.gamma_z],
        &rho0,
    )
}

/// Cardinal-state gate fidelity F^G of one scheme under decoherence.
pub fn scheme_gate_fidelity(scheme: &Scheme, spec: &GateSpec, kappa: f64) -> Result<f64> {
    let noise = NoiseModel::uniform(kappa)?;
    cardinal_gate_fidelity(&ideal_gate_operator(spec), |psi| {
        lindblad_channel(scheme, spec, &noise, psi)
    })
}

/// F^G per scheme across a grid of decoherence rates.
pub fn decoherence_gate_curve(
    spec: &GateSpec,
    delta2_over_omega: f64,
    kappa_grid: &[f64],
) -> Result<SweepResult> {
    for k in kappa_grid {
        if *k < 0.0 {
            return Err(Error::Validation(format!("kappa must be nonnegative, got {k}")));
        }
    }
    let ours = Scheme::Ours { delta2_over_omega };
    let cells: Result<Vec<SweepCell>> = kappa_grid
        .par_iter()
        .map(|kappa| {
            Ok(SweepCell {
                delta: 0.0,
                epsilon: 0.0,
                kappa: *kappa,
                f_ours: scheme_gate_fidelity(&ours, spec, *kappa)?,
                f_toc: scheme_gate_fidelity(&Scheme::TocBaseline, spec, *kappa)?,
                f_single_loop: scheme_gate_fidelity(&Scheme::SingleLoop, spec, *kappa)?,
            })
        })
        .collect();
    SweepResult {
        gate: *spec,
        delta2_over_omega,
        delta_axis: vec![],
        epsilon_axis: vec![],
        kappa_axis: kappa_grid.to_vec(),
        cells: cells?,
    }
    .validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perturbed_hamiltonian_limits() {
        let sol = solve_toc_parameters(PI / 2.0, -0.5, 1.0).unwrap();
        // delta = epsilon = 0 reduces to the nominal effective Hamiltonian
        let h0 = perturbed_effective_hamiltonian(&sol, &ErrorParams::default(), 0.37);
        let nominal = effective_hamiltonian(&sol.rotating_params(PI / 2.0, 0.0).unwrap(), 0.37);
        assert!(h0.max_abs_diff(&nominal) < 1e-14);

        // epsilon = -1 kills the coupling
        let h = perturbed_effective_hamiltonian(
            &sol,
            &ErrorParams { delta: 0.0, epsilon: -1.0 },
            0.1,
        );
        assert!(h.get(0, 1).norm() < 1e-15);

        // delta = 0.1 at Delta_2 = -1/2: diagonal becomes -(-0.4)/2 = +0.2
        let h = perturbed_effective_hamiltonian(
            &sol,
            &ErrorParams { delta: 0.1, epsilon: 0.0 },
            0.0,
        );
        assert!((h.get(0, 0).re - 0.2).abs() < 1e-14);
        assert!((h.get(1, 1).re + 0.2).abs() < 1e-14);
    }

    #[test]
    fn zero_error_cell_is_exact_for_all_schemes() {
        let spec = GateSpec::rx(PI / 2.0).unwrap();
        for scheme in [
            Scheme::Ours { delta2_over_omega: -0.5 },
            Scheme::TocBaseline,
            Scheme::SingleLoop,
        ] {
            let f = scheme_fidelity(&scheme, &spec, ErrorParams::default()).unwrap();
            assert!(
                (f - 1.0).abs() < 1e-9,
                "{} fidelity at zero error: {f}",
                scheme.label()
            );
        }
    }

    #[test]
    fn rx_ry_grids_agree_and_rz_matches_on_delta_axis() {
        let axis = linspace(-0.1, 0.1, 9);
        let rx = robustness_grid(&GateSpec::rx(PI / 2.0).unwrap(), -0.5, &axis, &axis, false)
            .unwrap();
        let ry = robustness_grid(&GateSpec::ry(PI / 2.0).unwrap(), -0.5, &axis, &axis, false)
            .unwrap();
        let rz = robustness_grid(&GateSpec::rz(PI / 2.0).unwrap(), -0.5, &axis, &axis, false)
            .unwrap();
        for ((a, b), c) in rx.cells.iter().zip(ry.cells.iter()).zip(rz.cells.iter()) {
            assert!((a.f_ours - b.f_ours).abs() < 1e-10);
            assert!((a.f_toc - b.f_toc).abs() < 1e-10);
            assert!((a.f_single_loop - b.f_single_loop).abs() < 1e-10);
            if a.epsilon == 0.0 {
                assert!((a.f_ours - c.f_ours).abs() < 1e-10);
                assert!((a.f_single_loop - c.f_single_loop).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn kappa_zero_gives_unit_gate_fidelity() {
        let spec = GateSpec::rx(PI / 2.0).unwrap();
        for scheme in [
            Scheme::Ours { delta2_over_omega: -0.5 },
            Scheme::TocBaseline,
            Scheme::SingleLoop,
        ] {
            let f = scheme_gate_fidelity(&scheme, &spec, 0.0).unwrap();
            assert!((f - 1.0).abs() < 1e-8, "{}: {f}", scheme.label());
        }
    }

    #[test]
    fn state_run_noiseless_fidelity_is_unity() {
        for gate in [DecoherenceGate::RxHalfPi, DecoherenceGate::RzHalfPi] {
            let run = decoherence_state_run(gate, -0.5, 0.0, 8).unwrap();
            assert!((run.final_fidelity - 1.0).abs() < 1e-8);
            for s in &run.samples {
                assert!(s.fidelity >= -1e-9 && s.fidelity <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn negative_kappa_rejected() {
        assert!(decoherence_state_run(DecoherenceGate::RxHalfPi, -0.5, -1e-4, 4).is_err());
    }
}
