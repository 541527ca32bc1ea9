//! The detuned Delta-type three-level model at lab-frame, rotating-frame
//! and dressed-state levels.

use ndarray::array;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::operator::Operator;
use crate::propagate::propagate_sampled;
use crate::schedule::{default_step, Schedule};
use crate::state::StateVector;
use crate::{Error, Result};

/// Wraps an angle to (-pi, pi].
pub fn wrap_angle(phi: f64) -> f64 {
    let mut x = phi.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// Rotating-frame drive parameters (all rates in units of a reference
/// angular frequency). The derived amplitudes follow the bright/dark
/// parametrization: Omega_0 = Omega sin(theta/2), Omega_1 = Omega
/// cos(theta/2), Omega_2 = -Delta_2 sin(theta/2) cos(theta/2), with
/// diagonal detunings Delta_0 = -Delta_2 sin^2(theta/2) and Delta_1 =
/// -Delta_2 cos^2(theta/2). The |0><1| drive phase phi = phi_0 - phi_1 is
/// held constant over a gate; phi_1(t) = phi1_offset + eta t.
#[derive(Clone, Copy, Debug)]
pub struct RotatingFrameParams {
    pub omega: f64,
    pub theta: f64,
    pub phi: f64,
    pub delta2: f64,
    pub eta: f64,
    pub phi1_offset: f64,
}

impl RotatingFrameParams {
    pub fn new(omega: f64, theta: f64, phi: f64, delta2: f64, eta: f64, phi1_offset: f64) -> Result<Self> {
        if omega < 0.0 {
            return Err(Error::Validation(format!("omega must be >= 0, got {omega}")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Validation(format!("theta must lie in [0, pi], got {theta}")));
        }
        Ok(Self { omega, theta, phi: wrap_angle(phi), delta2, eta, phi1_offset })
    }

    pub fn phi1(&self, t: f64) -> f64 {
        self.phi1_offset + self.eta * t
    }

    /// phi_0(t) = phi + phi_1(t).
    pub fn phi0(&self, t: f64) -> f64 {
        self.phi + self.phi1(t)
    }

    pub fn amplitudes(&self) -> (f64, f64, f64) {
        let s = (self.theta / 2.0).sin();
        let c = (self.theta / 2.0).cos();
        (self.omega * s, self.omega * c, -self.delta2 * s * c)
    }

    pub fn detunings(&self) -> (f64, f64, f64) {
        let s2 = (self.theta / 2.0).sin().powi(2);
        let c2 = (self.theta / 2.0).cos().powi(2);
        (-self.delta2 * s2, -self.delta2 * c2, self.delta2)
    }

    /// Largest energy scale, used for step selection.
    pub fn omega_ref(&self) -> f64 {
        self.omega
            .abs()
            .max(self.delta2.abs())
            .max(self.eta.abs())
            .max((self.eta + self.delta2).abs())
            .max(1e-12)
    }
}

/// The orthonormal bright/dark/auxiliary triple.
#[derive(Clone, Debug)]
pub struct DressedBasis {
    pub bright: StateVector,
    pub dark: StateVector,
    pub auxiliary: StateVector,
}

/// bright = sin(theta/2) e^{-i phi}|0> + cos(theta/2)|1>,
/// dark = cos(theta/2)|0> - sin(theta/2) e^{i phi}|1>, auxiliary = |2>.
pub fn dressed_basis(theta: f64, phi: f64) -> Result<DressedBasis> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Validation(format!("theta must lie in [0, pi], got {theta}")));
    }
    let s = (theta / 2.0).sin();
    let c = (theta / 2.0).cos();
    let z = C64::new(0.0, 0.0);
    let bright = StateVector::new(array![C64::from_polar(s, -phi), C64::new(c, 0.0), z])?;
    let dark = StateVector::new(array![C64::new(c, 0.0), -C64::from_polar(s, phi), z])?;
    Ok(DressedBasis { bright, dark, auxiliary: StateVector::basis(3, 2) })
}

/// The rotating-frame three-level Hamiltonian, basis (|0>, |1>, |2>):
/// (1/2) sum Delta_n |n><n| + (1/2){Omega_0 e^{i phi_0}|2><0| +
/// Omega_1 e^{i phi_1}|2><1| + Omega_2 e^{i phi_2}|1><0| + h.c.}.
pub fn rotating_frame_hamiltonian(params: &RotatingFrameParams, t: f64) -> Operator {
    let (om0, om1, om2) = params.amplitudes();
    let (d0, d1, d2) = params.detunings();
    let p0 = params.phi0(t);
    let p1 = params.phi1(t);
    let p2 = params.phi;
    let mut h = Operator::zeros(3);
    h.set(0, 0, C64::new(0.5 * d0, 0.0));
    h.set(1, 1, C64::new(0.5 * d1, 0.0));
    h.set(2, 2, C64::new(0.5 * d2, 0.0));
    let c20 = C64::from_polar(1.0, p0) * (0.5 * om0);
    let c21 = C64::from_polar(1.0, p1) * (0.5 * om1);
    let c10 = C64::from_polar(1.0, p2) * (0.5 * om2);
    h.set(2, 0, c20);
    h.set(0, 2, c20.conj());
    h.set(2, 1, c21);
    h.set(1, 2, c21.conj());
    h.set(1, 0, c10);
    h.set(0, 1, c10.conj());
    h
}

/// Schedule wrapping the rotating-frame Hamiltonian over `[0, tau]`.
pub fn rotating_frame_schedule(params: RotatingFrameParams, tau: f64) -> Result<Schedule> {
    let step = default_step(tau, params.omega_ref());
    Schedule::new(tau, step, 3, move |t| rotating_frame_hamiltonian(&params, t))
}

/// The effective two-level Hamiltonian on (bright, auxiliary):
/// -(Delta_2/2)(|b><b| - |2><2|) + (Omega/2)(e^{-i phi_1(t)}|b><2| + h.c.).
pub fn effective_hamiltonian(params: &RotatingFrameParams, t: f64) -> Operator {
    let p1 = params.phi1(t);
    let mut h = Operator::zeros(2);
    h.set(0, 0, C64::new(-0.5 * params.delta2, 0.0));
    h.set(1, 1, C64::new(0.5 * params.delta2, 0.0));
    let cb2 = C64::from_polar(0.5 * params.omega, -p1);
    h.set(0, 1, cb2);
    h.set(1, 0, cb2.conj());
    h
}

/// Schedule for the effective two-level model over `[0, tau]`.
pub fn effective_schedule(params: RotatingFrameParams, tau: f64) -> Result<Schedule> {
    let step = default_step(tau, params.omega_ref());
    Schedule::new(tau, step, 2, move |t| effective_hamiltonian(&params, t))
}

/// TOC constraint residuals evaluated on the constructed coupling part:
/// l1 = (1/2)[Tr(H_c^2) - Omega^2/2], l2 = Tr(H_c sigma_z).
pub fn toc_constraint_residuals(params: &RotatingFrameParams, t: f64) -> (f64, f64) {
    let h = effective_hamiltonian(params, t);
    let mut hc = h.clone();
    hc.set(0, 0, C64::new(0.0, 0.0));
    hc.set(1, 1, C64::new(0.0, 0.0));
    residuals_of_coupling(&hc, params.omega)
}

/// Residuals for an arbitrary coupling operator on (bright, auxiliary).
pub fn residuals_of_coupling(h_c: &Operator, omega: f64) -> (f64, f64) {
    let tr_sq = h_c.mul(h_c).trace().re;
    let l1 = 0.5 * (tr_sq - 0.5 * omega * omega);
    let l2 = h_c.get(0, 0).re - h_c.get(1, 1).re;
    (l1, l2)
}

/// Lab-frame configuration: level energies, drive amplitudes, carriers and
/// phase ramps. The drive on transition i is Omega_i cos(upsilon_i t -
/// phi_i(t)), with phi_0(t) = offset_0 + eta t, phi_1(t) = offset_1 + eta t
/// and phi_2 constant so that phi_0 - phi_1 stays fixed over the gate.
#[derive(Clone, Debug)]
pub struct LabFrameConfig {
    pub level_energies: [f64; 3],
    pub drive_amplitudes: [f64; 3],
    pub drive_frequencies: [f64; 3],
    pub phase_offsets: [f64; 3],
    pub eta: f64,
}

impl LabFrameConfig {
    pub fn new(
        level_energies: [f64; 3],
        drive_amplitudes: [f64; 3],
        drive_frequencies: [f64; 3],
        phase_offsets: [f64; 3],
        eta: f64,
    ) -> Result<Self> {
        let [u0, u1, u2] = drive_frequencies;
        let scale = u0.abs().max(u1.abs()).max(u2.abs()).max(1.0);
        if (u0 - u1 - u2).abs() > 1e-9 * scale {
            return Err(Error::Validation(format!(
                "frequency matching violated: upsilon_0 ({u0}) != upsilon_1 + upsilon_2 ({})",
                u1 + u2
            )));
        }
        Ok(Self { level_energies, drive_amplitudes, drive_frequencies, phase_offsets, eta })
    }

    /// Default carrier scale: upsilon_1 = 200 Omega, upsilon_2 = 120 Omega,
    /// with frame energies chosen so the rotating-frame detunings come out
    /// as in the dressed parametrization.
    pub fn from_rotating(params: &RotatingFrameParams) -> Result<Self> {
        let omega = params.omega;
        let u1 = 200.0 * omega;
        let u2 = 120.0 * omega;
        let u0 = u1 + u2;
        // gauge omega'_0 = 0: omega'_1 = u2, omega'_2 = u0
        let (d0, d1, d2) = params.detunings();
        let w0 = 0.5 * d0;
        let w1 = u2 + 0.5 * d1;
        let w2 = u0 + 0.5 * d2;
        let (om0, om1, om2) = params.amplitudes();
        Self::new(
            [w0, w1, w2],
            [om0, om1, om2],
            [u0, u1, u2],
            [params.phi + params.phi1_offset, params.phi1_offset, params.phi],
            params.eta,
        )
    }

    pub fn phase(&self, i: usize, t: f64) -> f64 {
        match i {
            0 | 1 => self.phase_offsets[i] + self.eta * t,
            _ => self.phase_offsets[2],
        }
    }

    /// Largest energy scale (level energies dominate at the default
    /// carrier choice).
    pub fn omega_ref(&self) -> f64 {
        let mut m = 0.0f64;
        for v in self.level_energies.iter().chain(self.drive_frequencies.iter()) {
            m = m.max(v.abs());
        }
        for v in self.drive_amplitudes.iter() {
            m = m.max(v.abs());
        }
        m.max(1e-12)
    }

    /// The frame transformation U_0(t) = exp(-i sum omega'_n |n><n| t) that
    /// connects lab and rotating frames (gauge omega'_0 = 0).
    pub fn frame_transformation(&self, t: f64) -> Operator {
        let u0 = self.drive_frequencies[0];
        let u2 = self.drive_frequencies[2];
        let mut m = Operator::zeros(3);
        m.set(0, 0, C64::new(1.0, 0.0));
        m.set(1, 1, C64::from_polar(1.0, -u2 * t));
        m.set(2, 2, C64::from_polar(1.0, -u0 * t));
        m
    }
}

/// The lab-frame Hamiltonian of the driven three-level system:
/// sum omega_n |n><n| + {Omega_0 cos(upsilon_0 t - phi_0)|2><0| + ...}.
pub fn lab_frame_hamiltonian(config: &LabFrameConfig, t: f64) -> Operator {
    let mut h = Operator::zeros(3);
    for n in 0..3 {
        h.set(n, n, C64::new(config.level_energies[n], 0.0));
    }
    let drives = [
        (2usize, 0usize, 0usize),
        (2, 1, 1),
        (1, 0, 2),
    ];
    for (row, col, i) in drives {
        let amp = config.drive_amplitudes[i]
            * (config.drive_frequencies[i] * t - config.phase(i, t)).cos();
        let v = C64::new(amp, 0.0);
        h.set(row, col, h.get(row, col) + v);
        h.set(col, row, h.get(col, row) + v.conj());
    }
    h
}

/// Schedule wrapping the lab-frame Hamiltonian over `[0, tau]`. The
/// carrier branch of the step heuristic already oversamples the fastest
/// oscillation by ~3000x per period, so the few-level refinement factor
/// is not applied here.
pub fn lab_frame_schedule(config: LabFrameConfig, tau: f64) -> Result<Schedule> {
    let step = default_step(tau, config.omega_ref()) * crate::schedule::STEP_REFINEMENT;
    Schedule::new(tau, step.min(tau / 2000.0), 3, move |t| lab_frame_hamiltonian(&config, t))
}

/// One Bloch-trajectory sample. Coordinates are the renormalized
/// computational-subspace projection; `leakage` is the population outside
/// {|0>, |1>}; `flagged` marks samples where the projection norm fell
/// below 1e-6 and the coordinates are unreliable.
#[derive(Clone, Copy, Debug)]
pub struct BlochSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub leakage: f64,
    pub flagged: bool,
}

/// Bloch coordinates of the evolving state at `samples` uniformly spaced
/// times (t = 0 included).
pub fn bloch_trajectory(
    schedule: &Schedule,
    initial: &StateVector,
    samples: usize,
) -> Result<Vec<BlochSample>> {
    if schedule.dim() != 3 {
        return Err(Error::Dimension(format!(
            "bloch trajectory needs a 3-level schedule, got dim {}",
            schedule.dim()
        )));
    }
    if initial.dim() != 3 {
        return Err(Error::Dimension("initial state must be 3-dim".into()));
    }
    if samples < 2 {
        return Err(Error::Validation("need at least two samples".into()));
    }
    let tau = schedule.duration();
    let times: Vec<f64> = (0..samples).map(|k| tau * k as f64 / (samples - 1) as f64).collect();
    let props = propagate_sampled(schedule, &times)?;
    let mut out = Vec::with_capacity(samples);
    for (t, u) in props {
        let psi = initial.apply(&u)?;
        let c0 = psi.amplitude(0);
        let c1 = psi.amplitude(1);
        let p = c0.norm_sqr() + c1.norm_sqr();
        let leakage = 1.0 - p;
        let flagged = p < 1e-6;
        let (x, y, z) = if flagged {
            (0.0, 0.0, 0.0)
        } else {
            let cross = c0.conj() * c1;
            (2.0 * cross.re / p, 2.0 * cross.im / p, (c0.norm_sqr() - c1.norm_sqr()) / p)
        };
        out.push(BlochSample { t, x, y, z, leakage, flagged });
    }
    Ok(out)
}

/// Summed chord length of a trajectory, ignoring flagged points.
pub fn path_length(samples: &[BlochSample]) -> f64 {
    let pts: Vec<&BlochSample> = samples.iter().filter(|s| !s.flagged).collect();
    pts.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            ((a.x - b.x).powi(2) + (a.y - b.y).powi(2) + (a.z - b.z).powi(2)).sqrt()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::HERMITIAN_TOL;

    #[test]
    fn dressed_basis_poles() {
        let b = dressed_basis(0.0, 0.3).unwrap();
        assert!((b.bright.amplitude(1).re - 1.0).abs() < 1e-14);
        assert!((b.dark.amplitude(0).re - 1.0).abs() < 1e-14);

        let b = dressed_basis(PI, 0.7).unwrap();
        assert!((b.bright.amplitude(0) - C64::from_polar(1.0, -0.7)).norm() < 1e-14);
        assert!((b.dark.amplitude(1) + C64::from_polar(1.0, 0.7)).norm() < 1e-14);
        assert!(b.bright.inner(&b.dark).norm() < 1e-14);
    }

    #[test]
    fn dressed_basis_midpoint() {
        // theta = pi/2, phi = pi/2: bright = (-i|0> + |1>)/sqrt(2)
        let b = dressed_basis(PI / 2.0, PI / 2.0).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((b.bright.amplitude(0) - C64::new(0.0, -r)).norm() < 1e-14);
        assert!((b.bright.amplitude(1) - C64::new(r, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rotating_frame_reduces_to_lambda_at_zero_detuning() {
        let p = RotatingFrameParams::new(1.0, PI / 2.0, 0.4, 0.0, 0.0, 0.0).unwrap();
        let h = rotating_frame_hamiltonian(&p, 0.3);
        for n in 0..3 {
            assert!(h.get(n, n).norm() < 1e-15);
        }
        assert!(h.get(1, 0).norm() < 1e-15, "ground-ground coupling must vanish");
        assert!(h.get(2, 0).norm() > 0.1);
    }

    #[test]
    fn rotating_frame_theta_zero_pole() {
        let p = RotatingFrameParams::new(1.0, 0.0, 0.0, -0.5, 0.0, 0.0).unwrap();
        let h = rotating_frame_hamiltonian(&p, 0.0);
        assert!(h.get(2, 0).norm() < 1e-15);
        assert!(h.get(1, 0).norm() < 1e-15);
        assert!(h.get(0, 0).norm() < 1e-15);
        assert!((h.get(2, 1).norm() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dark_state_decoupling_along_schedule() {
        let p = RotatingFrameParams::new(1.0, 1.1, -0.8, -0.5, -0.3, 0.2).unwrap();
        let basis = dressed_basis(p.theta, p.phi).unwrap();
        for k in 0..25 {
            let t = 0.37 * k as f64;
            let h = rotating_frame_hamiltonian(&p, t);
            assert!(h.is_hermitian(HERMITIAN_TOL));
            let hd = basis.dark.apply(&h).unwrap();
            // literal checks: <b|H|d> and <2|H|d>
            let hb = basis.bright.inner(&hd);
            let h2 = basis.auxiliary.inner(&hd);
            assert!(hb.norm() < 1e-12, "bright-dark coupling {}", hb.norm());
            assert!(h2.norm() < 1e-12, "aux-dark coupling {}", h2.norm());
        }
    }

    #[test]
    fn effective_matches_rotating_in_dressed_basis() {
        let p = RotatingFrameParams::new(1.0, PI / 2.0, PI, -0.5, -0.7, 0.1).unwrap();
        let basis = dressed_basis(p.theta, p.phi).unwrap();
        for k in 0..10 {
            let t = 0.23 * k as f64;
            let h3 = rotating_frame_hamiltonian(&p, t);
            let h2 = effective_hamiltonian(&p, t);
            // conjugate the 3-level H into (b, d, 2)
            let states = [&basis.bright, &basis.dark, &basis.auxiliary];
            for (i, si) in states.iter().enumerate() {
                for (j, sj) in states.iter().enumerate() {
                    let elem = si.inner(&sj.apply(&h3).unwrap());
                    let expected = match (i, j) {
                        (0, 0) => h2.get(0, 0),
                        (0, 2) => h2.get(0, 1),
                        (2, 0) => h2.get(1, 0),
                        (2, 2) => h2.get(1, 1),
                        _ => C64::new(0.0, 0.0), // dark row/column zero
                    };
                    assert!(
                        (elem - expected).norm() < 1e-12,
                        "entry ({i},{j}): {elem} vs {expected}"
                    );
                }
            }
        }
    }

    #[test]
    fn effective_limits() {
        let p = RotatingFrameParams::new(1.0, PI / 2.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let h = effective_hamiltonian(&p, 0.0);
        assert!(h.get(0, 0).norm() < 1e-15);
        assert!((h.get(0, 1).norm() - 0.5).abs() < 1e-15);

        let p = RotatingFrameParams::new(0.0, PI / 2.0, 0.0, -0.8, 0.0, 0.0).unwrap();
        let h = effective_hamiltonian(&p, 0.0);
        assert!((h.get(0, 0).re - 0.4).abs() < 1e-15);
        assert!((h.get(1, 1).re + 0.4).abs() < 1e-15);
        assert!(h.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn toc_residuals_vanish_on_scheme_pulses() {
        let p = RotatingFrameParams::new(1.3, 0.9, 0.5, -0.6, 0.4, -0.2).unwrap();
        for k in 0..20 {
            let (l1, l2) = toc_constraint_residuals(&p, 0.41 * k as f64);
            assert!(l1.abs() < 1e-12 && l2.abs() < 1e-12);
        }
    }

    #[test]
    fn toc_residuals_detect_deviations() {
        let omega = 1.0;
        // spurious sigma_z component: l2 = 2 eps
        let eps = 0.37;
        let mut hc = Operator::zeros(2);
        hc.set(0, 1, C64::new(0.5 * omega, 0.0));
        hc.set(1, 0, C64::new(0.5 * omega, 0.0));
        hc.set(0, 0, C64::new(eps, 0.0));
        hc.set(1, 1, C64::new(-eps, 0.0));
        let (_, l2) = residuals_of_coupling(&hc, omega);
        assert!((l2 - 2.0 * eps).abs() < 1e-14);

        // coupling doubled at fixed Omega: Tr(H_c^2) = 2 Omega^2,
        // l1 = (1/2)(2 - 1/2) Omega^2 = 0.75 Omega^2
        let mut hc = Operator::zeros(2);
        hc.set(0, 1, C64::new(omega, 0.0));
        hc.set(1, 0, C64::new(omega, 0.0));
        let (l1, _) = residuals_of_coupling(&hc, omega);
        assert!((l1 - 0.75 * omega * omega).abs() < 1e-14);
    }

    #[test]
    fn lab_frame_silent_drives_are_diagonal() {
        let cfg = LabFrameConfig::new(
            [0.1, 12.0, 32.0],
            [0.0, 0.0, 0.0],
            [32.0, 20.0, 12.0],
            [0.0; 3],
            0.0,
        )
        .unwrap();
        let h = lab_frame_hamiltonian(&cfg, 0.77);
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert!((h.get(i, i).re - cfg.level_energies[i]).abs() < 1e-15);
                } else {
                    assert!(h.get(i, j).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn lab_frame_peak_phase() {
        // t = phi_0/upsilon_0 with only Omega_0 on: entry equals Omega_0
        let phi0 = 0.9;
        let cfg = LabFrameConfig::new(
            [0.0, 12.0, 32.0],
            [0.25, 0.0, 0.0],
            [32.0, 20.0, 12.0],
            [phi0, 0.0, 0.0],
            0.0,
        )
        .unwrap();
        let h = lab_frame_hamiltonian(&cfg, phi0 / 32.0);
        assert!((h.get(2, 0).re - 0.25).abs() < 1e-14);
    }

    #[test]
    fn frequency_matching_enforced() {
        assert!(LabFrameConfig::new([0.0; 3], [0.0; 3], [30.0, 20.0, 12.0], [0.0; 3], 0.0).is_err());
    }

    #[test]
    fn bloch_constant_under_zero_hamiltonian() {
        let sched = Schedule::new(1.0, 0.01, 3, |_| Operator::zeros(3)).unwrap();
        let init = StateVector::normalized(array![
            C64::new(0.6, 0.0),
            C64::new(0.0, 0.8),
            C64::new(0.0, 0.0)
        ])
        .unwrap();
        let traj = bloch_trajectory(&sched, &init, 7).unwrap();
        for s in &traj {
            assert!((s.x - traj[0].x).abs() < 1e-12);
            assert!((s.y - traj[0].y).abs() < 1e-12);
            assert!((s.z - traj[0].z).abs() < 1e-12);
            assert!(s.leakage.abs() < 1e-12);
        }
    }
}
