//! Time-dependent Hamiltonian schedules.

use std::sync::Arc;

use crate::operator::Operator;
use crate::{Error, Result};

/// Refinement applied on top of the `min(tau/2000, 0.002/omega_ref)` step
/// heuristic for the few-level schedules; the bare heuristic leaves the
/// midpoint rule ~50x short of the 1e-8 step-halving tolerance on
/// rotating-frame gates.
pub const STEP_REFINEMENT: f64 = 16.0;

/// Default integrator step for a schedule of the given duration whose
/// largest energy scale is `omega_ref`.
pub fn default_step(duration: f64, omega_ref: f64) -> f64 {
    let base = (duration / 2000.0).min(0.002 / omega_ref.max(1e-12));
    base / STEP_REFINEMENT
}

/// A time-dependent Hamiltonian over a finite window, with a recommended
/// integration step. Immutable and shareable across threads. Interior
/// discontinuities (piecewise pulses) are declared as breakpoints so the
/// integrators never step across them.
#[derive(Clone)]
pub struct Schedule {
    duration: f64,
    recommended_step: f64,
    dim: usize,
    breakpoints: Vec<f64>,
    hamiltonian: Arc<dyn Fn(f64) -> Operator + Send + Sync>,
}

impl std::fmt::Debug for Schedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Schedule")
            .field("duration", &self.duration)
            .field("recommended_step", &self.recommended_step)
            .field("dim", &self.dim)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl Schedule {
    pub fn new<F>(duration: f64, recommended_step: f64, dim: usize, hamiltonian: F) -> Result<Self>
    where
        F: Fn(f64) -> Operator + Send + Sync + 'static,
    {
        if duration.is_nan() || duration <= 0.0 {
            return Err(Error::Validation(format!(
                "schedule duration must be positive, got {duration}"
            )));
        }
        if recommended_step.is_nan() || recommended_step <= 0.0 {
            return Err(Error::Validation(format!(
                "schedule step must be positive, got {recommended_step}"
            )));
        }
        if recommended_step > duration {
            return Err(Error::Validation(format!(
                "step {recommended_step} exceeds duration {duration}"
            )));
        }
        Ok(Self {
            duration,
            recommended_step,
            dim,
            breakpoints: Vec::new(),
            hamiltonian: Arc::new(hamiltonian),
        })
    }

    /// Declares interior discontinuity times (strictly inside the window,
    /// ascending).
    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Result<Self> {
        for w in breakpoints.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Validation("breakpoints must be ascending".into()));
            }
        }
        if breakpoints.iter().any(|b| *b <= 0.0 || *b >= self.duration) {
            return Err(Error::Validation(
                "breakpoints must lie strictly inside (0, duration)".into(),
            ));
        }
        self.breakpoints = breakpoints;
        Ok(self)
    }

    /// Segment boundaries of `[t0, t1]` split at interior breakpoints.
    pub fn segment_boundaries(&self, t0: f64, t1: f64) -> Vec<f64> {
        let mut bounds = vec![t0];
        for b in &self.breakpoints {
            if *b > t0 + 1e-15 && *b < t1 - 1e-15 {
                bounds.push(*b);
            }
        }
        bounds.push(t1);
        bounds
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn recommended_step(&self) -> f64 {
        self.recommended_step
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian_at(&self, t: f64) -> Operator {
        (self.hamiltonian)(t)
    }

    /// Same Hamiltonian, different step.
    pub fn with_step(&self, step: f64) -> Result<Self> {
        if step.is_nan() || step <= 0.0 || step > self.duration {
            return Err(Error::Validation(format!(
                "step {step} invalid for duration {}",
                self.duration
            )));
        }
        Ok(Self {
            duration: self.duration,
            recommended_step: step,
            dim: self.dim,
            breakpoints: self.breakpoints.clone(),
            hamiltonian: self.hamiltonian.clone(),
        })
    }

    /// Restriction to `[t0, t1]`, shifting time so the window starts at 0.
    pub fn restricted(&self, t0: f64, t1: f64) -> Result<Self> {
        if t1 <= t0 || t0 < 0.0 || t1 > self.duration + 1e-12 {
            return Err(Error::Validation(format!(
                "invalid window [{t0}, {t1}] for duration {}",
                self.duration
            )));
        }
        let f = self.hamiltonian.clone();
        let breakpoints = self
            .breakpoints
            .iter()
            .filter(|b| **b > t0 && **b < t1)
            .map(|b| b - t0)
            .collect();
        Ok(Self {
            duration: t1 - t0,
            recommended_step: self.recommended_step.min(t1 - t0),
            dim: self.dim,
            breakpoints,
            hamiltonian: Arc::new(move |t| f(t0 + t)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_larger_than_duration_rejected() {
        let r = Schedule::new(1.0, 2.0, 2, |_| Operator::identity(2));
        assert!(r.is_err());
    }

    #[test]
    fn default_step_tracks_both_scales() {
        // slow energy scale: tau/2000 branch wins
        let s = default_step(1.0, 0.1);
        assert!((s - (1.0 / 2000.0) / STEP_REFINEMENT).abs() < 1e-15);
        // fast carrier: 0.002/omega branch wins
        let s = default_step(1.0, 400.0);
        assert!((s - 0.002 / 400.0 / STEP_REFINEMENT).abs() < 1e-15);
    }

    #[test]
    fn restriction_shifts_time() {
        let sched = Schedule::new(2.0, 0.01, 2, |t| {
            Operator::identity(2).scale(num_complex::Complex64::new(t, 0.0))
        })
        .unwrap();
        let half = sched.restricted(1.0, 2.0).unwrap();
        assert!((half.duration() - 1.0).abs() < 1e-12);
        assert!((half.hamiltonian_at(0.5).get(0, 0).re - 1.5).abs() < 1e-12);
    }
}
