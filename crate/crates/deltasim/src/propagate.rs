//! Time-ordered propagation by piecewise-constant exponentiation with
//! midpoint sampling.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::operator::{matmul_into, matrix_exponential, Operator};
use crate::schedule::Schedule;
use crate::{Error, Result};

/// Time-ordered propagator of the schedule over its full window.
pub fn propagate(schedule: &Schedule) -> Result<Operator> {
    propagate_interval(schedule, 0.0, schedule.duration())
}

/// Time-ordered propagator over `[t0, t1]`, integrating each
/// breakpoint-delimited segment separately.
pub fn propagate_interval(schedule: &Schedule, t0: f64, t1: f64) -> Result<Operator> {
    if t1 <= t0 || !t1.is_finite() || !t0.is_finite() {
        return Err(Error::Validation(format!("empty interval [{t0}, {t1}]")));
    }
    let step = schedule.recommended_step();
    if step > schedule.duration() {
        return Err(Error::Validation(format!(
            "step {} exceeds schedule duration {}",
            step,
            schedule.duration()
        )));
    }
    let dim = schedule.dim();
    let mut u = Operator::identity(dim);
    let mut stepper = Stepper::new(dim);
    let bounds = schedule.segment_boundaries(t0, t1);
    for seg in bounds.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let n = ((b - a) / step).ceil().max(1.0) as usize;
        let h = (b - a) / n as f64;
        for k in 0..n {
            let tm = a + (k as f64 + 0.5) * h;
            let ham = schedule.hamiltonian_at(tm);
            ham.assert_hermitian()?;
            u = stepper.apply(&ham, h, &u)?;
        }
    }
    Ok(u)
}

/// Evolves a set of sample times alongside the propagation; returns
/// `(t, U(t))` at each requested time (times must be ascending in
/// `[0, duration]`).
pub fn propagate_sampled(schedule: &Schedule, times: &[f64]) -> Result<Vec<(f64, Operator)>> {
    let mut out = Vec::with_capacity(times.len());
    let mut u = Operator::identity(schedule.dim());
    let mut t_prev = 0.0;
    for &t in times {
        if t < t_prev - 1e-12 || t > schedule.duration() + 1e-9 {
            return Err(Error::Validation(format!(
                "sample time {t} out of order or beyond duration"
            )));
        }
        if t > t_prev {
            let seg = propagate_interval(schedule, t_prev, t)?;
            u = seg.mul(&u);
            t_prev = t;
        }
        out.push((t, u.clone()));
    }
    Ok(out)
}

/// One piecewise-constant step exp(-i H h) applied to U. Two-level blocks
/// use the exact Pauli closed form; larger dimensions take a 4th-order
/// Taylor product when ||H h|| is tiny (the usual case at the default
/// step), falling back to the exact eigendecomposition otherwise.
struct Stepper {
    scratch: Array2<C64>,
}

impl Stepper {
    fn new(dim: usize) -> Self {
        Self { scratch: Array2::zeros((dim, dim)) }
    }

    fn apply(&mut self, ham: &Operator, h: f64, u: &Operator) -> Result<Operator> {
        let dim = ham.dim();
        if dim == 2 {
            return Ok(expm_two_level(ham, h).mul(u));
        }
        let norm_bound = ham.max_abs() * dim as f64 * h;
        if norm_bound > 0.02 {
            let e = matrix_exponential(ham, h)?;
            return Ok(e.mul(u));
        }
        // exp(A) U = U + A U + A^2 U/2 + A^3 U/6 + A^4 U/24, A = -i H h.
        let a = ham.as_array().mapv(|v| v * C64::new(0.0, -h));
        let mut term = u.as_array().clone();
        let mut result = u.as_array().clone();
        for k in 1..=4u32 {
            matmul_into(&a, &term, &mut self.scratch);
            std::mem::swap(&mut term, &mut self.scratch);
            term.mapv_inplace(|v| v / k as f64);
            result += &term;
        }
        Operator::new(result)
    }
}

/// Exact exp(-i H h) for a 2x2 Hermitian H via the Pauli decomposition.
fn expm_two_level(ham: &Operator, h: f64) -> Operator {
    let a = ham.get(0, 0).re;
    let d = ham.get(1, 1).re;
    let b = ham.get(0, 1);
    let e = 0.5 * (a + d);
    let mx = b.re;
    let my = -b.im;
    let mz = 0.5 * (a - d);
    let m = (mx * mx + my * my + mz * mz).sqrt();
    let ang = m * h;
    let (cosa, sinc) = if m < 1e-300 {
        (1.0, h)
    } else {
        (ang.cos(), ang.sin() / m)
    };
    let phase = C64::from_polar(1.0, -e * h);
    let i = C64::new(0.0, 1.0);
    let u00 = phase * (C64::new(cosa, 0.0) - i * sinc * mz);
    let u11 = phase * (C64::new(cosa, 0.0) + i * sinc * mz);
    let u01 = phase * (-i * sinc * C64::new(mx, -my));
    let u10 = phase * (-i * sinc * C64::new(mx, my));
    Operator::from_rows(&[&[u00, u01], &[u10, u11]]).expect("2x2 construction")
}
