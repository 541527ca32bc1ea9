//! Gate and state fidelity measures.

use crate::operator::Operator;
use crate::state::{DensityMatrix, StateVector};
use crate::{Error, Result};
use ndarray::array;
use num_complex::Complex64 as C64;

/// F = |Tr(U^+ U')| / Tr(U^+ U). The magnitude convention keeps the value
/// real and in [0, 1] for perturbed U' while agreeing with the bare trace
/// ratio whenever that is real-positive.
pub fn trace_fidelity(u_ideal: &Operator, u_actual: &Operator) -> Result<f64> {
    if u_ideal.dim() != u_actual.dim() {
        return Err(Error::Dimension(format!(
            "ideal dim {} vs actual dim {}",
            u_ideal.dim(),
            u_actual.dim()
        )));
    }
    if !u_ideal.is_unitary(crate::operator::UNITARY_TOL) {
        return Err(Error::Validation("ideal gate must be unitary".into()));
    }
    let num = u_ideal.dagger().mul(u_actual).trace().norm();
    let den = u_ideal.dagger().mul(u_ideal).trace().re;
    Ok(num / den)
}

/// F^S = <psi| rho |psi>.
pub fn state_fidelity(rho: &DensityMatrix, psi: &StateVector) -> Result<f64> {
    rho.expectation(psi)
}

/// The six cardinal qubit states |0>, |1>, (|0>+-|1>)/sqrt2,
/// (|0>+-i|1>)/sqrt2.
pub fn cardinal_states() -> Vec<StateVector> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let c = C64::new;
    [
        array![c(1.0, 0.0), c(0.0, 0.0)],
        array![c(0.0, 0.0), c(1.0, 0.0)],
        array![c(r, 0.0), c(r, 0.0)],
        array![c(r, 0.0), c(-r, 0.0)],
        array![c(r, 0.0), c(0.0, r)],
        array![c(r, 0.0), c(0.0, -r)],
    ]
    .into_iter()
    .map(|a| StateVector::new(a).expect("cardinal states are normalized"))
    .collect()
}

/// F^G: averages <target| rho |target> over the six cardinal initial
/// states, where the channel maps computational-subspace inputs to
/// three-level density matrices and targets are the ideal-gate images
/// embedded with zero auxiliary amplitude.
pub fn cardinal_gate_fidelity<F>(ideal_gate: &Operator, channel: F) -> Result<f64>
where
    F: Fn(&StateVector) -> Result<DensityMatrix>,
{
    if ideal_gate.dim() != 2 {
        return Err(Error::Dimension(format!(
            "ideal gate must be 2-dim, got {}",
            ideal_gate.dim()
        )));
    }
    let mut acc = 0.0;
    for psi in cardinal_states() {
        let rho = channel(&psi)?;
        let target = psi.apply(ideal_gate)?.embedded(rho.dim())?;
        acc += rho.expectation(&target)?;
    }
    Ok(acc / 6.0)
}
