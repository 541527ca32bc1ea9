//! Pure states and density matrices.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::operator::Operator;
use crate::{Error, Result};

/// Norm tolerance for state vectors.
pub const NORM_TOL: f64 = 1e-12;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue of a density matrix (integration
/// round-off produces tiny negative values).
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

/// A normalized pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Array1<C64>,
}

impl StateVector {
    pub fn new(amplitudes: Array1<C64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!(
                "state vector norm {norm} deviates from 1 by more than {NORM_TOL}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes the input before construction.
    pub fn normalized(mut amplitudes: Array1<C64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-14 {
            return Err(Error::Validation("cannot normalize a zero vector".into()));
        }
        amplitudes.mapv_inplace(|a| a / norm);
        Ok(Self { amplitudes })
    }

    /// Computational basis state |k> of the given dimension.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amplitudes = Array1::zeros(dim);
        amplitudes[k] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, k: usize) -> C64 {
        self.amplitudes[k]
    }

    /// Appends zero amplitudes up to `dim` (e.g. qubit state into the
    /// three-level space).
    pub fn embedded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::Dimension(format!(
                "cannot embed dimension {} into {}",
                self.dim(),
                dim
            )));
        }
        let mut amplitudes = Array1::zeros(dim);
        for (k, a) in self.amplitudes.iter().enumerate() {
            amplitudes[k] = *a;
        }
        Ok(Self { amplitudes })
    }

    pub fn apply(&self, u: &Operator) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "operator dim {} vs state dim {}",
                u.dim(),
                self.dim()
            )));
        }
        Ok(Self { amplitudes: u.mul_vec(&self.amplitudes) })
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |self><self| as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let n = self.dim();
        let mut data = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                data[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityMatrix { entries: Operator::new(data).expect("square by construction") }
    }
}

/// A mixed state: Hermitian, unit-trace, positive up to round-off.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: Operator,
}

impl DensityMatrix {
    pub fn new(entries: Operator) -> Result<Self> {
        if !entries.is_hermitian(NORM_TOL) {
            return Err(Error::Validation("density matrix is not Hermitian".into()));
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Validation(format!(
                "density matrix trace {tr} deviates from 1"
            )));
        }
        let (vals, _) = entries.hermitian_eigen()?;
        if let Some(min) = vals.first() {
            if *min < EIGENVALUE_FLOOR {
                return Err(Error::Validation(format!(
                    "density matrix has eigenvalue {min} below {EIGENVALUE_FLOOR}"
                )));
            }
        }
        Ok(Self { entries })
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        let entries = Operator::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0));
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn operator(&self) -> &Operator {
        &self.entries
    }

    pub fn population(&self, k: usize) -> f64 {
        self.entries.get(k, k).re
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// <psi| rho |psi>.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "state dim {} vs density dim {}",
                psi.dim(),
                self.dim()
            )));
        }
        let v = self.entries.mul_vec(psi.amplitudes());
        let val: C64 = psi
            .amplitudes()
            .iter()
            .zip(v.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(val.re)
    }

    /// U rho U^dagger.
    pub fn conjugated(&self, u: &Operator) -> Self {
        Self { entries: u.mul(&self.entries).mul(&u.dagger()) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn basis_state_is_normalized() {
        let s = StateVector::basis(3, 1);
        assert_eq!(s.amplitude(1), c(1.0, 0.0));
        assert!(StateVector::new(s.amplitudes().clone()).is_ok());
    }

    #[test]
    fn unnormalized_rejected() {
        let v = ndarray::array![c(1.0, 0.0), c(1.0, 0.0)];
        assert!(StateVector::new(v).is_err());
    }

    #[test]
    fn density_of_pure_state_is_valid() {
        let s = StateVector::normalized(ndarray::array![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let rho = s.density();
        assert!(DensityMatrix::new(rho.operator().clone()).is_ok());
        assert!((rho.expectation(&s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_expectation() {
        let rho = DensityMatrix::maximally_mixed(3);
        let s = StateVector::basis(3, 0);
        assert!((rho.expectation(&s).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn negative_eigenvalue_rejected() {
        let mut m = Operator::zeros(2);
        m.set(0, 0, c(1.5, 0.0));
        m.set(1, 1, c(-0.5, 0.0));
        assert!(DensityMatrix::new(m).is_err());
    }
}
