//! Dense complex operators: the carrier for Hamiltonians, propagators and
//! density matrices (dimensions stay small, <= 27).

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Entrywise tolerance for the Hermitian predicate.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Entrywise tolerance for the unitary predicate.
pub const UNITARY_TOL: f64 = 1e-10;

/// A dense complex square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    data: Array2<C64>,
}

impl Operator {
    pub fn new(data: Array2<C64>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::Dimension(format!(
                "operator must be square, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.nrows() == 0 {
            return Err(Error::Validation("operator dimension must be positive".into()));
        }
        Ok(Self { data })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { data: Array2::zeros((dim, dim)) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { data: Array2::eye(dim) }
    }

    /// Build from a row-major slice of rows.
    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Array2::zeros((dim, dim));
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    dim
                )));
            }
            for (j, v) in row.iter().enumerate() {
                data[(i, j)] = *v;
            }
        }
        Ok(Self { data })
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_array(&self) -> &Array2<C64> {
        &self.data
    }

    pub fn into_array(self) -> Array2<C64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[(i, j)] = v;
    }

    pub fn dagger(&self) -> Self {
        let mut out = Array2::zeros((self.dim(), self.dim()));
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                out[(j, i)] = self.data[(i, j)].conj();
            }
        }
        Self { data: out }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.data[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { data: self.data.mapv(|v| v * s) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { data: &self.data + &other.data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { data: &self.data - &other.data }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim();
        debug_assert_eq!(n, other.dim());
        let mut out = Array2::<C64>::zeros((n, n));
        matmul_into(&self.data, &other.data, &mut out);
        Self { data: out }
    }

    /// `self * v` for a column vector.
    pub fn mul_vec(&self, v: &Array1<C64>) -> Array1<C64> {
        let n = self.dim();
        let mut out = Array1::<C64>::zeros(n);
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += self.data[(i, k)] * v[k];
            }
            out[i] = acc;
        }
        out
    }

    /// Largest entrywise absolute value.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise absolute difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                if (self.data[(i, j)] - self.data[(j, i)].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.dagger().mul(self);
        prod.max_abs_diff(&Operator::identity(self.dim())) <= tol
    }

    pub fn assert_hermitian(&self) -> Result<()> {
        if self.is_hermitian(HERMITIAN_TOL) {
            Ok(())
        } else {
            Err(Error::Validation("operator is not Hermitian".into()))
        }
    }

    /// Tensor (Kronecker) product `self (x) other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim(), other.dim());
        let mut out = Array2::zeros((n * m, n * m));
        for i in 0..n {
            for j in 0..n {
                let a = self.data[(i, j)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * other.data[(k, l)];
                    }
                }
            }
        }
        Self { data: out }
    }

    /// Eigendecomposition of a Hermitian operator by cyclic complex Jacobi
    /// rotations. Returns eigenvalues (ascending) and the unitary of column
    /// eigenvectors.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, Operator)> {
        self.assert_hermitian()?;
        let n = self.dim();
        let mut a = self.data.clone();
        let mut v = Array2::<C64>::eye(n);
        let scale = self.max_abs().max(1e-300);
        let tol = 1e-15 * scale;

        let mut converged = n == 1;
        for _sweep in 0..60 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(a[(p, q)].norm());
                }
            }
            if off <= tol {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let beta = apq.norm();
                    if beta <= tol * 1e-2 {
                        continue;
                    }
                    // Phase factor makes the pivot real; then a real Jacobi
                    // rotation zeroes it. Combined unitary J (identity
                    // outside rows/cols p,q):
                    //   J[p,p] = phase*c, J[p,q] = phase*s,
                    //   J[q,p] = -s,      J[q,q] = c.
                    let phase = apq / beta;
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let tau = (aqq - app) / (2.0 * beta);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let jpp = phase * c;
                    let jpq = phase * s;
                    // A <- J^H A (rows p,q)
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = jpp.conj() * apk - s * aqk;
                        a[(q, k)] = jpq.conj() * apk + c * aqk;
                    }
                    // A <- A J (cols p,q)
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * jpp - s * akq;
                        a[(k, q)] = akp * jpq + c * akq;
                    }
                    // V <- V J
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * jpp - s * vkq;
                        v[(k, q)] = vkp * jpq + c * vkq;
                    }
                }
            }
        }
        if !converged {
            return Err(Error::Integration(
                "Jacobi eigensolver did not converge in 60 sweeps".into(),
            ));
        }

        let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
        pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let vals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let mut vecs = Array2::<C64>::zeros((n, n));
        for (new_col, (_, old_col)) in pairs.iter().enumerate() {
            for k in 0..n {
                vecs[(k, new_col)] = v[(k, *old_col)];
            }
        }
        Ok((vals, Operator { data: vecs }))
    }
}

/// `out = a * b` with a plain ikj loop; dimensions here are small enough
/// that this beats setting up a BLAS call.
pub(crate) fn matmul_into(a: &Array2<C64>, b: &Array2<C64>, out: &mut Array2<C64>) {
    let n = a.nrows();
    out.fill(C64::new(0.0, 0.0));
    for i in 0..n {
        for k in 0..n {
            let aik = a[(i, k)];
            if aik.re == 0.0 && aik.im == 0.0 {
                continue;
            }
            for j in 0..n {
                out[(i, j)] += aik * b[(k, j)];
            }
        }
    }
}

/// exp(-i H t) for Hermitian H, via eigendecomposition. Exactly unitary up
/// to the eigensolver's accuracy for any t.
pub fn matrix_exponential(h: &Operator, t: f64) -> Result<Operator> {
    let (vals, vecs) = h.hermitian_eigen()?;
    let n = h.dim();
    let mut out = Array2::<C64>::zeros((n, n));
    // V diag(e^{-i lam t}) V^H
    for (k, lam) in vals.iter().enumerate() {
        let ph = C64::from_polar(1.0, -lam * t);
        for i in 0..n {
            let vik = vecs.get(i, k) * ph;
            for j in 0..n {
                out[(i, j)] += vik * vecs.get(j, k).conj();
            }
        }
    }
    Ok(Operator { data: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sigma_x() -> Operator {
        Operator::from_rows(&[&[c(0., 0.), c(1., 0.)], &[c(1., 0.), c(0., 0.)]]).unwrap()
    }

    #[test]
    fn exponential_of_zero_time_is_identity() {
        let h = sigma_x();
        let u = matrix_exponential(&h, 0.0).unwrap();
        assert!(u.max_abs_diff(&Operator::identity(2)) < 1e-14);
    }

    #[test]
    fn half_period_rabi_flip() {
        // exp(-i pi sigma_x / 2) = -i sigma_x
        let h = sigma_x().scale(c(0.5, 0.0));
        let u = matrix_exponential(&h, PI).unwrap();
        let expected = sigma_x().scale(c(0.0, -1.0));
        assert!(u.max_abs_diff(&expected) < 1e-12);
        assert!(u.is_unitary(UNITARY_TOL));
    }

    #[test]
    fn eigen_reconstructs_matrix() {
        let h = Operator::from_rows(&[
            &[c(1.0, 0.0), c(0.3, 0.4), c(0.0, -0.2)],
            &[c(0.3, -0.4), c(-0.5, 0.0), c(0.1, 0.0)],
            &[c(0.0, 0.2), c(0.1, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let (vals, v) = h.hermitian_eigen().unwrap();
        assert!(v.is_unitary(1e-12));
        let mut lam = Operator::zeros(3);
        for (i, l) in vals.iter().enumerate() {
            lam.set(i, i, c(*l, 0.0));
        }
        let rebuilt = v.mul(&lam).mul(&v.dagger());
        assert!(rebuilt.max_abs_diff(&h) < 1e-12);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn non_hermitian_input_rejected() {
        let h = Operator::from_rows(&[&[c(0., 0.), c(1., 0.)], &[c(0., 0.), c(0., 0.)]]).unwrap();
        assert!(matrix_exponential(&h, 1.0).is_err());
    }

    #[test]
    fn kron_dimensions_and_entries() {
        let a = sigma_x();
        let id = Operator::identity(3);
        let k = a.kron(&id);
        assert_eq!(k.dim(), 6);
        assert_eq!(k.get(0, 3), c(1.0, 0.0));
        assert_eq!(k.get(1, 4), c(1.0, 0.0));
        assert_eq!(k.get(0, 4), c(0.0, 0.0));
    }
}
