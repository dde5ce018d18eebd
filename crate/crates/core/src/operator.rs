//! Dense complex matrices and Hermitian operators on a single local space.
//!
//! Everything here is sized for local dimensions of a few tens at most.
//! Matrices are stored as `nalgebra` dense matrices; the newtypes only add
//! the squareness, finiteness and Hermiticity contracts.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{HERMITIAN_TOL, PSD_TOL};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// A square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(m))
    }

    /// Builds a matrix from row vectors.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare { rows: n, cols: row.len() });
            }
        }
        Self::from_dmatrix(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub(crate) fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    /// `|u><v|`
    pub fn outer(u: &[C64], v: &[C64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
        }
        Self::from_dmatrix(DMatrix::from_fn(u.len(), u.len(), |r, c| u[r] * v[c].conj()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim()).map(|r| (0..self.dim()).map(|c| self.0[(r, c)]).collect()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Hilbert–Schmidt (Frobenius) norm.
    pub fn hs_norm(&self) -> f64 {
        libm::sqrt(self.0.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn scale(&self, k: C64) -> Self {
        Self(&self.0 * k)
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(C64::new(k, 0.0))
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let d = self.dim();
        (0..d).map(|r| (0..d).map(|c| self.0[(r, c)] * v[c]).sum()).collect()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol * self.hs_norm().max(1.0)
    }

    fn hermitian_deviation(&self) -> f64 {
        let d = self.dim();
        let mut dev: f64 = 0.0;
        for r in 0..d {
            for c in r..d {
                dev = dev.max((self.0[(r, c)] - self.0[(c, r)].conj()).norm());
            }
        }
        dev
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() })
        }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// A Hermitian operator. Construction rejects matrices whose deviation from
/// Hermiticity exceeds `HERMITIAN_TOL` (relative to `max(1, ‖M‖_HS)`) and
/// stores the exact Hermitian part.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOp(ComplexMatrix);

impl HermitianOp {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let dev = m.hermitian_deviation();
        if dev > HERMITIAN_TOL * m.hs_norm().max(1.0) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(Self::symmetrize(m))
    }

    fn symmetrize(m: ComplexMatrix) -> Self {
        let adj = m.adjoint();
        Self((&m + &adj).scale_real(0.5))
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        Self::new(ComplexMatrix::from_rows(rows)?)
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    pub fn pauli_x() -> Self {
        Self(ComplexMatrix::from_fn(2, |r, c| if r != c { ONE } else { ZERO }))
    }

    pub fn pauli_y() -> Self {
        Self(ComplexMatrix::from_fn(2, |r, c| match (r, c) {
            (0, 1) => -I,
            (1, 0) => I,
            _ => ZERO,
        }))
    }

    pub fn pauli_z() -> Self {
        Self(ComplexMatrix::from_fn(2, |r, c| match (r, c) {
            (0, 0) => ONE,
            (1, 1) => -ONE,
            _ => ZERO,
        }))
    }

    /// `Σ_k coeffs[k]·ops[k]`; an empty list yields the zero operator of `dim`.
    pub fn real_combination(dim: usize, coeffs: &[f64], ops: &[HermitianOp]) -> Result<Self> {
        if coeffs.len() != ops.len() {
            return Err(Error::LengthMismatch { expected: ops.len(), found: coeffs.len() });
        }
        let mut acc = DMatrix::<C64>::zeros(dim, dim);
        for (k, op) in coeffs.iter().zip(ops) {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: op.dim() });
            }
            if !k.is_finite() {
                return Err(Error::NonFinite);
            }
            acc += op.matrix().as_dmatrix() * C64::new(*k, 0.0);
        }
        Ok(Self(ComplexMatrix(acc)))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0.get(row, col)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn hs_norm(&self) -> f64 {
        self.0.hs_norm()
    }

    pub fn scale(&self, k: f64) -> Self {
        Self(self.0.scale_real(k))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    /// Removes the component along the identity.
    pub fn traceless_part(&self) -> Self {
        let d = self.dim();
        let shift = self.trace() / d as f64;
        self.sub(&Self::identity(d).scale(shift))
    }

    /// HS distance to the real line spanned by the identity.
    pub fn distance_from_identity_span(&self) -> f64 {
        self.traceless_part().hs_norm()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.0 .0.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        vals
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Eigenpairs sorted by ascending eigenvalue; vectors are unit columns.
    pub fn eigenpairs(&self) -> Vec<(f64, Vec<C64>)> {
        let eig = self.0 .0.clone().symmetric_eigen();
        let mut pairs: Vec<(f64, Vec<C64>)> = (0..self.dim())
            .map(|k| (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().copied().collect()))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -PSD_TOL
    }

    /// Principal (positive) square root; small negative eigenvalues are clamped to zero.
    pub fn sqrt_psd(&self) -> Result<ComplexMatrix> {
        let eig = self.0 .0.clone().symmetric_eigen();
        if let Some(min) = eig.eigenvalues.iter().copied().reduce(f64::min) {
            if min < -PSD_TOL {
                return Err(Error::NotPositive { index: 0, min_eigenvalue: min });
            }
        }
        let roots = eig.eigenvalues.map(|v| C64::new(libm::sqrt(v.max(0.0)), 0.0));
        let v = &eig.eigenvectors;
        let root = v * DMatrix::from_diagonal(&roots) * v.adjoint();
        let root = HermitianOp::symmetrize(ComplexMatrix(root));
        Ok(root.0)
    }

    pub fn mul(&self, other: &Self) -> ComplexMatrix {
        &self.0 * &other.0
    }
}

/// Hilbert–Schmidt inner product `Tr(A·B)` of two Hermitian operators.
pub fn hs_inner(a: &HermitianOp, b: &HermitianOp) -> Result<f64> {
    a.0.check_same_dim(&b.0)?;
    Ok(hs_inner_unchecked(a, b))
}

pub(crate) fn hs_inner_unchecked(a: &HermitianOp, b: &HermitianOp) -> f64 {
    // Tr(AB) = Σ_jk A_jk B_kj = Σ_jk A_jk conj(B_jk) for Hermitian B.
    a.0 .0.iter().zip(b.0 .0.iter()).map(|(x, y)| (x * y.conj()).re).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn pauli_inner_products() {
        let (x, y, z) = (HermitianOp::pauli_x(), HermitianOp::pauli_y(), HermitianOp::pauli_z());
        assert_eq!(hs_inner(&x, &x).unwrap(), 2.0);
        assert_eq!(hs_inner(&x, &y).unwrap(), 0.0);
        assert_eq!(hs_inner(&HermitianOp::identity(2), &z).unwrap(), 0.0);
        assert_eq!(hs_inner(&y, &y).unwrap(), 2.0);
    }

    #[test]
    fn hs_inner_rejects_mismatched_dims() {
        let err = hs_inner(&HermitianOp::identity(2), &HermitianOp::identity(3)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        assert!(matches!(HermitianOp::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_non_finite_and_ragged() {
        let nan = C64::new(f64::NAN, 0.0);
        assert_eq!(ComplexMatrix::from_rows(&[vec![nan]]).unwrap_err(), Error::NonFinite);
        assert!(matches!(ComplexMatrix::from_rows(&[vec![ONE, ONE], vec![ONE]]), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn sqrt_of_projector_is_itself() {
        let p = HermitianOp::identity(2).add(&HermitianOp::pauli_x()).scale(0.5);
        let root = p.sqrt_psd().unwrap();
        assert!(root.max_abs_diff(p.matrix()) < 1e-12);
        let vals = p.eigenvalues();
        assert!((vals[0]).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_rejects_negative_operator() {
        assert!(HermitianOp::pauli_z().sqrt_psd().is_err());
    }

    #[test]
    fn distance_from_identity_span() {
        assert!(HermitianOp::identity(3).scale(0.7).distance_from_identity_span() < 1e-15);
        let d = HermitianOp::pauli_z().distance_from_identity_span();
        assert!((d - libm::sqrt(2.0)).abs() < 1e-15);
    }
}
