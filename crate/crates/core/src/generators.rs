//! Hilbert–Schmidt Gram–Schmidt and SU(d) generator bases.
//!
//! All orthonormal families here use the normalization `Tr(G_m G_n) = 2δ_mn`,
//! the Pauli convention, including the diagonal Gell-Mann generators.

use alloc::vec::Vec;

use crate::error::{check_tol, Error, Result};
use crate::operator::{hs_inner_unchecked, ComplexMatrix, HermitianOp, C64, ONE, ZERO};

/// A complete set of `d² − 1` traceless Hermitian generators with
/// `Tr(G_m G_n) = 2δ_mn`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorBasis {
    dim: usize,
    ops: Vec<HermitianOp>,
}

impl GeneratorBasis {
    /// Validates the generator invariants to `tol`.
    pub fn new(dim: usize, ops: Vec<HermitianOp>, tol: f64) -> Result<Self> {
        check_tol(tol)?;
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        if ops.len() != dim * dim - 1 {
            return Err(Error::LengthMismatch { expected: dim * dim - 1, found: ops.len() });
        }
        check_orthonormal_traceless(&ops, dim, tol)?;
        Ok(Self { dim, ops })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[HermitianOp] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<HermitianOp> {
        self.ops
    }
}

/// Largest deviation of `ops` from a traceless family with `Tr(A_m A_n) = 2δ_mn`.
pub fn orthonormality_deviation(ops: &[HermitianOp]) -> f64 {
    let mut dev: f64 = 0.0;
    for (m, a) in ops.iter().enumerate() {
        dev = dev.max(a.trace().abs());
        for b in &ops[m..] {
            let target = if core::ptr::eq(a, b) { 2.0 } else { 0.0 };
            dev = dev.max((hs_inner_unchecked(a, b) - target).abs());
        }
    }
    dev
}

fn check_orthonormal_traceless(ops: &[HermitianOp], dim: usize, tol: f64) -> Result<()> {
    if let Some(bad) = ops.iter().find(|op| op.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
    }
    let deviation = orthonormality_deviation(ops);
    if deviation > 10.0 * tol {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(())
}

/// Orthogonalizes `candidate` against `basis` (two passes) and appends it,
/// rescaled to HS-norm² 2, unless its residual is at most
/// `tol · max(1, ‖candidate‖_HS)`.
fn extend_orthonormal(basis: &mut Vec<HermitianOp>, candidate: &HermitianOp, tol: f64) -> bool {
    let scale = candidate.hs_norm().max(1.0);
    let mut v = candidate.clone();
    for _ in 0..2 {
        for q in basis.iter() {
            let coef = hs_inner_unchecked(&v, q) / 2.0;
            v = v.sub(&q.scale(coef));
        }
    }
    let norm = libm::sqrt(hs_inner_unchecked(&v, &v).max(0.0));
    if norm <= tol * scale {
        return false;
    }
    basis.push(v.scale(core::f64::consts::SQRT_2 / norm));
    true
}

/// Modified Gram–Schmidt under the Hilbert–Schmidt inner product.
///
/// The output spans the same real subspace as `ops`, is normalized to
/// `Tr(Λ_m Λ_n) = 2δ_mn`, and its length is the numerical rank of the input.
/// Inputs whose residual is at most `tol · max(1, ‖input‖_HS)` are dropped.
pub fn gram_schmidt_hs(ops: &[HermitianOp], tol: f64) -> Result<Vec<HermitianOp>> {
    check_tol(tol)?;
    let Some(first) = ops.first() else {
        return Ok(Vec::new());
    };
    let dim = first.dim();
    for op in ops {
        if op.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: op.dim() });
        }
        if !op.hs_norm().is_finite() {
            return Err(Error::NonFinite);
        }
    }
    let mut out = Vec::new();
    for op in ops {
        if out.len() == dim * dim {
            break;
        }
        extend_orthonormal(&mut out, op, tol);
    }
    Ok(out)
}

/// Generalized Gell-Mann basis of SU(d).
///
/// Ordering: symmetric `E_jk + E_kj` for `j < k` in lexicographic order, then
/// antisymmetric `−i(E_jk − E_kj)` in the same order, then the `d − 1`
/// diagonal generators. For `d = 2` this is `[σ_x, σ_y, σ_z]`.
pub fn gell_mann_basis(d: usize) -> Result<GeneratorBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    let mut ops = Vec::with_capacity(d * d - 1);
    for &(j, k) in &pairs {
        let m = ComplexMatrix::from_fn(d, |r, c| if (r, c) == (j, k) || (r, c) == (k, j) { ONE } else { ZERO });
        ops.push(HermitianOp::new(m)?);
    }
    for &(j, k) in &pairs {
        let m = ComplexMatrix::from_fn(d, |r, c| {
            if (r, c) == (j, k) {
                C64::new(0.0, -1.0)
            } else if (r, c) == (k, j) {
                C64::new(0.0, 1.0)
            } else {
                ZERO
            }
        });
        ops.push(HermitianOp::new(m)?);
    }
    for l in 1..d {
        let norm = libm::sqrt(2.0 / (l * (l + 1)) as f64);
        let m = ComplexMatrix::from_fn(d, |r, c| {
            if r != c {
                ZERO
            } else if r < l {
                C64::new(norm, 0.0)
            } else if r == l {
                C64::new(-(l as f64) * norm, 0.0)
            } else {
                ZERO
            }
        });
        ops.push(HermitianOp::new(m)?);
    }
    GeneratorBasis::new(d, ops, 1e-12)
}

/// Completes an orthonormal traceless family to a full generator basis by
/// Gram–Schmidting the Gell-Mann basis against it. Returns only the new
/// elements, `d² − 1 − partial.len()` of them.
pub fn complete_to_generator_basis(partial: &[HermitianOp], d: usize, tol: f64) -> Result<Vec<HermitianOp>> {
    check_tol(tol)?;
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    check_orthonormal_traceless(partial, d, tol)?;
    let target = d * d - 1;
    if partial.len() > target {
        return Err(Error::NotOrthonormal { deviation: f64::INFINITY });
    }
    let mut basis: Vec<HermitianOp> = partial.to_vec();
    for g in gell_mann_basis(d)?.ops() {
        if basis.len() == target {
            break;
        }
        extend_orthonormal(&mut basis, g, tol);
    }
    if basis.len() != target {
        return Err(Error::NumericalBreakdown("generator completion fell short"));
    }
    Ok(basis.split_off(partial.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: &HermitianOp, b: &HermitianOp) -> bool {
        a.matrix().max_abs_diff(b.matrix()) < 1e-12
    }

    #[test]
    fn gram_schmidt_drops_duplicate_direction() {
        let z = HermitianOp::pauli_z();
        let x = HermitianOp::pauli_x();
        let out = gram_schmidt_hs(&[z.clone(), z.scale(2.0), x.clone()], 1e-9).unwrap();
        assert_eq!(out.len(), 2);
        assert!(close(&out[0], &z));
        assert!(close(&out[1], &x));
    }

    #[test]
    fn gram_schmidt_empty_and_rescale() {
        assert!(gram_schmidt_hs(&[], 1e-9).unwrap().is_empty());
        let xy = HermitianOp::pauli_x().add(&HermitianOp::pauli_y());
        let out = gram_schmidt_hs(core::slice::from_ref(&xy), 1e-9).unwrap();
        assert_eq!(out.len(), 1);
        assert!(close(&out[0], &xy.scale(1.0 / libm::sqrt(2.0))));
    }

    #[test]
    fn gram_schmidt_rejects_bad_tol_and_dims() {
        assert!(gram_schmidt_hs(&[HermitianOp::pauli_x()], 0.0).is_err());
        let err = gram_schmidt_hs(&[HermitianOp::pauli_x(), HermitianOp::identity(3)], 1e-9);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn gram_schmidt_zero_input_is_dropped() {
        let out = gram_schmidt_hs(&[HermitianOp::zeros(2)], 1e-9).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn qubit_basis_is_pauli() {
        let b = gell_mann_basis(2).unwrap();
        assert!(close(&b.ops()[0], &HermitianOp::pauli_x()));
        assert!(close(&b.ops()[1], &HermitianOp::pauli_y()));
        assert!(close(&b.ops()[2], &HermitianOp::pauli_z()));
    }

    #[test]
    fn gell_mann_properties() {
        for d in 2..=6 {
            let b = gell_mann_basis(d).unwrap();
            assert_eq!(b.ops().len(), d * d - 1);
            assert!(orthonormality_deviation(b.ops()) < 1e-13);
        }
        assert_eq!(gell_mann_basis(1).unwrap_err(), Error::InvalidDimension(1));
    }

    #[test]
    fn qutrit_diagonals() {
        let b = gell_mann_basis(3).unwrap();
        let l7 = &b.ops()[6];
        let l8 = &b.ops()[7];
        assert_eq!(l7.get(0, 0).re, 1.0);
        assert_eq!(l7.get(1, 1).re, -1.0);
        let s = 1.0 / libm::sqrt(3.0);
        assert!((l8.get(0, 0).re - s).abs() < 1e-15);
        assert!((l8.get(2, 2).re + 2.0 * s).abs() < 1e-15);
    }

    #[test]
    fn completion_of_qubit_families() {
        let z = HermitianOp::pauli_z();
        let rest = complete_to_generator_basis(&[z], 2, 1e-9).unwrap();
        assert_eq!(rest.len(), 2);
        assert!(close(&rest[0], &HermitianOp::pauli_x()));
        assert!(close(&rest[1], &HermitianOp::pauli_y()));

        let full = complete_to_generator_basis(&[], 2, 1e-9).unwrap();
        assert_eq!(full.len(), 3);
        assert!(close(&full[2], &HermitianOp::pauli_z()));

        let paulis = gell_mann_basis(2).unwrap().into_ops();
        assert!(complete_to_generator_basis(&paulis, 2, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn completion_rejects_unnormalized_partial() {
        let err = complete_to_generator_basis(&[HermitianOp::pauli_z().scale(3.0)], 2, 1e-9);
        assert!(matches!(err, Err(Error::NotOrthonormal { .. })));
        let err = complete_to_generator_basis(&[HermitianOp::identity(2)], 2, 1e-9);
        assert!(matches!(err, Err(Error::NotOrthonormal { .. })));
    }

    #[test]
    fn generator_basis_rejects_wrong_length() {
        let err = GeneratorBasis::new(2, vec![HermitianOp::pauli_x()], 1e-9);
        assert!(matches!(err, Err(Error::LengthMismatch { .. })));
    }
}
