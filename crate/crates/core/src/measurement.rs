use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::operator::{ComplexMatrix, HermitianOp};
use crate::statespace::{apply_local_operator, inner, PartyIndex, StateSet};
use crate::{COMPLETENESS_TOL, PSD_TOL};

/// A local measurement on one party: POVM elements `A_m†A_m` and, optionally,
/// the Kraus operators `A_m` themselves.
///
/// Construction enforces completeness (`Σ_m E_m = I` entrywise to
/// `COMPLETENESS_TOL`) and positivity (min eigenvalue `≥ −PSD_TOL`).
#[derive(Clone, Debug, PartialEq)]
pub struct LocalMeasurement {
    party: PartyIndex,
    elements: Vec<HermitianOp>,
    kraus: Option<Vec<ComplexMatrix>>,
}

impl LocalMeasurement {
    pub fn new(party: PartyIndex, elements: Vec<HermitianOp>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::EmptyMeasurement);
        };
        let d = first.dim();
        for e in &elements {
            if e.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: e.dim() });
            }
        }
        for (index, e) in elements.iter().enumerate() {
            let min_eigenvalue = e.min_eigenvalue();
            if min_eigenvalue < -PSD_TOL {
                return Err(Error::NotPositive { index, min_eigenvalue });
            }
        }
        let m = Self { party, elements, kraus: None };
        let residual = m.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::Incomplete { residual });
        }
        Ok(m)
    }

    /// The trivial one-outcome measurement `{I}`.
    pub fn identity(party: PartyIndex, d: usize) -> Self {
        Self { party, elements: alloc::vec![HermitianOp::identity(d)], kraus: None }
    }

    /// Attaches explicit Kraus operators; each must satisfy `A_m†A_m = E_m`.
    pub fn with_kraus(mut self, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.len() != self.elements.len() {
            return Err(Error::LengthMismatch { expected: self.elements.len(), found: kraus.len() });
        }
        for (index, (a, e)) in kraus.iter().zip(&self.elements).enumerate() {
            if a.dim() != e.dim() {
                return Err(Error::DimensionMismatch { expected: e.dim(), found: a.dim() });
            }
            let residual = (&a.adjoint() * a).max_abs_diff(e.matrix());
            if residual > COMPLETENESS_TOL {
                return Err(Error::KrausMismatch { index, residual });
            }
        }
        self.kraus = Some(kraus);
        Ok(self)
    }

    pub fn party(&self) -> PartyIndex {
        self.party
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn elements(&self) -> &[HermitianOp] {
        &self.elements
    }

    pub fn explicit_kraus(&self) -> Option<&[ComplexMatrix]> {
        self.kraus.as_deref()
    }

    /// Kraus operators: the attached ones, or else principal square roots.
    pub fn kraus_operators(&self) -> Result<Vec<ComplexMatrix>> {
        match &self.kraus {
            Some(k) => Ok(k.clone()),
            None => self.elements.iter().map(HermitianOp::sqrt_psd).collect(),
        }
    }

    pub fn completeness_residual(&self) -> f64 {
        let d = self.dim();
        let sum = self.elements.iter().fold(HermitianOp::zeros(d), |acc, e| acc.add(e));
        sum.matrix().max_abs_diff(&ComplexMatrix::identity(d))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.elements.iter().map(HermitianOp::min_eigenvalue).fold(f64::INFINITY, f64::min)
    }

    /// Whether every element lies within `tol` (HS norm) of the identity line.
    pub fn is_trivial(&self, tol: f64) -> bool {
        self.elements.iter().all(|e| e.distance_from_identity_span() <= tol)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreservationReport {
    pub ok: bool,
    /// `(element, i, j)` of the largest scaled overlap.
    pub worst: Option<(usize, usize, usize)>,
    pub worst_overlap: f64,
    pub trivial: bool,
}

/// Checks `|⟨φ_i|E_m ⊗ I|φ_j⟩| ≤ tol · max(1, ‖φ_i‖‖φ_j‖)` for every element and
/// pair `i ≠ j`, applying each element to the state vectors directly.
pub fn verify_orthogonality_preserving(
    meas: &LocalMeasurement,
    set: &StateSet,
    tol: f64,
) -> Result<PreservationReport> {
    let d = set.local_dim(meas.party())?;
    if d != meas.dim() {
        return Err(Error::DimensionMismatch { expected: d, found: meas.dim() });
    }
    let norms: Vec<f64> = (0..set.len()).map(|i| set.norm(i)).collect();
    let mut worst: Option<(usize, usize, usize, f64, f64)> = None;
    for (m, e) in meas.elements().iter().enumerate() {
        let images: Vec<Vec<_>> = set
            .states()
            .iter()
            .map(|s| apply_local_operator(s, set.dims(), meas.party(), e.matrix()))
            .collect::<Result<_>>()?;
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                let overlap = inner(&set.states()[i], &images[j]).norm();
                let ratio = overlap / (norms[i] * norms[j]).max(1.0);
                if worst.is_none_or(|w| ratio > w.4) {
                    worst = Some((m, i, j, overlap, ratio));
                }
            }
        }
    }
    let trivial = meas.is_trivial(tol);
    Ok(match worst {
        None => PreservationReport { ok: true, worst: None, worst_overlap: 0.0, trivial },
        Some((m, i, j, overlap, ratio)) => {
            PreservationReport { ok: ratio <= tol, worst: Some((m, i, j)), worst_overlap: overlap, trivial }
        }
    })
}
