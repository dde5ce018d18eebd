//! The nontrivial orthogonality-preserving (NTOP) decision procedure.
//!
//! For a party of local dimension `d`, collect `Γ_ij` and `Δ_ij` over all
//! pairs of states, orthonormalize them into `{Λ_m}` (`t` of them), and
//! complete to a generator basis with `{λ_n}` (`r = d² − 1 − t` of them).
//! A nontrivial orthogonality-preserving local measurement exists iff
//! `r ≥ 1`; every POVM element of such a measurement is then of the form
//! `p (I/d + ½ Σ b_n λ_n)`.
//!
//! Independence is counted over the real vector space of Hermitian
//! operators.

use alloc::vec::Vec;

use crate::error::{check_tol, Error, Result};
use crate::generators::{complete_to_generator_basis, gram_schmidt_hs};
use crate::measurement::LocalMeasurement;
use crate::operator::HermitianOp;
use crate::statespace::{check_mutual_orthogonality, gamma_delta, PartyIndex, StateSet};
use crate::IDEMPOTENCE_TOL;

#[derive(Clone, Debug, PartialEq)]
pub struct NtopReport {
    pub party: PartyIndex,
    pub d: usize,
    /// Number of real-linearly independent Γ/Δ operators.
    pub t: usize,
    /// `d² − 1 − t`
    pub r: usize,
    pub feasible: bool,
    pub lambda_basis: Vec<HermitianOp>,
    pub complement: Vec<HermitianOp>,
}

impl NtopReport {
    pub fn generator_count(&self) -> usize {
        self.d * self.d - 1
    }
}

/// Fails with [`Error::NotOrthogonal`] unless the set is mutually orthogonal to `tol`.
pub(crate) fn require_orthogonal(set: &StateSet, tol: f64) -> Result<()> {
    let rep = check_mutual_orthogonality(set, tol);
    if rep.ok {
        return Ok(());
    }
    let (i, j) = rep.worst_pair.unwrap_or((0, 0));
    Err(Error::NotOrthogonal { i, j, overlap: rep.worst_overlap })
}

/// Decides whether `party` can perform an NTOP measurement on `set`.
pub fn ntop_check(set: &StateSet, party: PartyIndex, tol: f64) -> Result<NtopReport> {
    check_tol(tol)?;
    let d = set.local_dim(party)?;
    require_orthogonal(set, tol)?;
    let family = gamma_delta(set, party)?;
    // Zero states (annihilated residuals) contribute nothing.
    let ops: Vec<HermitianOp> = family
        .pairs
        .iter()
        .filter(|p| !set.is_zero(p.i, tol) && !set.is_zero(p.j, tol))
        .flat_map(|p| [p.gamma.traceless_part(), p.delta.traceless_part()])
        .collect();
    if d < 2 {
        return Ok(NtopReport {
            party,
            d,
            t: 0,
            r: 0,
            feasible: false,
            lambda_basis: Vec::new(),
            complement: Vec::new(),
        });
    }
    let lambda_basis = gram_schmidt_hs(&ops, tol)?;
    let t = lambda_basis.len();
    if t > d * d - 1 {
        return Err(Error::NumericalBreakdown("more independent operators than generators"));
    }
    let r = d * d - 1 - t;
    let complement = complete_to_generator_basis(&lambda_basis, d, tol)?;
    debug_assert_eq!(complement.len(), r);
    Ok(NtopReport { party, d, t, r, feasible: r >= 1, lambda_basis, complement })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Summary {
    /// No party can go first.
    LoccIndistinguishable,
    /// These parties can perform an NTOP measurement; the test says nothing more.
    Inconclusive { feasible_parties: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NtopAnalysis {
    pub reports: Vec<NtopReport>,
    pub summary: Summary,
}

/// Runs [`ntop_check`] for every party.
pub fn ntop_check_all(set: &StateSet, tol: f64) -> Result<NtopAnalysis> {
    let reports = (0..set.num_parties()).map(|p| ntop_check(set, PartyIndex(p), tol)).collect::<Result<Vec<_>>>()?;
    let feasible_parties: Vec<usize> = reports.iter().filter(|r| r.feasible).map(|r| r.party.0).collect();
    let summary = if feasible_parties.is_empty() {
        Summary::LoccIndistinguishable
    } else {
        Summary::Inconclusive { feasible_parties }
    };
    Ok(NtopAnalysis { reports, summary })
}

/// `√(2/(d² − d))`, the largest admissible `‖c‖` for the two-outcome POVM.
pub fn povm_coefficient_bound(d: usize) -> f64 {
    libm::sqrt(2.0 / (d * d - d) as f64)
}

/// The pair `(d/2)(I/d ± ½ Σ c_n λ_n)` without any positivity check.
pub fn ntop_element_pair(
    d: usize,
    complement: &[HermitianOp],
    coefficients: &[f64],
) -> Result<(HermitianOp, HermitianOp)> {
    let shift = HermitianOp::real_combination(d, coefficients, complement)?.scale(d as f64 / 4.0);
    let half = HermitianOp::identity(d).scale(0.5);
    Ok((half.add(&shift), half.sub(&shift)))
}

/// First complement generator: the canonical POVM direction.
pub fn canonical_direction(report: &NtopReport) -> Vec<f64> {
    (0..report.r).map(|n| if n == 0 { 1.0 } else { 0.0 }).collect()
}

/// Two-element NTOP POVM along `direction` at the maximal admissible
/// coefficient norm. The direction is normalized internally.
pub fn construct_ntop_povm(report: &NtopReport, direction: &[f64]) -> Result<LocalMeasurement> {
    if !report.feasible {
        return Err(Error::Infeasible { party: report.party.0 });
    }
    if direction.len() != report.r {
        return Err(Error::LengthMismatch { expected: report.r, found: direction.len() });
    }
    if direction.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let len = libm::sqrt(direction.iter().map(|x| x * x).sum());
    if len == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let s = povm_coefficient_bound(report.d);
    let c: Vec<f64> = direction.iter().map(|x| s * x / len).collect();
    let (e1, e2) = ntop_element_pair(report.d, &report.complement, &c)?;
    let kraus = alloc::vec![e1.sqrt_psd()?, e2.sqrt_psd()?];
    LocalMeasurement::new(report.party, alloc::vec![e1, e2])?.with_kraus(kraus)
}

/// `I/d + ½ Σ b_n λ_n`
pub fn density_from_coefficients(b: &[f64], complement: &[HermitianOp], d: usize) -> Result<HermitianOp> {
    if b.len() != complement.len() {
        return Err(Error::LengthMismatch { expected: complement.len(), found: b.len() });
    }
    let shift = HermitianOp::real_combination(d, b, complement)?.scale(0.5);
    Ok(HermitianOp::identity(d).scale(1.0 / d as f64).add(&shift))
}

/// Whether `I/d + ½ Σ b_n λ_n` is idempotent (and so a rank-one projector).
pub fn is_rank_one(b: &[f64], complement: &[HermitianOp], d: usize) -> Result<bool> {
    let rho = density_from_coefficients(b, complement, d)?;
    let sq = rho.mul(&rho);
    Ok(sq.max_abs_diff(rho.matrix()) <= IDEMPOTENCE_TOL)
}

/// Qubit NTOP measurement as a pair of orthogonal rank-one projectors
/// `I/2 ± ½ λ_1`.
pub fn projective_ntop_qubit(report: &NtopReport) -> Result<LocalMeasurement> {
    if report.d != 2 {
        return Err(Error::NotQubit { party: report.party.0, dim: report.d });
    }
    if !report.feasible {
        return Err(Error::Infeasible { party: report.party.0 });
    }
    let b = canonical_direction(report);
    let (p1, p2) = ntop_element_pair(2, &report.complement, &b)?;
    let kraus = alloc::vec![p1.matrix().clone(), p2.matrix().clone()];
    LocalMeasurement::new(report.party, alloc::vec![p1, p2])?.with_kraus(kraus)
}
