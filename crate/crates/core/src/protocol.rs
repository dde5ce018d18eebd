//! Residual sets after a first local measurement, and the one-way protocol
//! for `2 × n` systems.

use alloc::vec::Vec;

use crate::error::{check_tol, Error, Result};
use crate::measurement::{verify_orthogonality_preserving, LocalMeasurement};
use crate::ntop::{ntop_check, projective_ntop_qubit, NtopReport};
use crate::operator::{ComplexMatrix, HermitianOp, C64, ZERO};
use crate::statespace::{apply_local_operator, inner, layout, norm, PartyIndex, StateSet};

/// The unnormalized states `{M_m|φ_i⟩}` left after outcome `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualOutcome {
    pub outcome: usize,
    pub residual: StateSet,
    /// `true` where `M_m|φ_i⟩` vanished (norm ≤ tol).
    pub zero_flags: Vec<bool>,
}

/// Applies `kraus` to `party` of every state. The returned outcome index is 0.
pub fn apply_local_kraus(
    set: &StateSet,
    party: PartyIndex,
    kraus: &ComplexMatrix,
    tol: f64,
) -> Result<ResidualOutcome> {
    check_tol(tol)?;
    let d = set.local_dim(party)?;
    if kraus.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: kraus.dim() });
    }
    let states: Vec<Vec<C64>> =
        set.states().iter().map(|s| apply_local_operator(s, set.dims(), party, kraus)).collect::<Result<_>>()?;
    let zero_flags = states.iter().map(|s| norm(s) <= tol).collect();
    let residual = StateSet::new(set.dims().to_vec(), states)?.with_names(set.names().to_vec())?;
    Ok(ResidualOutcome { outcome: 0, residual, zero_flags })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecondRoundOutcome {
    pub outcome: ResidualOutcome,
    /// One report per party other than the first measurer, in party order.
    pub reports: Vec<NtopReport>,
    /// No other party can perform an NTOP measurement on this residual set.
    pub dead_end: bool,
}

/// For each outcome of `meas`, checks which of the remaining parties could
/// perform the next NTOP measurement.
pub fn second_round_report(
    set: &StateSet,
    first_party: PartyIndex,
    meas: &LocalMeasurement,
    tol: f64,
) -> Result<Vec<SecondRoundOutcome>> {
    check_tol(tol)?;
    if meas.party() != first_party {
        return Err(Error::IndexOutOfRange { index: meas.party().0, bound: first_party.0 + 1 });
    }
    let pres = verify_orthogonality_preserving(meas, set, tol)?;
    if !pres.ok {
        let (element, i, j) = pres.worst.unwrap_or((0, 0, 0));
        return Err(Error::NotOrthogonalityPreserving { element, i, j, overlap: pres.worst_overlap });
    }
    let kraus = meas.kraus_operators()?;
    let mut out = Vec::with_capacity(kraus.len());
    for (m, a) in kraus.iter().enumerate() {
        let mut outcome = apply_local_kraus(set, first_party, a, tol)?;
        outcome.outcome = m;
        let reports = (0..set.num_parties())
            .filter(|&p| p != first_party.0)
            .map(|p| ntop_check(&outcome.residual, PartyIndex(p), tol))
            .collect::<Result<Vec<_>>>()?;
        let dead_end = !reports.iter().any(|r| r.feasible);
        out.push(SecondRoundOutcome { outcome, reports, dead_end });
    }
    Ok(out)
}

/// Bob's measurement conditioned on one of Alice's outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct BobBranch {
    pub alice_outcome: usize,
    pub measurement: LocalMeasurement,
    /// State identified by each Bob outcome; `None` marks the remainder
    /// projector, which no candidate state can reach.
    pub outcome_to_state: Vec<Option<usize>>,
}

/// Alice measures her qubit projectively, announces the result, and Bob
/// finishes with a conditional projective measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct OneWayProtocol {
    pub dims: Vec<usize>,
    pub alice_party: PartyIndex,
    pub bob_party: PartyIndex,
    pub alice: LocalMeasurement,
    /// `|α_k⟩` with `P_k = |α_k⟩⟨α_k|`.
    pub alice_vectors: Vec<Vec<C64>>,
    pub bob_branches: Vec<BobBranch>,
}

/// `(⟨α| ⊗ I)|φ⟩` for a bipartite state, contracting `alice`.
fn conditional_state(state: &[C64], dims: &[usize], alice: usize, alpha: &[C64]) -> Vec<C64> {
    let (outer, d, inner) = layout(dims, alice);
    let n = outer * inner;
    let mut out = alloc::vec![ZERO; n];
    for o in 0..outer {
        for a in 0..d {
            let w = alpha[a].conj();
            for r in 0..inner {
                out[o * inner + r] += w * state[o * d * inner + a * inner + r];
            }
        }
    }
    out
}

/// Synthesizes the one-way protocol for a bipartite set where one side is a
/// qubit that can go first. Party 0 is tried before party 1.
pub fn one_way_protocol_2xn(set: &StateSet, tol: f64) -> Result<OneWayProtocol> {
    check_tol(tol)?;
    if set.num_parties() != 2 {
        return Err(Error::NotBipartite(set.num_parties()));
    }
    let candidates: Vec<usize> = (0..2).filter(|&p| set.dims()[p] == 2).collect();
    if candidates.is_empty() {
        return Err(Error::NoQubitParty);
    }
    let mut chosen = None;
    for &p in &candidates {
        let report = ntop_check(set, PartyIndex(p), tol)?;
        if report.feasible {
            chosen = Some(report);
            break;
        }
    }
    let report = chosen.ok_or(Error::Infeasible { party: candidates[0] })?;
    let alice_party = report.party;
    let bob_party = PartyIndex(1 - alice_party.0);
    let alice = projective_ntop_qubit(&report)?;
    let bob_dim = set.dims()[bob_party.0];

    let mut alice_vectors = Vec::with_capacity(2);
    let mut bob_branches = Vec::with_capacity(2);
    for (k, element) in alice.elements().iter().enumerate() {
        let pairs = element.eigenpairs();
        let alpha = pairs.last().map(|p| p.1.clone()).ok_or(Error::NumericalBreakdown("empty eigensystem"))?;
        let conditionals: Vec<Vec<C64>> =
            set.states().iter().map(|s| conditional_state(s, set.dims(), alice_party.0, &alpha)).collect();
        let norms: Vec<f64> = conditionals.iter().map(|v| norm(v)).collect();
        for i in 0..conditionals.len() {
            for j in i + 1..conditionals.len() {
                let overlap = inner(&conditionals[i], &conditionals[j]).norm();
                if overlap > tol * (norms[i] * norms[j]).max(1.0) {
                    return Err(Error::ConditionalOrthogonality { outcome: k, i, j, overlap });
                }
            }
        }

        // Orthonormalize the surviving conditional states; they are already
        // orthogonal to tolerance.
        let mut basis: Vec<Vec<C64>> = Vec::new();
        let mut outcome_to_state = Vec::new();
        for (i, v) in conditionals.iter().enumerate() {
            if norms[i] <= tol * set.norm(i).max(1.0) {
                continue;
            }
            let mut u = v.clone();
            for b in &basis {
                let c = inner(b, &u);
                for (x, y) in u.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
            let len = norm(&u);
            u.iter_mut().for_each(|x| *x /= len);
            basis.push(u);
            outcome_to_state.push(Some(i));
        }
        let mut elements: Vec<HermitianOp> =
            basis.iter().map(|u| HermitianOp::new(ComplexMatrix::outer(u, u)?)).collect::<Result<_>>()?;
        let covered = elements.iter().fold(HermitianOp::zeros(bob_dim), |acc, e| acc.add(e));
        let remainder = HermitianOp::identity(bob_dim).sub(&covered);
        if remainder.hs_norm() > tol {
            elements.push(remainder);
            outcome_to_state.push(None);
        }
        let kraus: Vec<ComplexMatrix> = elements.iter().map(|e| e.matrix().clone()).collect();
        let measurement = LocalMeasurement::new(bob_party, elements)?.with_kraus(kraus)?;
        alice_vectors.push(alpha);
        bob_branches.push(BobBranch { alice_outcome: k, measurement, outcome_to_state });
    }
    Ok(OneWayProtocol { dims: set.dims().to_vec(), alice_party, bob_party, alice, alice_vectors, bob_branches })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchRecord {
    pub alice_outcome: usize,
    pub bob_outcome: usize,
    pub probability: f64,
    pub reachable: bool,
    /// Identified state on reachable branches.
    pub identified: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationRecord {
    pub state_index: usize,
    pub branches: Vec<BranchRecord>,
    pub total_probability: f64,
    /// Probability mass of branches that identify `state_index`.
    pub success_probability: f64,
    /// Every reachable branch identifies `state_index`.
    pub success: bool,
}

/// Enumerates every (Alice, Bob) outcome pair with its exact probability.
/// Branches with probability at most `tol` are marked unreachable.
pub fn simulate_protocol(
    protocol: &OneWayProtocol,
    set: &StateSet,
    state_index: usize,
    tol: f64,
) -> Result<SimulationRecord> {
    check_tol(tol)?;
    if set.dims() != protocol.dims.as_slice() {
        let expected = protocol.dims.iter().product();
        return Err(Error::DimensionMismatch { expected, found: set.total_dim() });
    }
    let phi = set.state(state_index)?;
    let norm_sq = norm(phi) * norm(phi);
    if norm_sq == 0.0 {
        return Err(Error::InvalidStateSet("cannot simulate a zero state"));
    }
    let mut branches = Vec::new();
    for (k, p_k) in protocol.alice.elements().iter().enumerate() {
        let after_alice = apply_local_operator(phi, set.dims(), protocol.alice_party, p_k.matrix())?;
        let branch = &protocol.bob_branches[k];
        for (j, q_j) in branch.measurement.elements().iter().enumerate() {
            let after_bob = apply_local_operator(&after_alice, set.dims(), protocol.bob_party, q_j.matrix())?;
            let n = norm(&after_bob);
            let probability = n * n / norm_sq;
            let reachable = probability > tol;
            let identified = if reachable { branch.outcome_to_state[j] } else { None };
            branches.push(BranchRecord { alice_outcome: k, bob_outcome: j, probability, reachable, identified });
        }
    }
    let total_probability = branches.iter().map(|b| b.probability).sum();
    let success_probability =
        branches.iter().filter(|b| b.identified == Some(state_index)).map(|b| b.probability).sum();
    let success = branches.iter().filter(|b| b.reachable).all(|b| b.identified == Some(state_index));
    Ok(SimulationRecord { state_index, branches, total_probability, success_probability, success })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_kraus_keeps_states() {
        let set = StateSet::new(vec![2, 2], vec![vec![c(1.0), ZERO, ZERO, ZERO]]).unwrap();
        let out = apply_local_kraus(&set, PartyIndex(0), &ComplexMatrix::identity(2), 1e-9).unwrap();
        assert_eq!(out.residual, set);
        assert_eq!(out.zero_flags, vec![false]);
    }

    #[test]
    fn projector_flags_annihilated_state() {
        // |00>, |10> with |0><0| on party 0
        let set =
            StateSet::new(vec![2, 2], vec![vec![c(1.0), ZERO, ZERO, ZERO], vec![ZERO, ZERO, c(1.0), ZERO]]).unwrap();
        let p0 = HermitianOp::identity(2).add(&HermitianOp::pauli_z()).scale(0.5).into_matrix();
        let out = apply_local_kraus(&set, PartyIndex(0), &p0, 1e-9).unwrap();
        assert_eq!(out.zero_flags, vec![false, true]);
        assert!(apply_local_kraus(&set, PartyIndex(0), &ComplexMatrix::identity(3), 1e-9).is_err());
    }

    #[test]
    fn product_pair_protocol() {
        // |00>, |01>
        let set =
            StateSet::new(vec![2, 2], vec![vec![c(1.0), ZERO, ZERO, ZERO], vec![ZERO, c(1.0), ZERO, ZERO]]).unwrap();
        let protocol = one_way_protocol_2xn(&set, 1e-9).unwrap();
        for i in 0..2 {
            let sim = simulate_protocol(&protocol, &set, i, 1e-9).unwrap();
            assert!(sim.success);
            assert!((sim.success_probability - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn protocol_shape_errors() {
        let single = StateSet::new(vec![4], vec![vec![c(1.0), ZERO, ZERO, ZERO]]).unwrap();
        assert_eq!(one_way_protocol_2xn(&single, 1e-9).unwrap_err(), Error::NotBipartite(1));
        let no_qubit = StateSet::new(vec![3, 3], vec![vec![c(1.0); 9]]).unwrap();
        assert_eq!(one_way_protocol_2xn(&no_qubit, 1e-9).unwrap_err(), Error::NoQubitParty);
    }
}
