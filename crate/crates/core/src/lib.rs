//! Local distinguishability analysis for sets of mutually orthogonal
//! multipartite pure states.
//!
//! A party can open an LOCC discrimination protocol only with a local
//! measurement that is nontrivial and orthogonality-preserving (NTOP). For a
//! party of dimension `d` this is possible iff the operators
//! `Γ_ij = Tr_ā(|φ_i⟩⟨φ_j| + h.c.)` and `Δ_ij = Tr_ā(i|φ_i⟩⟨φ_j| + h.c.)`
//! span fewer than `d² − 1` real dimensions. If no party can go first, the
//! set cannot be distinguished by LOCC.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cases;
pub mod error;
pub mod generators;
pub mod ghz;
pub mod measurement;
pub mod ntop;
pub mod operator;
pub mod oracle;
pub mod protocol;
pub mod statespace;
pub mod verdict;

pub use error::{Error, Result};
pub use generators::{complete_to_generator_basis, gell_mann_basis, gram_schmidt_hs, GeneratorBasis};
pub use ghz::{ghz_family_verdict, FalsificationConfig, GhzCase, GhzFamilyParams};
pub use measurement::{verify_orthogonality_preserving, LocalMeasurement, PreservationReport};
pub use ntop::{
    construct_ntop_povm, is_rank_one, ntop_check, ntop_check_all, projective_ntop_qubit, NtopAnalysis, NtopReport,
    Summary,
};
pub use operator::{hs_inner, ComplexMatrix, HermitianOp, C64};
pub use oracle::ntop_oracle;
pub use protocol::{
    apply_local_kraus, one_way_protocol_2xn, second_round_report, simulate_protocol, OneWayProtocol, ResidualOutcome,
    SecondRoundOutcome, SimulationRecord,
};
pub use statespace::{
    amplitude_index, check_mutual_orthogonality, gamma_delta, reduced_cross, GammaDeltaFamily, OrthogonalityReport,
    PartyIndex, StateSet,
};
pub use verdict::{analyze_set, Conclusion, Evidence, Verdict};

/// Default numerical-rank and orthogonality tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Allowed deviation from Hermiticity, relative to `max(1, ‖M‖_HS)`.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Smallest eigenvalue a POVM element may have.
pub const PSD_TOL: f64 = 1e-9;
/// Entrywise tolerance on `Σ_m E_m = I`.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Max-norm tolerance on `ρ² = ρ`.
pub const IDEMPOTENCE_TOL: f64 = 1e-8;
