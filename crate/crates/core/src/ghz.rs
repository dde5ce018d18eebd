//! The three-state GHZ family: two GHZ-like states plus an arbitrary state
//! from their orthogonal complement.
//!
//! The indistinguishability argument splits on Alice's first-round count
//! `t_A` and on which of `x₃..x₆` vanish. The coefficients pair up as
//! `(x₃, x₆)` and `(x₄, x₅)`:
//!
//! * **A**: `x₁ ≠ 0` or `x₂ ≠ 0`, so `t_A = 3` and Alice cannot go first.
//! * **B**: `x₁ = x₂ = 0` and some pair has exactly one nonzero member. Any
//!   nontrivial Alice element has a nonzero off-diagonal, which blocks both
//!   Bob and Charlie after that outcome.
//! * **C**: `x₁ = x₂ = 0` and every pair is all-zero or all-nonzero. After each
//!   outcome a next party needs the off-diagonal `⟨0|A_m†A_m|1⟩` fixed to a
//!   common phase, so the off-diagonals cannot sum to zero as completeness
//!   requires.
//!
//! Cases B and C quantify over every measurement, so the verdict attaches
//! sampled measurements as corroboration, not proof.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cases;
use crate::error::{check_tol, Error, Result};
use crate::measurement::LocalMeasurement;
use crate::ntop::{ntop_check_all, NtopReport};
use crate::operator::{ComplexMatrix, HermitianOp, C64};
use crate::protocol::second_round_report;
use crate::statespace::{PartyIndex, StateSet};
use crate::verdict::{Conclusion, Evidence, FalsificationSummary, PartySummary, Verdict};

const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GhzFamilyParams {
    s: C64,
    t: C64,
    x: [C64; 6],
}

impl GhzFamilyParams {
    pub fn new(s: C64, t: C64, x: [C64; 6]) -> Result<Self> {
        let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
        if !finite(&s) || !finite(&t) || !x.iter().all(finite) {
            return Err(Error::NonFinite);
        }
        if ((s.norm_sqr() + t.norm_sqr()) - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidParams("|s|^2 + |t|^2 must equal 1"));
        }
        if (s * t).norm() <= NORMALIZATION_TOL {
            return Err(Error::InvalidParams("s*t must be nonzero"));
        }
        let xs: f64 = x.iter().map(C64::norm_sqr).sum();
        if (xs - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidParams("sum of |x_i|^2 must equal 1"));
        }
        Ok(Self { s, t, x })
    }

    /// `s = t = 1/√2`, `x₃ = 1`.
    pub fn default_example() -> Self {
        let h = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut x = [C64::new(0.0, 0.0); 6];
        x[2] = C64::new(1.0, 0.0);
        Self { s: h, t: h, x }
    }

    pub fn s(&self) -> C64 {
        self.s
    }

    pub fn t(&self) -> C64 {
        self.t
    }

    pub fn x(&self) -> &[C64; 6] {
        &self.x
    }

    pub fn states(&self) -> StateSet {
        cases::ghz3(self)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GhzCase {
    /// `x₁ ≠ 0` or `x₂ ≠ 0`.
    A,
    /// `x₁ = x₂ = 0`, a pivot with a vanishing partner.
    B,
    /// `x₁ = x₂ = 0`, every nonzero pivot has a nonzero partner.
    C,
}

impl GhzCase {
    pub fn label(&self) -> &'static str {
        match self {
            GhzCase::A => "A",
            GhzCase::B => "B",
            GhzCase::C => "C",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            GhzCase::A => "Alice cannot go first (t_A = 3)",
            GhzCase::B => "second-round obstruction: a nontrivial first outcome blocks Bob and Charlie",
            GhzCase::C => "every admissible first measurement contradicts the completeness equation",
        }
    }
}

/// Partner of each pivot among `x₃..x₆` (0-based indices into `x`).
fn partner(i: usize) -> usize {
    match i {
        2 => 5,
        5 => 2,
        3 => 4,
        4 => 3,
        _ => unreachable!("pivots are x3..x6"),
    }
}

/// Case label and pivot (0-based index into `x`); `|x_i| ≤ zero_tol` counts as zero.
pub fn classify(params: &GhzFamilyParams, zero_tol: f64) -> (GhzCase, Option<usize>) {
    let nz = |i: usize| params.x[i].norm() > zero_tol;
    if nz(0) || nz(1) {
        return (GhzCase::A, None);
    }
    let order = [2, 5, 3, 4];
    if let Some(&p) = order.iter().find(|&&i| nz(i) && !nz(partner(i))) {
        return (GhzCase::B, Some(p));
    }
    let pivot = order.iter().copied().find(|&i| nz(i));
    (GhzCase::C, pivot)
}

/// `max(|x₃p + x₆⟨0|E|1⟩|, |x₄p + x₅⟨1|E|0⟩|)` with `p = ⟨0|E|0⟩`; zero iff
/// Bob can go next after an Alice outcome with element `E`.
pub fn bob_condition_residual(params: &GhzFamilyParams, element: &HermitianOp) -> f64 {
    let x = &params.x;
    let p = element.get(0, 0);
    let e01 = element.get(0, 1);
    let e10 = element.get(1, 0);
    (x[2] * p + x[5] * e01).norm().max((x[3] * p + x[4] * e10).norm())
}

/// `max(|x₃⟨1|E|0⟩ + x₆p|, |x₄⟨0|E|1⟩ + x₅p|)`; zero iff Charlie can go next.
pub fn charlie_condition_residual(params: &GhzFamilyParams, element: &HermitianOp) -> f64 {
    let x = &params.x;
    let p = element.get(0, 0);
    let e01 = element.get(0, 1);
    let e10 = element.get(1, 0);
    (x[2] * e10 + x[5] * p).norm().max((x[3] * e01 + x[4] * p).norm())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct FalsificationConfig {
    /// Sampled first measurements per feasible party.
    pub samples: usize,
    pub seed: u64,
}

impl Default for FalsificationConfig {
    fn default() -> Self {
        Self { samples: 40, seed: 0x5eed }
    }
}

/// Random two-outcome NTOP measurement `{w I + κ H, (1 − w) I − κ H}` with
/// `H` in the span of the complement generators.
pub fn random_ntop_measurement<R: Rng>(report: &NtopReport, rng: &mut R) -> Result<LocalMeasurement> {
    if !report.feasible {
        return Err(Error::Infeasible { party: report.party.0 });
    }
    let d = report.d;
    let h = loop {
        let b: Vec<f64> = (0..report.r).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let h = HermitianOp::real_combination(d, &b, &report.complement)?;
        if h.hs_norm() > 1e-3 {
            break h;
        }
    };
    let vals = h.eigenvalues();
    let op_norm = vals.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let w: f64 = rng.gen_range(0.05..0.95);
    let kappa = rng.gen_range(0.1..1.0) * w.min(1.0 - w) / op_norm;
    let e1 = HermitianOp::identity(d).scale(w).add(&h.scale(kappa));
    let e2 = HermitianOp::identity(d).sub(&e1);
    LocalMeasurement::new(report.party, alloc::vec![e1, e2])
}

/// Qubit element `[[p, w], [w*, p]]`.
pub fn alice_element(p: f64, off_diagonal: C64) -> Result<HermitianOp> {
    let conj = off_diagonal.conj();
    HermitianOp::new(ComplexMatrix::from_rows(&[
        alloc::vec![C64::new(p, 0.0), off_diagonal],
        alloc::vec![conj, C64::new(p, 0.0)],
    ])?)
}

/// Alice measurement whose first element satisfies the Bob or Charlie
/// condition for the pivot pair (when that is possible at all).
fn engineered_alice_measurement<R: Rng>(
    params: &GhzFamilyParams,
    pivot: usize,
    rng: &mut R,
) -> Result<LocalMeasurement> {
    let x = &params.x;
    // Candidate ratios w/p for ⟨0|E|1⟩ from each condition on this pair.
    let candidates: [C64; 2] = if pivot == 2 || pivot == 5 {
        // Bob: x3 p + x6 w = 0; Charlie: x3 w* + x6 p = 0
        [-x[2] / x[5], -(x[5] / x[2]).conj()]
    } else {
        // Bob: x4 p + x5 w* = 0; Charlie: x4 w + x5 p = 0
        [-(x[3] / x[4]).conj(), -x[4] / x[3]]
    };
    let ratio = if candidates[0].norm() <= candidates[1].norm() { candidates[0] } else { candidates[1] };
    let p = rng.gen_range(0.3..0.95) / (1.0 + ratio.norm());
    let e1 = alice_element(p, ratio * p)?;
    let e2 = HermitianOp::identity(2).sub(&e1);
    LocalMeasurement::new(PartyIndex(0), alloc::vec![e1, e2])
}

/// Decides the family. Returns [`Conclusion::LoccIndistinguishable`] unless
/// the numerical evidence contradicts the case analysis, in which case the
/// conclusion is [`Conclusion::Inconclusive`] and the notes say why.
pub fn ghz_family_verdict(params: &GhzFamilyParams, tol: f64, config: &FalsificationConfig) -> Result<Verdict> {
    check_tol(tol)?;
    let set = params.states();
    let analysis = ntop_check_all(&set, tol)?;
    let (case, pivot) = classify(params, tol);
    let mut evidence = Evidence {
        first_round: analysis.reports.iter().map(PartySummary::from).collect(),
        case: Some(case),
        pivot,
        ..Evidence::default()
    };
    evidence.notes.push(format!("case {}: {}", case.label(), case.description()));
    let mut consistent = true;

    let t_alice = analysis.reports[0].t;
    let expected_t = if case == GhzCase::A { 3 } else { 1 };
    if t_alice != expected_t {
        consistent = false;
        evidence
            .notes
            .push(format!("computed t_A = {t_alice} disagrees with case {} (expected {expected_t})", case.label()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for report in analysis.reports.iter().filter(|r| r.feasible) {
        let party = report.party;
        let mut summary = FalsificationSummary {
            first_party: party.0,
            samples: 0,
            obstructed: 0,
            engineered: 0,
            engineered_outcome_feasible: 0,
        };
        for k in 0..config.samples {
            let engineer = party.0 == 0 && case == GhzCase::C && pivot.is_some() && k % 2 == 1;
            let meas = if engineer {
                engineered_alice_measurement(params, pivot.unwrap_or(2), &mut rng)?
            } else {
                random_ntop_measurement(report, &mut rng)?
            };
            let outcomes = second_round_report(&set, party, &meas, tol)?;
            summary.samples += 1;
            if outcomes.iter().any(|o| o.dead_end) {
                summary.obstructed += 1;
            }
            if engineer {
                summary.engineered += 1;
                if !outcomes[0].dead_end {
                    summary.engineered_outcome_feasible += 1;
                }
            }
        }
        if summary.obstructed != summary.samples {
            consistent = false;
            evidence.notes.push(format!(
                "{} of {} sampled first measurements by party {} left every outcome open",
                summary.samples - summary.obstructed,
                summary.samples,
                party.0
            ));
        }
        evidence.falsification.push(summary);
    }
    if analysis.reports.iter().all(|r| !r.feasible) {
        evidence.notes.push("no party can perform an NTOP measurement".into());
    }

    let conclusion = if consistent { Conclusion::LoccIndistinguishable } else { Conclusion::Inconclusive };
    Ok(Verdict { conclusion, evidence })
}
