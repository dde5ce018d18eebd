use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Result;
use crate::ghz::GhzCase;
use crate::ntop::{ntop_check_all, NtopReport, Summary};
use crate::protocol::{one_way_protocol_2xn, simulate_protocol, OneWayProtocol};
use crate::statespace::StateSet;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Conclusion {
    LoccIndistinguishable,
    OneWayDistinguishable,
    Inconclusive,
}

impl Conclusion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Conclusion::LoccIndistinguishable => "LoccIndistinguishable",
            Conclusion::OneWayDistinguishable => "OneWayDistinguishable",
            Conclusion::Inconclusive => "Inconclusive",
        }
    }
}

/// First-round feasibility of one party, without the operator bases.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PartySummary {
    pub party: usize,
    pub d: usize,
    pub t: usize,
    pub r: usize,
    pub feasible: bool,
}

impl From<&NtopReport> for PartySummary {
    fn from(r: &NtopReport) -> Self {
        Self { party: r.party.0, d: r.d, t: r.t, r: r.r, feasible: r.feasible }
    }
}

/// Outcome of sampling first measurements for one party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FalsificationSummary {
    pub first_party: usize,
    pub samples: usize,
    /// Sampled measurements with at least one outcome after which no other
    /// party can go next.
    pub obstructed: usize,
    /// Samples whose first element was built to satisfy a second-round
    /// feasibility condition.
    pub engineered: usize,
    /// Engineered samples whose first outcome indeed admitted a next party.
    pub engineered_outcome_feasible: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Evidence {
    pub first_round: Vec<PartySummary>,
    pub case: Option<GhzCase>,
    /// 0-based index into `x` of the coefficient used as the pivot.
    pub pivot: Option<usize>,
    pub falsification: Vec<FalsificationSummary>,
    pub protocol: Option<OneWayProtocol>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub conclusion: Conclusion,
    pub evidence: Evidence,
}

/// First-round analysis of an arbitrary set, plus the one-way protocol when
/// the set is `2 × n` and a qubit party can go first.
pub fn analyze_set(set: &StateSet, tol: f64) -> Result<Verdict> {
    let analysis = ntop_check_all(set, tol)?;
    let mut evidence =
        Evidence { first_round: analysis.reports.iter().map(PartySummary::from).collect(), ..Evidence::default() };
    let conclusion = match analysis.summary {
        Summary::LoccIndistinguishable => {
            evidence.notes.push("no party can perform an NTOP measurement".into());
            Conclusion::LoccIndistinguishable
        }
        Summary::Inconclusive { .. } => {
            let qubit_first = set.num_parties() == 2 && analysis.reports.iter().any(|r| r.d == 2 && r.feasible);
            if qubit_first {
                let protocol = one_way_protocol_2xn(set, tol)?;
                let all_identified = (0..set.len())
                    .try_fold(true, |acc, i| simulate_protocol(&protocol, set, i, tol).map(|s| acc && s.success))?;
                evidence.protocol = Some(protocol);
                if all_identified {
                    Conclusion::OneWayDistinguishable
                } else {
                    evidence.notes.push("synthesized protocol failed to identify every state".into());
                    Conclusion::Inconclusive
                }
            } else {
                Conclusion::Inconclusive
            }
        }
    };
    Ok(Verdict { conclusion, evidence })
}
