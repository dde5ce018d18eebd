//! JSON interchange formats. Complex numbers are `[re, im]` pairs; amplitude
//! vectors are flattened row-major with party 0 as the most significant index.

use std::path::Path;

use ntop_core::ghz::GhzFamilyParams;
use ntop_core::protocol::{OneWayProtocol, SecondRoundOutcome, SimulationRecord};
use ntop_core::verdict::{FalsificationSummary, PartySummary, Verdict};
use ntop_core::{ComplexMatrix, LocalMeasurement, NtopReport, StateSet, Summary, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

pub type Complex = [f64; 2];
pub type Matrix = Vec<Vec<Complex>>;

fn to_pair(z: C64) -> Complex {
    [z.re, z.im]
}

fn from_pair(p: &Complex) -> C64 {
    C64::new(p[0], p[1])
}

fn matrix_doc(m: &ComplexMatrix) -> Matrix {
    m.rows().iter().map(|row| row.iter().copied().map(to_pair).collect()).collect()
}

fn matrix_from_doc(m: &Matrix) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<C64>> = m.iter().map(|row| row.iter().map(from_pair).collect()).collect();
    Ok(ComplexMatrix::from_rows(&rows)?)
}

fn check_version(path: &Path, found: u32) -> Result<(), CliError> {
    if found != FORMAT_VERSION {
        return Err(CliError::Version { path: path.to_owned(), found, expected: FORMAT_VERSION });
    }
    Ok(())
}

/// Parses `text` as `T`, attributing errors to `path`.
pub fn parse<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|source| CliError::Json { path: path.to_owned(), source })
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub amplitudes: Vec<Complex>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSetDocument {
    pub format_version: u32,
    pub dims: Vec<usize>,
    pub states: Vec<StateDocument>,
}

impl StateSetDocument {
    pub fn from_set(set: &StateSet) -> Self {
        let states = set
            .states()
            .iter()
            .zip(set.names())
            .map(|(amps, name)| StateDocument {
                name: name.clone(),
                amplitudes: amps.iter().copied().map(to_pair).collect(),
            })
            .collect();
        Self { format_version: FORMAT_VERSION, dims: set.dims().to_vec(), states }
    }

    pub fn into_set(self, path: &Path) -> Result<StateSet, CliError> {
        check_version(path, self.format_version)?;
        let expected: usize = self.dims.iter().product();
        for (i, s) in self.states.iter().enumerate() {
            if s.amplitudes.len() != expected {
                let state = s.name.clone().unwrap_or_else(|| format!("#{i}"));
                return Err(CliError::AmplitudeCount { state, found: s.amplitudes.len(), expected });
            }
        }
        let names = self.states.iter().map(|s| s.name.clone()).collect();
        let states = self.states.iter().map(|s| s.amplitudes.iter().map(from_pair).collect()).collect();
        Ok(StateSet::new(self.dims, states)?.with_names(names)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementDocument {
    pub format_version: u32,
    pub party: usize,
    pub elements: Vec<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<Matrix>>,
}

impl MeasurementDocument {
    pub fn from_measurement(m: &LocalMeasurement) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            party: m.party().0,
            elements: m.elements().iter().map(|e| matrix_doc(e.matrix())).collect(),
            kraus: m.explicit_kraus().map(|k| k.iter().map(matrix_doc).collect()),
        }
    }

    pub fn into_measurement(self, path: &Path) -> Result<LocalMeasurement, CliError> {
        check_version(path, self.format_version)?;
        let elements = self
            .elements
            .iter()
            .map(|m| Ok(ntop_core::HermitianOp::new(matrix_from_doc(m)?)?))
            .collect::<Result<Vec<_>, CliError>>()?;
        let meas = LocalMeasurement::new(ntop_core::PartyIndex(self.party), elements)?;
        match self.kraus {
            Some(k) => {
                let kraus = k.iter().map(matrix_from_doc).collect::<Result<Vec<_>, _>>()?;
                Ok(meas.with_kraus(kraus)?)
            }
            None => Ok(meas),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GhzParamsDocument {
    pub format_version: u32,
    pub s: Complex,
    pub t: Complex,
    pub x: [Complex; 6],
}

impl GhzParamsDocument {
    pub fn from_params(p: &GhzFamilyParams) -> Self {
        Self { format_version: FORMAT_VERSION, s: to_pair(p.s()), t: to_pair(p.t()), x: p.x().map(to_pair) }
    }

    pub fn into_params(self, path: &Path) -> Result<GhzFamilyParams, CliError> {
        check_version(path, self.format_version)?;
        Ok(GhzFamilyParams::new(from_pair(&self.s), from_pair(&self.t), self.x.map(|p| from_pair(&p)))?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartyDocument {
    pub party: usize,
    pub d: usize,
    pub t: usize,
    pub r: usize,
    pub feasible: bool,
}

impl From<&NtopReport> for PartyDocument {
    fn from(r: &NtopReport) -> Self {
        Self::from(&PartySummary::from(r))
    }
}

impl From<&PartySummary> for PartyDocument {
    fn from(r: &PartySummary) -> Self {
        Self { party: r.party, d: r.d, t: r.t, r: r.r, feasible: r.feasible }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchDocument {
    pub alice_outcome: usize,
    pub measurement: MeasurementDocument,
    /// `null` marks the remainder projector.
    pub outcome_to_state: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchRecordDocument {
    pub alice_outcome: usize,
    pub bob_outcome: usize,
    pub probability: f64,
    pub reachable: bool,
    pub identified: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationDocument {
    pub state_index: usize,
    pub total_probability: f64,
    pub success_probability: f64,
    pub success: bool,
    pub branches: Vec<BranchRecordDocument>,
}

impl From<&SimulationRecord> for SimulationDocument {
    fn from(s: &SimulationRecord) -> Self {
        Self {
            state_index: s.state_index,
            total_probability: s.total_probability,
            success_probability: s.success_probability,
            success: s.success,
            branches: s
                .branches
                .iter()
                .map(|b| BranchRecordDocument {
                    alice_outcome: b.alice_outcome,
                    bob_outcome: b.bob_outcome,
                    probability: b.probability,
                    reachable: b.reachable,
                    identified: b.identified,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolDocument {
    pub alice_party: usize,
    pub bob_party: usize,
    pub alice: MeasurementDocument,
    pub bob_branches: Vec<BranchDocument>,
    pub simulation: Vec<SimulationDocument>,
}

impl ProtocolDocument {
    pub fn new(p: &OneWayProtocol, simulation: &[SimulationRecord]) -> Self {
        Self {
            alice_party: p.alice_party.0,
            bob_party: p.bob_party.0,
            alice: MeasurementDocument::from_measurement(&p.alice),
            bob_branches: p
                .bob_branches
                .iter()
                .map(|b| BranchDocument {
                    alice_outcome: b.alice_outcome,
                    measurement: MeasurementDocument::from_measurement(&b.measurement),
                    outcome_to_state: b.outcome_to_state.clone(),
                })
                .collect(),
            simulation: simulation.iter().map(SimulationDocument::from).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondRoundDocument {
    pub outcome: usize,
    pub zero_flags: Vec<bool>,
    pub parties: Vec<PartyDocument>,
    pub dead_end: bool,
}

impl From<&SecondRoundOutcome> for SecondRoundDocument {
    fn from(o: &SecondRoundOutcome) -> Self {
        Self {
            outcome: o.outcome.outcome,
            zero_flags: o.outcome.zero_flags.clone(),
            parties: o.reports.iter().map(PartyDocument::from).collect(),
            dead_end: o.dead_end,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FalsificationDocument {
    pub first_party: usize,
    pub samples: usize,
    pub obstructed: usize,
    pub engineered: usize,
    pub engineered_outcome_feasible: usize,
}

impl From<&FalsificationSummary> for FalsificationDocument {
    fn from(f: &FalsificationSummary) -> Self {
        Self {
            first_party: f.first_party,
            samples: f.samples,
            obstructed: f.obstructed,
            engineered: f.engineered,
            engineered_outcome_feasible: f.engineered_outcome_feasible,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub conclusion: String,
    pub case: Option<String>,
    /// 1-based `x` index of the pivot coefficient.
    pub pivot: Option<usize>,
    pub falsification: Vec<FalsificationDocument>,
    pub notes: Vec<String>,
}

impl From<&Verdict> for VerdictDocument {
    fn from(v: &Verdict) -> Self {
        Self {
            conclusion: v.conclusion.as_str().to_string(),
            case: v.evidence.case.map(|c| c.label().to_string()),
            pivot: v.evidence.pivot.map(|p| p + 1),
            falsification: v.evidence.falsification.iter().map(FalsificationDocument::from).collect(),
            notes: v.evidence.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub format_version: u32,
    pub tool_version: String,
    pub tolerance: f64,
    pub dims: Vec<usize>,
    pub parties: Vec<PartyDocument>,
    pub summary: String,
    pub feasible_parties: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement: Option<MeasurementDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protocol: Option<ProtocolDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_round: Option<Vec<SecondRoundDocument>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictDocument>,
}

impl ReportDocument {
    pub fn new(dims: &[usize], tolerance: f64, reports: &[PartyDocument]) -> Self {
        let feasible_parties: Vec<usize> = reports.iter().filter(|r| r.feasible).map(|r| r.party).collect();
        let summary = if feasible_parties.is_empty() {
            Summary::LoccIndistinguishable
        } else {
            Summary::Inconclusive { feasible_parties: feasible_parties.clone() }
        };
        Self {
            format_version: FORMAT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            tolerance,
            dims: dims.to_vec(),
            parties: reports.to_vec(),
            summary: summary_label(&summary).to_string(),
            feasible_parties,
            measurement: None,
            protocol: None,
            second_round: None,
            verdict: None,
        }
    }
}

pub fn summary_label(s: &Summary) -> &'static str {
    match s {
        Summary::LoccIndistinguishable => "LoccIndistinguishable",
        Summary::Inconclusive { .. } => "Inconclusive",
    }
}
