use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use ntop_core::ntop::{canonical_direction, povm_coefficient_bound};
use ntop_core::{
    cases, check_mutual_orthogonality, construct_ntop_povm, ghz_family_verdict, ntop_check_all, one_way_protocol_2xn,
    second_round_report, simulate_protocol, verify_orthogonality_preserving, ComplexMatrix, FalsificationConfig,
    LocalMeasurement, NtopReport, PartyIndex, StateSet, Summary, C64,
};

use crate::document::{
    self, GhzParamsDocument, MeasurementDocument, PartyDocument, ProtocolDocument, ReportDocument, SecondRoundDocument,
    StateSetDocument, VerdictDocument,
};
use crate::error::CliError;
use crate::{Cli, Command};

pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let mut text = String::new();
        let res = if path == Path::new("-") {
            self.stdin.read_to_string(&mut text).map(|_| ())
        } else {
            std::fs::read_to_string(path).map(|t| text = t)
        };
        res.map_err(|source| CliError::Read { path: path.to_owned(), source })?;
        Ok(text)
    }

    fn print(&mut self, text: &str) -> Result<(), CliError> {
        self.stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write { path: PathBuf::from("<stdout>"), source })
    }

    /// Writes `text` to `path`, or to standard output for `-`.
    fn emit(&mut self, path: &Path, text: &str) -> Result<(), CliError> {
        if path == Path::new("-") {
            return self.print(text);
        }
        std::fs::write(path, text).map_err(|source| CliError::Write { path: path.to_owned(), source })
    }

    fn load_set(&mut self, path: &Path) -> Result<StateSet, CliError> {
        let doc: StateSetDocument = document::parse(path, &self.read(path)?)?;
        doc.into_set(path)
    }
}

pub fn execute(cli: &Cli, io: &mut Io) -> Result<(), CliError> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Invalid(format!("--tol must be positive and finite, got {tol}")));
    }
    match &cli.command {
        Command::Check { input, json } => check(io, input, json.as_deref(), tol),
        Command::ConstructPovm { input, party, direction, json, emit } => {
            construct_povm(io, input, *party, direction.as_deref(), json.as_deref(), emit.as_deref(), tol)
        }
        Command::OneWay { input, json } => one_way(io, input, json.as_deref(), tol),
        Command::SecondRound { input, party, measurement, json } => {
            second_round(io, input, *party, measurement, json.as_deref(), tol)
        }
        Command::GhzVerdict { params, samples, seed, json } => {
            let config = FalsificationConfig { samples: *samples, seed: *seed };
            ghz_verdict(io, params, &config, json.as_deref(), tol)
        }
        Command::Examples { name } => examples(io, name.as_deref()),
    }
}

fn require_orthogonal(set: &StateSet, tol: f64) -> Result<(), CliError> {
    let rep = check_mutual_orthogonality(set, tol);
    if rep.ok {
        return Ok(());
    }
    let (i, j) = rep.worst_pair.unwrap_or((0, 0));
    Err(CliError::NotOrthogonal { i, j, overlap: rep.worst_overlap })
}

fn require_party(set: &StateSet, party: usize) -> Result<PartyIndex, CliError> {
    if party >= set.num_parties() {
        return Err(CliError::Invalid(format!(
            "party {party} does not exist (the set has {} parties)",
            set.num_parties()
        )));
    }
    Ok(PartyIndex(party))
}

fn state_label(set: &StateSet, i: usize) -> String {
    match &set.names()[i] {
        Some(name) => format!("{i} ({name})"),
        None => i.to_string(),
    }
}

fn party_line(r: &PartyDocument, verdict_word: &str) -> String {
    let status = if r.feasible { "NTOP feasible".to_string() } else { format!("cannot go {verdict_word}") };
    format!("party {} (d = {}): t = {}, d²−1 = {}, r = {} — {status}\n", r.party, r.d, r.t, r.d * r.d - 1, r.r)
}

fn summary_line(summary: &Summary) -> String {
    match summary {
        Summary::LoccIndistinguishable => {
            "summary: LoccIndistinguishable — no party can perform an NTOP measurement\n".to_string()
        }
        Summary::Inconclusive { feasible_parties } => {
            let list: Vec<String> = feasible_parties.iter().map(usize::to_string).collect();
            format!("summary: Inconclusive — NTOP feasible parties: {}\n", list.join(", "))
        }
    }
}

fn fmt_complex(z: C64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn fmt_matrix(m: &ComplexMatrix, indent: &str) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|z| format!("{:>22}", fmt_complex(*z))).collect();
        let _ = writeln!(out, "{indent}[{} ]", cells.join(""));
    }
    out
}

/// Rounds away the last few ulps so exact probabilities print as `1.0`.
fn fmt_probability(p: f64) -> String {
    format!("{:?}", (p * 1e12).round() / 1e12)
}

fn party_docs(reports: &[NtopReport]) -> Vec<PartyDocument> {
    reports.iter().map(PartyDocument::from).collect()
}

fn header(set: &StateSet, tol: f64) -> String {
    format!("{} states on dims {:?} (tolerance {tol:e})\n", set.len(), set.dims())
}

fn check(io: &mut Io, input: &Path, json: Option<&Path>, tol: f64) -> Result<(), CliError> {
    let set = io.load_set(input)?;
    require_orthogonal(&set, tol)?;
    let analysis = ntop_check_all(&set, tol)?;
    let parties = party_docs(&analysis.reports);
    let mut text = header(&set, tol);
    for p in &parties {
        text.push_str(&party_line(p, "first"));
    }
    text.push_str(&summary_line(&analysis.summary));
    finish(io, text, json, &ReportDocument::new(set.dims(), tol, &parties))
}

/// Prints `text` unless the JSON report goes to standard output instead.
fn finish(io: &mut Io, text: String, json: Option<&Path>, report: &ReportDocument) -> Result<(), CliError> {
    match json {
        Some(path) if path == Path::new("-") => io.print(&document::to_json(report)),
        Some(path) => {
            io.print(&text)?;
            io.emit(path, &document::to_json(report))
        }
        None => io.print(&text),
    }
}

fn describe_measurement(meas: &LocalMeasurement, text: &mut String) {
    for (m, e) in meas.elements().iter().enumerate() {
        let _ = writeln!(text, "element {}:", m + 1);
        text.push_str(&fmt_matrix(e.matrix(), "  "));
    }
}

fn construct_povm(
    io: &mut Io,
    input: &Path,
    party: usize,
    direction: Option<&[f64]>,
    json: Option<&Path>,
    emit: Option<&Path>,
    tol: f64,
) -> Result<(), CliError> {
    let set = io.load_set(input)?;
    require_orthogonal(&set, tol)?;
    let party = require_party(&set, party)?;
    let analysis = ntop_check_all(&set, tol)?;
    let report = &analysis.reports[party.0];
    let pdoc = PartyDocument::from(report);
    if !report.feasible {
        return Err(CliError::Infeasible(format!(
            "party {} cannot go first: t = {} = d²−1, so no NTOP measurement exists",
            party.0, report.t
        )));
    }
    let direction = match direction {
        Some(d) => d.to_vec(),
        None => canonical_direction(report),
    };
    let meas = construct_ntop_povm(report, &direction)?;
    let pres = verify_orthogonality_preserving(&meas, &set, tol)?;

    let mut text = header(&set, tol);
    text.push_str(&party_line(&pdoc, "first"));
    let _ = writeln!(text, "coefficient norm √(2/(d²−d)) = {}", povm_coefficient_bound(report.d));
    describe_measurement(&meas, &mut text);
    let _ = writeln!(
        text,
        "completeness residual {:e}, min eigenvalue {:e}",
        meas.completeness_residual(),
        meas.min_eigenvalue()
    );
    let _ = writeln!(
        text,
        "orthogonality-preserving: {} (worst overlap {:e}), nontrivial: {}",
        if pres.ok { "yes" } else { "NO" },
        pres.worst_overlap,
        if pres.trivial { "NO" } else { "yes" }
    );
    if !pres.ok || pres.trivial {
        return Err(CliError::Defect("constructed measurement failed its own contract".into()));
    }

    let mdoc = MeasurementDocument::from_measurement(&meas);
    if let Some(path) = emit {
        io.emit(path, &document::to_json(&mdoc))?;
    }
    let mut doc = ReportDocument::new(set.dims(), tol, &party_docs(&analysis.reports));
    doc.measurement = Some(mdoc);
    finish(io, text, json, &doc)
}

fn one_way(io: &mut Io, input: &Path, json: Option<&Path>, tol: f64) -> Result<(), CliError> {
    let set = io.load_set(input)?;
    require_orthogonal(&set, tol)?;
    let analysis = ntop_check_all(&set, tol)?;
    let protocol = one_way_protocol_2xn(&set, tol)?;
    let sims = (0..set.len()).map(|i| simulate_protocol(&protocol, &set, i, tol)).collect::<Result<Vec<_>, _>>()?;

    let mut text = header(&set, tol);
    let _ = writeln!(
        text,
        "Alice = party {} measures first; Bob = party {} finishes",
        protocol.alice_party.0, protocol.bob_party.0
    );
    for (k, (p, branch)) in protocol.alice.elements().iter().zip(&protocol.bob_branches).enumerate() {
        let _ = writeln!(text, "Alice outcome {k}: projector");
        text.push_str(&fmt_matrix(p.matrix(), "  "));
        for (j, target) in branch.outcome_to_state.iter().enumerate() {
            match target {
                Some(i) => {
                    let _ = writeln!(text, "  Bob outcome {j} → state {}", state_label(&set, *i));
                }
                None => {
                    let _ = writeln!(text, "  Bob outcome {j} → remainder (unreachable)");
                }
            }
        }
    }
    for sim in &sims {
        for b in sim.branches.iter().filter(|b| b.reachable) {
            let id = b.identified.map_or("nothing".to_string(), |i| i.to_string());
            let _ = writeln!(
                text,
                "  state {}: Alice {}, Bob {} with probability {} → identifies {id}",
                sim.state_index,
                b.alice_outcome,
                b.bob_outcome,
                fmt_probability(b.probability)
            );
        }
        let _ = writeln!(
            text,
            "state {}: success probability {}",
            state_label(&set, sim.state_index),
            fmt_probability(sim.success_probability)
        );
    }
    if let Some(bad) = sims.iter().find(|s| !s.success) {
        return Err(CliError::Defect(format!("protocol failed to identify state {}", bad.state_index)));
    }

    let mut doc = ReportDocument::new(set.dims(), tol, &party_docs(&analysis.reports));
    doc.protocol = Some(ProtocolDocument::new(&protocol, &sims));
    finish(io, text, json, &doc)
}

fn second_round(
    io: &mut Io,
    input: &Path,
    party: usize,
    measurement: &Path,
    json: Option<&Path>,
    tol: f64,
) -> Result<(), CliError> {
    let set = io.load_set(input)?;
    require_orthogonal(&set, tol)?;
    let party = require_party(&set, party)?;
    let mdoc: MeasurementDocument = document::parse(measurement, &io.read(measurement)?)?;
    let meas = mdoc.into_measurement(measurement)?;
    if meas.party() != party {
        return Err(CliError::Invalid(format!(
            "measurement acts on party {}, but --party is {}",
            meas.party().0,
            party.0
        )));
    }
    let d = set.local_dim(party)?;
    if meas.dim() != d {
        return Err(CliError::Dimension(format!(
            "measurement is {}-dimensional, party {} has dimension {d}",
            meas.dim(),
            party.0
        )));
    }
    let analysis = ntop_check_all(&set, tol)?;
    let outcomes = second_round_report(&set, party, &meas, tol)?;

    let mut text = header(&set, tol);
    let _ = writeln!(text, "first measurement by party {} with {} outcomes", party.0, outcomes.len());
    let docs: Vec<SecondRoundDocument> = outcomes.iter().map(SecondRoundDocument::from).collect();
    for o in &docs {
        let zeros: Vec<String> =
            o.zero_flags.iter().enumerate().filter(|(_, z)| **z).map(|(i, _)| i.to_string()).collect();
        let zeros = if zeros.is_empty() { "none".to_string() } else { zeros.join(", ") };
        let _ = writeln!(text, "outcome {}: annihilated states: {zeros}", o.outcome);
        for p in &o.parties {
            text.push_str("  ");
            text.push_str(&party_line(p, "next"));
        }
        if o.dead_end {
            let _ = writeln!(text, "  dead end: no other party can perform an NTOP measurement");
        }
    }

    let mut doc = ReportDocument::new(set.dims(), tol, &party_docs(&analysis.reports));
    doc.measurement = Some(MeasurementDocument::from_measurement(&meas));
    doc.second_round = Some(docs);
    finish(io, text, json, &doc)
}

fn ghz_verdict(
    io: &mut Io,
    params: &Path,
    config: &FalsificationConfig,
    json: Option<&Path>,
    tol: f64,
) -> Result<(), CliError> {
    let pdoc: GhzParamsDocument = document::parse(params, &io.read(params)?)?;
    let params = pdoc.into_params(params)?;
    let verdict = ghz_family_verdict(&params, tol, config)?;

    let mut text = String::new();
    let _ = writeln!(text, "GHZ family: s = {}, t = {}", fmt_complex(params.s()), fmt_complex(params.t()));
    let xs: Vec<String> = params.x().iter().map(|z| fmt_complex(*z)).collect();
    let _ = writeln!(text, "x = [{}]", xs.join(", "));
    if let Some(case) = verdict.evidence.case {
        let pivot = verdict.evidence.pivot.map_or(String::new(), |p| format!(", pivot x{}", p + 1));
        let _ = writeln!(text, "case {}{pivot}: {}", case.label(), case.description());
    }
    let parties: Vec<PartyDocument> = verdict.evidence.first_round.iter().map(PartyDocument::from).collect();
    for p in &parties {
        text.push_str(&party_line(p, "first"));
    }
    for f in &verdict.evidence.falsification {
        let _ = writeln!(
            text,
            "party {} first: {} sampled measurements, {} obstructed ({} engineered, {} with an open first outcome)",
            f.first_party, f.samples, f.obstructed, f.engineered, f.engineered_outcome_feasible
        );
    }
    for note in &verdict.evidence.notes {
        let _ = writeln!(text, "note: {note}");
    }
    let _ = writeln!(text, "conclusion: {}", verdict.conclusion.as_str());

    let mut doc = ReportDocument::new(&[2, 2, 2], tol, &parties);
    doc.verdict = Some(VerdictDocument::from(&verdict));
    finish(io, text, json, &doc)
}

fn examples(io: &mut Io, name: Option<&str>) -> Result<(), CliError> {
    let Some(name) = name else {
        return io.print(&format!("{}\n{GHZ_PARAMS_EXAMPLE}\n", cases::BUILTIN_NAMES.join("\n")));
    };
    if name == GHZ_PARAMS_EXAMPLE {
        return io.print(&document::to_json(&default_ghz_params_document()));
    }
    let set = cases::builtin(name).ok_or_else(|| {
        CliError::Invalid(format!(
            "unknown example '{name}' (available: {}, {GHZ_PARAMS_EXAMPLE})",
            cases::BUILTIN_NAMES.join(", ")
        ))
    })?;
    io.print(&document::to_json(&StateSetDocument::from_set(&set)))
}

/// `examples` name that prints family parameters instead of a state set.
pub const GHZ_PARAMS_EXAMPLE: &str = "ghz3-params";

/// Parameters of the built-in `ghz3` example, for `ghz-verdict`.
pub fn default_ghz_params_document() -> GhzParamsDocument {
    GhzParamsDocument::from_params(&ntop_core::GhzFamilyParams::default_example())
}
