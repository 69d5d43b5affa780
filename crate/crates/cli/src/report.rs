//! Run reports in JSON and markdown.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Instant;

use bordcert_core::catalog::{claimed_identities, consistency_check, Classification};
use bordcert_core::pipeline::build_system;
use bordcert_core::relations::parse_identity;
use bordcert_core::{CaseSpec, RelationSystem, Source, SystemOptions, Verdict};
use serde::{Deserialize, Serialize};

use crate::certfile::CertificateFile;
use crate::CliError;

pub const REPORT_FORMAT: &str = "bordcert-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiffRow {
    /// `None` for the right-side multiplier.
    pub exponent: Option<i64>,
    pub printed: String,
    pub computed: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsistencyRow {
    pub source: String,
    pub lambda: u32,
    pub balanced: bool,
    pub classification: String,
    pub diff: Vec<DiffRow>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityRow {
    pub identity: String,
    pub holds: Option<bool>,
    pub m: Option<String>,
    pub error: Option<String>,
}

/// One (case, prime) run. A failed step leaves its fields empty and sets
/// `error`; the rest of the entry is still filled in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub case: String,
    pub group: String,
    pub prime: u64,
    pub source: String,
    /// `zero`, `nonzero` or `error`.
    pub verdict: String,
    pub m: Option<String>,
    pub certificate_path: Option<String>,
    pub consistency: Vec<ConsistencyRow>,
    pub window: u32,
    pub i_max: u32,
    pub counts: BTreeMap<String, usize>,
    pub dropped: usize,
    pub identities: Vec<IdentityRow>,
    pub note: Option<String>,
    pub error: Option<String>,
    pub wall_time_ms: u64,
}

impl Entry {
    pub fn zero_at_p(&self) -> bool {
        self.verdict == "zero"
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub format: String,
    pub version: String,
    pub entries: Vec<Entry>,
}

impl RunReport {
    pub fn new(mut entries: Vec<Entry>) -> Self {
        entries.sort_by(|a, b| (&a.case, a.prime).cmp(&(&b.case, b.prime)));
        RunReport { format: REPORT_FORMAT.to_string(), version: env!("CARGO_PKG_VERSION").to_string(), entries }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports serialize");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de)
            .map_err(|e| CliError::CaseSyntax { path: e.path().to_string(), message: e.inner().to_string() })
    }
}

/// Settings shared by every run in a batch.
#[derive(Clone, Debug, Default)]
pub struct RunSettings {
    pub source: Option<Source>,
    pub window: Option<u32>,
    pub i_max: Option<u32>,
    /// Where certificates of positive verdicts are written.
    pub certificate_dir: Option<PathBuf>,
}

/// A finished run: the report entry plus the objects behind it.
pub struct Run {
    pub entry: Entry,
    pub system: Option<RelationSystem>,
    pub verdict: Option<Verdict>,
}

pub fn certificate_file_name(case: &str, prime: u64, source: Source) -> String {
    format!("{case}-p{prime}-{}.json", source.as_str())
}

fn consistency_rows(case: &CaseSpec) -> Vec<ConsistencyRow> {
    consistency_check(case)
        .into_iter()
        .map(|e| {
            let (diff, note) = match &e.classification {
                Classification::Reproduced => (Vec::new(), None),
                Classification::Discrepant(d) => (
                    d.iter()
                        .map(|c| DiffRow {
                            exponent: c.exponent,
                            printed: c.printed.to_string(),
                            computed: c.computed.to_string(),
                        })
                        .collect(),
                    None,
                ),
                Classification::NotCompared(why) => (Vec::new(), Some(why.clone())),
            };
            ConsistencyRow {
                source: e.source,
                lambda: e.lambda,
                balanced: e.balanced,
                classification: e.classification.label().to_string(),
                diff,
                note,
            }
        })
        .collect()
}

fn identity_rows(case: &CaseSpec, system: &RelationSystem) -> Vec<IdentityRow> {
    claimed_identities(&case.name, system.prime)
        .iter()
        .map(|text| {
            let outcome = parse_identity(text).and_then(|lhs| system.check(&lhs));
            match outcome {
                Ok(o) => IdentityRow {
                    identity: text.to_string(),
                    holds: Some(o.holds),
                    m: Some(o.multiple.to_string()),
                    error: None,
                },
                Err(e) => IdentityRow { identity: text.to_string(), holds: None, m: None, error: Some(e.to_string()) },
            }
        })
        .collect()
}

/// Runs one (case, prime). Never fails; errors are recorded in the entry.
pub fn run_case(case: &CaseSpec, prime: u64, settings: &RunSettings) -> Run {
    let start = Instant::now();
    let source = settings.source.unwrap_or(Source::Both);
    let mut entry = Entry {
        case: case.name.clone(),
        group: case.group.clone(),
        prime,
        source: source.as_str().to_string(),
        verdict: "error".to_string(),
        m: None,
        certificate_path: None,
        consistency: consistency_rows(case),
        window: settings.window.unwrap_or(case.window),
        i_max: settings.i_max.unwrap_or(case.i_max),
        counts: BTreeMap::new(),
        dropped: 0,
        identities: Vec::new(),
        note: None,
        error: None,
        wall_time_ms: 0,
    };
    let mut options = SystemOptions::new(prime, source);
    options.window = settings.window;
    options.i_max = settings.i_max;
    let (system, verdict) = match build_system(case, &options) {
        Ok(system) => {
            let verdict = system.verdict();
            entry.counts = system.counts.clone();
            entry.dropped = system.dropped;
            entry.verdict = if verdict.zero_at_p { "zero" } else { "nonzero" }.to_string();
            entry.m = Some(verdict.minimal_multiple.to_string());
            entry.note = verdict.note.clone();
            entry.identities = identity_rows(case, &system);
            if let (Some(dir), Some(cert)) = (&settings.certificate_dir, &verdict.certificate) {
                if verdict.zero_at_p {
                    let path = dir.join(certificate_file_name(&case.name, prime, source));
                    match CertificateFile::new(cert, &system.relations, prime).write(&path) {
                        Ok(()) => entry.certificate_path = Some(path.display().to_string()),
                        Err(e) => entry.error = Some(e.to_string()),
                    }
                }
            }
            (Some(system), Some(verdict))
        }
        Err(e) => {
            entry.error = Some(e.to_string());
            (None, None)
        }
    };
    entry.wall_time_ms = u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX);
    Run { entry, system, verdict }
}

/// Runs every case at every declared prime, in parallel. Entries come back
/// sorted by case name, then prime.
pub fn run_all(cases: &[CaseSpec], settings: &RunSettings) -> RunReport {
    let jobs: Vec<(&CaseSpec, u64)> =
        cases.iter().flat_map(|c| c.primes.iter().map(move |&p| (c, p))).collect();
    let entries = thread::scope(|scope| {
        let handles: Vec<_> =
            jobs.iter().map(|&(case, p)| scope.spawn(move || run_case(case, p, settings).entry)).collect();
        handles.into_iter().map(|h| h.join().expect("run thread panicked")).collect()
    });
    RunReport::new(entries)
}

fn describe_multiple(m: Option<&str>) -> String {
    match m {
        Some("inf") => "no multiple of t^1 vanishes".to_string(),
        Some(m) => format!("m = {m}"),
        None => "not computed".to_string(),
    }
}

/// Markdown with one section per group, groups in the order they first
/// appear in `cases`.
pub fn to_markdown(report: &RunReport, cases: &[CaseSpec]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# bordcert report\n");
    let _ = writeln!(out, "| case | p | source | verdict | m | dropped |");
    let _ = writeln!(out, "|---|---|---|---|---|---|");
    let ordered: Vec<&Entry> = cases
        .iter()
        .flat_map(|c| {
            let mut mine: Vec<&Entry> = report.entries.iter().filter(|e| e.case == c.name).collect();
            mine.sort_by_key(|e| e.prime);
            mine
        })
        .collect();
    for e in &ordered {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            e.case,
            e.prime,
            e.source,
            e.verdict,
            e.m.as_deref().unwrap_or("-"),
            e.dropped
        );
    }
    let mut groups: Vec<&str> = Vec::new();
    for c in cases {
        if !groups.contains(&c.group.as_str()) {
            groups.push(&c.group);
        }
    }
    for group in groups {
        let _ = writeln!(out, "\n## {group}");
        let mut consistency_done: Vec<&str> = Vec::new();
        for e in ordered.iter().filter(|e| e.group == group) {
            let _ = writeln!(out, "\n### {} at p = {}\n", e.case, e.prime);
            let counts: Vec<String> = e.counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
            let _ = writeln!(
                out,
                "- relations ({} source, window {}, i_max {}): {}; dropped {}",
                e.source,
                e.window,
                e.i_max,
                counts.join(", "),
                e.dropped
            );
            let verdict = if e.zero_at_p() {
                format!("t^1 vanishes after localizing at {}", e.prime)
            } else if e.verdict == "nonzero" {
                format!("t^1 is not shown to vanish after localizing at {}", e.prime)
            } else {
                "no verdict".to_string()
            };
            let _ = writeln!(out, "- verdict: {verdict} ({})", describe_multiple(e.m.as_deref()));
            if let Some(path) = &e.certificate_path {
                let _ = writeln!(out, "- certificate: `{path}`");
            }
            if e.dropped > 0 && !e.zero_at_p() {
                let _ = writeln!(out, "- warning: {} dropped relations; the window may be too small", e.dropped);
            }
            if let Some(note) = &e.note {
                let _ = writeln!(out, "- note: {note}");
            }
            if let Some(err) = &e.error {
                let _ = writeln!(out, "- error: {err}");
            }
            if !e.identities.is_empty() {
                let _ = writeln!(out, "\n| identity | holds | m |\n|---|---|---|");
                for id in &e.identities {
                    let holds = match id.holds {
                        Some(true) => "yes",
                        Some(false) => "no",
                        None => "error",
                    };
                    let _ = writeln!(out, "| `{}` | {holds} | {} |", id.identity, id.m.as_deref().unwrap_or("-"));
                }
            }
            if !e.consistency.is_empty() && !consistency_done.contains(&e.case.as_str()) {
                consistency_done.push(&e.case);
                let _ = writeln!(out, "\n| display | λ | balanced | classification | differences |\n|---|---|---|---|---|");
                for c in &e.consistency {
                    let detail = if c.diff.is_empty() {
                        c.note.clone().unwrap_or_default()
                    } else {
                        c.diff
                            .iter()
                            .map(|d| match d.exponent {
                                Some(x) => format!("t^{x}: printed {} computed {}", d.printed, d.computed),
                                None => format!("rhs: printed {} computed {}", d.printed, d.computed),
                            })
                            .collect::<Vec<_>>()
                            .join("; ")
                    };
                    let _ = writeln!(
                        out,
                        "| {} | {} | {} | {} | {detail} |",
                        c.source,
                        c.lambda,
                        if c.balanced { "yes" } else { "no" },
                        c.classification
                    );
                }
            }
        }
    }
    out
}

/// Checks every certificate a report names.
pub fn check_report_certificates(report: &RunReport) -> Vec<(String, Result<(), CliError>)> {
    report
        .entries
        .iter()
        .filter_map(|e| e.certificate_path.as_ref())
        .map(|p| (p.clone(), CertificateFile::read(Path::new(p)).and_then(|c| c.check()).map(|_| ())))
        .collect()
}
