//! Command line definition and command bodies.
//!
//! Commands write to the given sinks and return the process exit code, so
//! they can be driven in-process. Exit codes: 0 for a positive answer, 1 for
//! a negative one, 2 for errors.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use bordcert_core::catalog::{find_case, resolve_character};
use bordcert_core::pipeline::build_system;
use bordcert_core::relations::parse_identity;
use bordcert_core::{builtin_cases, CaseSpec, Source, SystemOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::caseio::{load_case, serialize_case};
use crate::certfile::CertificateFile;
use crate::report::{run_all, run_case, to_markdown, RunSettings};
use crate::CliError;

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Decide p-local vanishing of J-classes from circle restrictions and Adams
/// relations, with replayable certificates.
#[derive(Debug, Parser)]
#[command(name = "bordcert", version)]
pub struct Cli {
    /// Directory for relative certificate paths and report certificates.
    #[arg(long, global = true, env = "BORDCERT_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether t^1 vanishes after localizing at a prime.
    Verify(VerifyArgs),
    /// Print the circle character of a λ-power of a case's representation.
    Expand(ExpandArgs),
    /// Decide whether an identity among the t^j holds after localizing.
    Check(CheckArgs),
    /// Run every case at every prime and emit one document.
    Report(ReportArgs),
    /// Built-in cases.
    Cases {
        #[command(subcommand)]
        command: CasesCommand,
    },
    /// Replay a certificate file.
    CheckCertificate {
        file: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum CasesCommand {
    /// List the built-in cases.
    List,
    /// Print a built-in case as a case file.
    Export { case: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Computed,
    Printed,
    Both,
}

impl From<SourceArg> for Source {
    fn from(s: SourceArg) -> Source {
        match s {
            SourceArg::Computed => Source::Computed,
            SourceArg::Printed => Source::Printed,
            SourceArg::Both => Source::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Markdown,
}

#[derive(Debug, Args)]
pub struct CaseSelect {
    /// Built-in case name, e.g. Sp or E8.
    pub case: Option<String>,
    /// Read the case from a JSON case file instead.
    #[arg(long)]
    pub case_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=3))]
    pub prime: u64,
    #[arg(long, value_enum, default_value = "both")]
    pub source: SourceArg,
    /// Generators t^-N..t^N.
    #[arg(long)]
    pub window: Option<u32>,
    /// Largest shift i of the restriction relations.
    #[arg(long)]
    pub i_max: Option<u32>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub select: CaseSelect,
    #[command(flatten)]
    pub system: SystemArgs,
    /// Write the certificate of a positive verdict to this path.
    #[arg(long)]
    pub emit_certificate: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub select: CaseSelect,
    #[arg(long, default_value_t = 1)]
    pub lambda: u32,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// `CASE IDENTITY`, or just `IDENTITY` with --case-file. Identities read
    /// like "t^8 = 4*t^2 + t^0".
    #[arg(num_args = 1..=2, required = true, value_names = ["CASE", "IDENTITY"])]
    pub positional: Vec<String>,
    #[arg(long)]
    pub case_file: Option<PathBuf>,
    #[command(flatten)]
    pub system: SystemArgs,
    /// Keep only relations with this provenance (repeatable).
    #[arg(long)]
    pub only: Vec<String>,
    #[arg(long)]
    pub emit_certificate: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Run all built-in cases.
    #[arg(long)]
    pub all: bool,
    /// Cases to run when --all is absent.
    pub cases: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
    #[arg(long, value_enum, default_value = "both")]
    pub source: SourceArg,
    #[arg(long)]
    pub window: Option<u32>,
    #[arg(long)]
    pub i_max: Option<u32>,
    /// Write the document here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn select_case(select: &CaseSelect, prime: Option<u64>, err: &mut dyn Write) -> Result<CaseSpec, CliError> {
    if let Some(path) = &select.case_file {
        let (case, remarks) = load_case(path)?;
        for r in remarks {
            let _ = writeln!(err, "note: {r}");
        }
        return Ok(case);
    }
    let name = select
        .case
        .as_deref()
        .ok_or_else(|| CliError::Usage("give a case name or --case-file".to_string()))?;
    let cases = builtin_cases();
    let case = find_case(&cases, name, prime).ok_or_else(|| CliError::UnknownCase(name.to_string()))?;
    if let Some(p) = prime {
        if !case.primes.contains(&p) {
            return Err(CliError::Usage(format!("case {} is not set up for p = {p}", case.name)));
        }
    }
    Ok(case.clone())
}

fn resolve_out(out_dir: Option<&Path>, path: &Path) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

/// Runs a parsed command line.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Verify(args) => verify(args, cli.out_dir.as_deref(), out, err),
        Command::Expand(args) => expand(args, out, err),
        Command::Check(args) => check(args, cli.out_dir.as_deref(), out, err),
        Command::Report(args) => report(args, cli.out_dir.as_deref(), out, err),
        Command::Cases { command } => cases(command, out),
        Command::CheckCertificate { file } => check_certificate(&file, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn verify(args: VerifyArgs, out_dir: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let prime = args.system.prime;
    let case = select_case(&args.select, Some(prime), err)?;
    let settings = RunSettings {
        source: Some(args.system.source.into()),
        window: args.system.window,
        i_max: args.system.i_max,
        certificate_dir: None,
    };
    let run = run_case(&case, prime, &settings);
    let mut entry = run.entry;
    if let Some(e) = &entry.error {
        return Err(CliError::Usage(e.clone()));
    }
    let (system, verdict) = (run.system.expect("built"), run.verdict.expect("decided"));

    if let Some(path) = &args.emit_certificate {
        match (&verdict.certificate, verdict.zero_at_p) {
            (Some(cert), true) => {
                let path = resolve_out(out_dir, path);
                CertificateFile::new(cert, &system.relations, prime).write(&path)?;
                entry.certificate_path = Some(path.display().to_string());
            }
            _ => {
                let _ = writeln!(err, "no certificate written: t^1 is not shown to vanish");
            }
        }
    }

    if args.format == OutputFormat::Json {
        let mut text = serde_json::to_string_pretty(&entry).expect("entries serialize");
        text.push('\n');
        out.write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
    } else {
        let counts: Vec<String> = entry.counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
        let _ = writeln!(
            out,
            "{} ({}) at p = {}, source {}, window {}, i_max {}",
            case.name, case.group, prime, entry.source, entry.window, entry.i_max
        );
        let _ = writeln!(out, "relations: {}; dropped {}", counts.join(", "), entry.dropped);
        let m = entry.m.as_deref().unwrap_or("inf");
        if verdict.zero_at_p {
            let _ = writeln!(out, "zero_at_p: true (m = {m}, prime to {prime})");
        } else {
            let _ = writeln!(out, "zero_at_p: false (minimal multiple {m})");
        }
        if let Some(cert) = &verdict.certificate {
            let _ = writeln!(out, "certificate: {} relation rows", cert.combination.len());
        }
        if let Some(path) = &entry.certificate_path {
            let _ = writeln!(out, "certificate written to {path}");
        }
    }
    if let Some(note) = &verdict.note {
        let _ = writeln!(err, "note: {note}");
    }
    if !verdict.zero_at_p && system.dropped > 0 {
        let _ = writeln!(
            err,
            "warning: {} dropped relations (exponents outside window {}); the window may be too small",
            system.dropped, system.window.bound
        );
    }
    Ok(if verdict.zero_at_p { EXIT_YES } else { EXIT_NO })
}

fn expand(args: ExpandArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let case = select_case(&args.select, None, err)?;
    let character = resolve_character(&case, args.lambda)?;
    let power = if args.lambda == 1 { String::new() } else { format!("λ^{} ", args.lambda) };
    let _ = writeln!(out, "{} {power}ρ, dimension {}", case.name, character.dim());
    if case.exponent_divisor > 1 {
        let _ = writeln!(out, "exponents divided by {}", case.exponent_divisor);
    }
    let _ = writeln!(out, "{character}");
    Ok(EXIT_YES)
}

fn check(args: CheckArgs, out_dir: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let prime = args.system.prime;
    let (name, identity) = match args.positional.as_slice() {
        [identity] => (None, identity.clone()),
        [name, identity] => (Some(name.clone()), identity.clone()),
        _ => unreachable!("clap enforces one or two positionals"),
    };
    let select = CaseSelect { case: name, case_file: args.case_file.clone() };
    let case = select_case(&select, Some(prime), err)?;
    let lhs = parse_identity(&identity)?;
    let mut options = SystemOptions::new(prime, args.system.source.into());
    options.window = args.system.window;
    options.i_max = args.system.i_max;
    let mut system = build_system(&case, &options)?;
    if !args.only.is_empty() {
        let keep: BTreeSet<&str> = args.only.iter().map(String::as_str).collect();
        system.relations.retain(|r| keep.contains(r.provenance()));
        if system.relations.is_empty() {
            return Err(CliError::Usage("--only matched no relation".to_string()));
        }
    }
    let outcome = system.check(&lhs)?;
    let _ = writeln!(out, "{}: {} at p = {} (m = {})", identity.trim(), outcome.holds, prime, outcome.multiple);
    if let Some(path) = &args.emit_certificate {
        match (&outcome.certificate, outcome.holds) {
            (Some(cert), true) => {
                let path = resolve_out(out_dir, path);
                CertificateFile::new(cert, &system.relations, prime).write(&path)?;
                let _ = writeln!(out, "certificate written to {}", path.display());
            }
            _ => {
                let _ = writeln!(err, "no certificate written: identity not shown");
            }
        }
    }
    Ok(if outcome.holds { EXIT_YES } else { EXIT_NO })
}

fn report(args: ReportArgs, out_dir: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let builtins = builtin_cases();
    let cases: Vec<CaseSpec> = if args.all {
        builtins.clone()
    } else if args.cases.is_empty() {
        return Err(CliError::Usage("give --all or at least one case".to_string()));
    } else {
        let mut picked = Vec::new();
        for name in &args.cases {
            let matches: Vec<&CaseSpec> = builtins
                .iter()
                .filter(|c| c.name.eq_ignore_ascii_case(name) || c.group.eq_ignore_ascii_case(name))
                .collect();
            if matches.is_empty() {
                return Err(CliError::UnknownCase(name.clone()));
            }
            picked.extend(matches.into_iter().cloned());
        }
        picked
    };
    let settings = RunSettings {
        source: Some(args.source.into()),
        window: args.window,
        i_max: args.i_max,
        certificate_dir: out_dir.map(|d| d.join("certificates")),
    };
    let report = run_all(&cases, &settings);
    let text = match args.format {
        OutputFormat::Markdown => to_markdown(&report, &cases),
        _ => report.to_json(),
    };
    match &args.output {
        Some(path) => {
            let path = resolve_out(out_dir, path);
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
            let _ = writeln!(err, "report written to {}", path.display());
        }
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e))?,
    }
    Ok(EXIT_YES)
}

fn cases(command: CasesCommand, out: &mut dyn Write) -> Result<i32, CliError> {
    let builtins = builtin_cases();
    match command {
        CasesCommand::List => {
            let _ = writeln!(out, "{:<7} {:<8} {:<6} {:<8} circle weights", "case", "group", "primes", "lambda");
            for c in &builtins {
                let primes: Vec<String> = c.primes.iter().map(u64::to_string).collect();
                let lambdas: Vec<String> = c.lambda_powers.iter().map(u32::to_string).collect();
                let weights: Vec<String> = c.circle_weights.iter().map(|w| w.to_string()).collect();
                let _ = writeln!(
                    out,
                    "{:<7} {:<8} {:<6} {:<8} ({})",
                    c.name,
                    c.group,
                    primes.join(","),
                    lambdas.join(","),
                    weights.join(", ")
                );
            }
        }
        CasesCommand::Export { case } => {
            let found = find_case(&builtins, &case, None).ok_or(CliError::UnknownCase(case))?;
            let _ = out.write_all(serialize_case(found).as_bytes());
        }
    }
    Ok(EXIT_YES)
}

fn check_certificate(file: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let cert = CertificateFile::read(file)?;
    match cert.check() {
        Ok(m) => {
            let _ = writeln!(
                out,
                "accepted: {}·({}) = 0 at p = {}, from {} rows",
                m,
                cert.claim.lhs,
                cert.claim.prime,
                cert.rows.len()
            );
            Ok(EXIT_YES)
        }
        Err(e) => {
            let _ = writeln!(out, "{e}");
            Ok(EXIT_NO)
        }
    }
}
