//! Command-line front end: `list`, `run` and `audit`.
//!
//! Exit codes: 0 when every verdict matches its expectation, 1 on a
//! mismatch, 2 on a usage or configuration error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::checkers::{Cell, CheckReport, CheckVerdict, Settings};
use crate::kernel::DEFAULT_BUDGET;
use crate::scenarios::{
    audit_registry, registry, CheckKind, EvidenceKey, Overrides, Scenario, ScenarioDef,
};

pub const EXIT_MATCH: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Seeds used when neither `--seeds` nor `FOREGONE_SEED` is given.
pub const DEFAULT_SEEDS: std::ops::Range<u64> = 0..16;

#[derive(Debug, Parser)]
#[command(name = "foregone", version, about = "Check demonstrability and entailment of compelled actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List registered scenarios, their citations and expected verdicts.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Run one check on one scenario.
    Run(RunArgs),
    /// Run every expectation, evidence audit and crypto sweep.
    Audit(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Comma-separated seeds or a half-open range `a..b`.
    #[arg(long, env = "FOREGONE_SEED")]
    seeds: Option<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// File of `scenario.param = value` lines.
    #[arg(long)]
    overrides: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// `name` or `name/case`.
    scenario: String,
    #[arg(long)]
    check: String,
    #[arg(long, default_value = "weak")]
    evidence: String,
    #[command(flatten)]
    common: CommonArgs,
}

/// A counterexample cell in the report schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportCell {
    pub world: String,
    pub action: String,
    pub seed: u64,
    pub expected_value: String,
    pub got_value: String,
}

impl From<&Cell> for ReportCell {
    fn from(c: &Cell) -> Self {
        Self {
            world: c.world.clone(),
            action: c.action.clone(),
            seed: c.seed,
            expected_value: c.expected.to_string(),
            got_value: c.got.to_string(),
        }
    }
}

/// The machine-readable result of one check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub check: String,
    pub evidence: String,
    pub verdict: String,
    pub expected: Option<String>,
    pub counterexample: Option<ReportCell>,
    pub cells: usize,
    pub seeds: Vec<u64>,
    pub budget: u64,
    pub citation: String,
    /// Shown in markdown output only; the JSON schema is fixed.
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn matches(&self) -> bool {
        self.expected.as_ref().is_none_or(|e| *e == self.verdict)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub passed: bool,
    pub first_failure: Option<String>,
    pub problems: Vec<String>,
    pub reports: Vec<RunReport>,
}

#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// Parse `a,b,c` or `a..b`. An empty list is an error.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>, String> {
    let text = text.trim();
    let seeds: Vec<u64> = if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| format!("bad seed range start {a:?}"))?;
        let b: u64 = b.trim().parse().map_err(|_| format!("bad seed range end {b:?}"))?;
        (a..b).collect()
    } else {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| format!("bad seed {s:?}")))
            .collect::<Result<_, _>>()?
    };
    if seeds.is_empty() {
        return Err("the seed list is empty".into());
    }
    Ok(seeds)
}

/// Run the CLI on `args` (program name first), writing to `stdout` and
/// `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_MATCH };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let outcome = match cli.command {
        Command::List { json } => list(&registry(), json).map(|text| (text, EXIT_MATCH, None)),
        Command::Run(args) => cmd_run(&args),
        Command::Audit(args) => cmd_audit(&args),
    };
    match outcome {
        Ok((text, code, out)) => {
            let written = match out {
                Some(path) => std::fs::write(&path, &text).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
            code
        }
        Err(UsageError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

#[derive(Serialize)]
struct ListedExpectation<'a> {
    check: &'a str,
    evidence: &'a str,
    verdict: &'a str,
}

#[derive(Serialize)]
struct ListedScenario<'a> {
    name: String,
    citation: &'a str,
    expectations: Vec<ListedExpectation<'a>>,
}

/// The registry listing, or an error for an empty registry.
fn list(defs: &[ScenarioDef], json: bool) -> Result<String, UsageError> {
    if defs.is_empty() {
        return Err(UsageError("the scenario registry is empty".into()));
    }
    let mut built = Vec::new();
    for def in defs {
        built.push(def.load(&Default::default())?);
    }
    let mut listed = Vec::new();
    for s in &built {
        for case in &s.cases {
            listed.push(ListedScenario {
                name: s.qualified(case),
                citation: &s.citation,
                expectations: case
                    .expectations
                    .iter()
                    .map(|e| ListedExpectation {
                        check: e.check.as_str(),
                        evidence: e.evidence.as_str(),
                        verdict: e.verdict.as_str(),
                    })
                    .collect(),
            });
        }
    }
    if json {
        return Ok(serde_json::to_string_pretty(&listed)? + "\n");
    }
    let mut out = String::new();
    for l in &listed {
        let _ = writeln!(out, "{} ({})", l.name, l.citation);
        for e in &l.expectations {
            let _ = writeln!(out, "    {:<20} {:<7} {}", e.check, e.evidence, e.verdict);
        }
    }
    Ok(out)
}

fn settings(args: &CommonArgs) -> Result<Settings, UsageError> {
    let seeds = match &args.seeds {
        Some(s) => parse_seeds(s)?,
        None => DEFAULT_SEEDS.collect(),
    };
    Ok(Settings::new(seeds, args.budget))
}

fn overrides(path: Option<&Path>) -> Result<Overrides, UsageError> {
    match path {
        None => Ok(Overrides::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| UsageError(format!("{}: {e}", p.display())))?;
            Ok(Overrides::parse(&text, &registry())?)
        }
    }
}

type Outcome = Result<(String, i32, Option<PathBuf>), UsageError>;

fn cmd_run(args: &RunArgs) -> Outcome {
    let check: CheckKind = args.check.parse()?;
    let key: EvidenceKey = args.evidence.parse()?;
    let settings = settings(&args.common)?;
    let overrides = overrides(args.common.overrides.as_deref())?;
    let (name, case_label) = match args.scenario.split_once('/') {
        Some((n, c)) => (n, Some(c)),
        None => (args.scenario.as_str(), None),
    };
    let def = crate::scenarios::find(name).ok_or_else(|| UsageError(format!("unknown scenario {name:?}")))?;
    let scenario = def.load(&overrides.for_scenario(name))?;
    let cases: Vec<&crate::scenarios::Case> = match case_label {
        Some(l) => vec![scenario
            .case(l)
            .ok_or_else(|| UsageError(format!("scenario {name} has no case {l:?}")))?],
        None if check == CheckKind::AuditAll => scenario.cases.iter().collect(),
        None => scenario.cases.iter().take(1).collect(),
    };
    let report = if check == CheckKind::AuditAll {
        audit_all_report(&scenario, &cases, &settings, key)?
    } else {
        let case = cases[0];
        let r = case.run(check, key, &settings)?;
        let exp = case.expectation(check, key);
        build_report(
            scenario.qualified(case),
            check,
            key,
            &r,
            exp.map(|e| e.verdict),
            exp.map_or(scenario.citation.clone(), |e| e.citation.clone()),
            &settings,
        )
    };
    let code = if report.matches() { EXIT_MATCH } else { EXIT_MISMATCH };
    Ok((render(&report, args.common.json)?, code, args.common.out.clone()))
}

fn audit_all_report(
    scenario: &Scenario,
    cases: &[&crate::scenarios::Case],
    settings: &Settings,
    key: EvidenceKey,
) -> Result<RunReport, UsageError> {
    let mut total = CheckReport::new(CheckVerdict::Holds);
    for case in cases {
        let r = case.run(CheckKind::AuditAll, key, settings)?;
        total.cells += r.cells;
        total.notes.extend(r.notes.iter().cloned());
        if !r.holds() && total.holds() {
            total.verdict = r.verdict;
            total.counterexample = r.counterexample;
        }
    }
    let name = match cases {
        [one] => scenario.qualified(one),
        _ => scenario.name.clone(),
    };
    Ok(build_report(
        name,
        CheckKind::AuditAll,
        key,
        &total,
        Some(CheckVerdict::Holds),
        scenario.citation.clone(),
        settings,
    ))
}

fn build_report(
    scenario: String,
    check: CheckKind,
    key: EvidenceKey,
    r: &CheckReport,
    expected: Option<CheckVerdict>,
    citation: String,
    settings: &Settings,
) -> RunReport {
    RunReport {
        scenario,
        check: check.as_str().into(),
        evidence: key.as_str().into(),
        verdict: r.verdict.as_str().into(),
        expected: expected.map(|v| v.as_str().into()),
        counterexample: r.counterexample.as_ref().map(ReportCell::from),
        cells: r.cells,
        seeds: settings.seeds.clone(),
        budget: settings.budget,
        citation,
        notes: r.notes.clone(),
    }
}

fn render(report: &RunReport, json: bool) -> Result<String, UsageError> {
    if json {
        return Ok(serde_json::to_string_pretty(report)? + "\n");
    }
    let mut out = String::new();
    let _ = writeln!(out, "## {} / {} / {}", report.scenario, report.check, report.evidence);
    let _ = writeln!(out);
    let _ = writeln!(out, "| field | value |");
    let _ = writeln!(out, "|---|---|");
    let _ = writeln!(out, "| verdict | {} |", report.verdict);
    let _ = writeln!(out, "| expected | {} |", report.expected.as_deref().unwrap_or("-"));
    let _ = writeln!(out, "| cells | {} |", report.cells);
    let _ = writeln!(out, "| seeds | {} |", report.seeds.len());
    let _ = writeln!(out, "| budget | {} |", report.budget);
    let _ = writeln!(out, "| citation | {} |", report.citation);
    if let Some(c) = &report.counterexample {
        let _ = writeln!(
            out,
            "| counterexample | {} / {} / seed {}: expected `{}`, got `{}` |",
            c.world, c.action, c.seed, c.expected_value, c.got_value
        );
    }
    if !report.notes.is_empty() {
        let _ = writeln!(out);
        for n in &report.notes {
            let _ = writeln!(out, "- {n}");
        }
    }
    Ok(out)
}

/// Run the whole registry audit.
pub fn audit(overrides: &Overrides, settings: &Settings) -> Result<AuditReport, String> {
    let summary = audit_registry(overrides, settings).map_err(|e| e.to_string())?;
    let reports = summary
        .entries
        .iter()
        .map(|entry| {
            let exp = &entry.expectation;
            let r = entry.outcome.clone().unwrap_or_else(|e| {
                let mut r = CheckReport::new(CheckVerdict::Fails);
                r.notes.push(e);
                r
            });
            let mut report = build_report(
                entry.scenario.clone(),
                exp.check,
                exp.evidence,
                &r,
                Some(exp.verdict),
                exp.citation.clone(),
                settings,
            );
            if !entry.passed() && report.matches() {
                // Right verdict, wrong cell.
                report.expected = Some(format!("{} at {:?}", exp.verdict, exp.cell));
            }
            report
        })
        .collect();
    let first_failure = summary.first_failure();
    Ok(AuditReport {
        passed: first_failure.is_none(),
        first_failure,
        problems: summary.problems,
        reports,
    })
}

fn cmd_audit(args: &CommonArgs) -> Outcome {
    let settings = settings(args)?;
    let overrides = overrides(args.overrides.as_deref())?;
    let report = audit(&overrides, &settings).map_err(UsageError)?;
    let code = if report.passed { EXIT_MATCH } else { EXIT_MISMATCH };
    let text = if args.json {
        serde_json::to_string_pretty(&report)? + "\n"
    } else {
        let mut out = String::new();
        for r in &report.reports {
            let _ = writeln!(
                out,
                "{} {:<40} {:<20} {:<7} {}",
                if r.matches() { "ok  " } else { "FAIL" },
                r.scenario,
                r.check,
                r.evidence,
                r.verdict
            );
        }
        for p in &report.problems {
            let _ = writeln!(out, "FAIL {p}");
        }
        match &report.first_failure {
            None => out.push_str("audit passed\n"),
            Some(f) => {
                let _ = writeln!(out, "audit failed: {f}");
            }
        }
        out
    };
    Ok((text, code, args.out.clone()))
}
