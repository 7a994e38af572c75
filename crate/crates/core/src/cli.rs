//! Input parsing, report rendering and batch execution for the `quiverk`
//! binary.
//!
//! Input grammar: statements `F=...` and `G=...` separated by `;` or newlines,
//! each value either `diag(a1,...,ad)`, `[[..],..,[..]]` or `[x]` for a 1x1
//! matrix. Whitespace is ignored and `#` starts a comment.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Parser;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Number, Value};

use crate::closed_forms::{alg2_kgroups, corollary_d2, diag_kgroups, scalar_corollary, ClosedForm, Coverage};
use crate::error::{Error, Result};
use crate::kquiver::{
    assemble, build_levels, check_identities, is_positive_diagonal, summarize_levels, IdentityReport, InputOptions,
    KGroupsResult, LevelMatrices, QuiverInput, DEFAULT_MAX_BINOMIAL,
};
use crate::linalg::IntMatrix;
use crate::omega::{check_omega, MultiIndex};

/// Ω checks are skipped above this `N = det F`.
pub const OMEGA_CHECK_LIMIT: usize = 256;

pub const MAX_BINOMIAL_ENV: &str = "QUIVERK_MAX_BINOMIAL";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReportOptions {
    pub breakdown: bool,
    pub check: bool,
    pub closed_form: bool,
    pub presentation: bool,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub input: QuiverInput,
    pub options: ReportOptions,
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.parse::<BigInt>().map_err(|_| Error::Parse(format!("`{s}` is not an integer")))
}

fn parse_list(s: &str) -> Result<Vec<BigInt>> {
    if s.is_empty() {
        return Err(Error::Parse("empty list".into()));
    }
    s.split(',').map(parse_int).collect()
}

/// Parses one matrix value, whitespace already removed.
pub fn parse_matrix(s: &str) -> Result<IntMatrix> {
    if let Some(inner) = s.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
        return Ok(IntMatrix::diagonal(&parse_list(inner)?));
    }
    if let Some(inner) = s.strip_prefix("[[").and_then(|r| r.strip_suffix("]]")) {
        let rows = inner.split("],[").map(parse_list).collect::<Result<Vec<_>>>()?;
        return IntMatrix::try_from_rows(rows).map_err(|e| Error::Parse(format!("`{s}`: {e}")));
    }
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let entries = parse_list(inner)?;
        if entries.len() == 1 {
            return Ok(IntMatrix::diagonal(&entries));
        }
        return Err(Error::Parse(format!("`{s}`: use [[..],..] for a matrix or diag(..) for a diagonal")));
    }
    Err(Error::Parse(format!("`{s}` is not diag(..), [[..],..] or [x]")))
}

/// `(F, G)` from source text.
pub fn parse_pair(source: &str) -> Result<(IntMatrix, IntMatrix)> {
    let mut f = None;
    let mut g = None;
    for line in source.lines() {
        let line = line.split('#').next().unwrap_or("");
        for stmt in line.split(';') {
            let stmt: String = stmt.chars().filter(|c| !c.is_whitespace()).collect();
            if stmt.is_empty() {
                continue;
            }
            let (name, value) =
                stmt.split_once('=').ok_or_else(|| Error::Parse(format!("`{stmt}` is not of the form NAME=VALUE")))?;
            let slot = match name {
                "F" => &mut f,
                "G" => &mut g,
                other => return Err(Error::Parse(format!("unknown name `{other}`; expected F or G"))),
            };
            if slot.replace(parse_matrix(value)?).is_some() {
                return Err(Error::Parse(format!("{name} given twice")));
            }
        }
    }
    match (f, g) {
        (Some(f), Some(g)) => Ok((f, g)),
        (None, _) => Err(Error::Parse("missing F".into())),
        (_, None) => Err(Error::Parse("missing G".into())),
    }
}

/// Parses and validates a job; determinants and capacity are checked here.
pub fn parse_input(source: &str, options: ReportOptions, input_options: InputOptions) -> Result<JobSpec> {
    let (f, g) = parse_pair(source)?;
    let input = QuiverInput::with_options(f, g, input_options)?;
    Ok(JobSpec { input, options })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct CheckLine {
    name: String,
    status: Status,
    detail: String,
}

fn check_lines(report: IdentityReport) -> impl Iterator<Item = CheckLine> {
    report.checks.into_iter().map(|c| CheckLine {
        name: c.name,
        status: if c.passed { Status::Pass } else { Status::Fail },
        detail: c.detail,
    })
}

fn run_checks(input: &QuiverInput, levels: &[LevelMatrices]) -> Result<Vec<CheckLine>> {
    let mut lines: Vec<CheckLine> = check_lines(check_identities(levels, input)).collect();
    let skip = if !is_positive_diagonal(input.f()) {
        Some("F is not positive diagonal".to_string())
    } else if input.n() > BigInt::from(OMEGA_CHECK_LIMIT) {
        Some(format!("N = {} exceeds {OMEGA_CHECK_LIMIT}", input.n()))
    } else {
        None
    };
    match skip {
        Some(detail) => lines.push(CheckLine { name: "Ω checks".into(), status: Status::Skip, detail }),
        None => lines.extend(check_lines(check_omega(input.f(), input.g(), levels)?)),
    }
    Ok(lines)
}

#[derive(Debug, Clone)]
struct ClosedFormLine {
    family: &'static str,
    outcome: std::result::Result<ClosedForm, String>,
    agrees: Option<bool>,
}

fn scalar_of(m: &IntMatrix) -> Option<BigInt> {
    let diag = m.diagonal_entries();
    (m.is_diagonal() && diag.windows(2).all(|w| w[0] == w[1])).then(|| diag[0].clone())
}

/// Every closed form whose hypotheses the input meets, compared to the engine.
fn run_closed_forms(input: &QuiverInput, result: &KGroupsResult) -> Vec<ClosedFormLine> {
    let f = input.f();
    let g = input.g();
    let mut attempts: Vec<(&'static str, Result<Coverage>)> = Vec::new();
    let scalar_f = scalar_of(f).filter(|n| n >= &BigInt::one());
    if let Some(n) = &scalar_f {
        attempts.push(("scalar F", alg2_kgroups(n, g)));
    }
    if input.d() == 2 && scalar_f.as_ref().is_some_and(One::is_one) {
        let outcome = match corollary_d2(g) {
            Err(Error::EigenvalueOne) => Ok(Coverage::NotCovered("1 is an eigenvalue of G".into())),
            other => other.map(Coverage::Covered),
        };
        attempts.push(("d = 2, F = 1", outcome));
    }
    if is_positive_diagonal(f) && g.is_diagonal() {
        attempts.push(("diagonal F and G", diag_kgroups(f, g).map(Coverage::Covered)));
    }
    if let (Some(n), Some(m)) = (&scalar_f, scalar_of(g)) {
        attempts.push(("scalar F and G", scalar_corollary(n, &m, input.d()).map(Coverage::Covered)));
    }
    attempts
        .into_iter()
        .map(|(family, outcome)| match outcome {
            Ok(Coverage::Covered(c)) => {
                let agrees = c.k0 == result.k0 && c.k1 == result.k1;
                ClosedFormLine { family, outcome: Ok(c), agrees: Some(agrees) }
            }
            Ok(Coverage::NotCovered(why)) => ClosedFormLine { family, outcome: Err(why), agrees: None },
            Err(e) => ClosedFormLine { family, outcome: Err(e.to_string()), agrees: None },
        })
        .collect()
}

/// Generators and relations of the universal presentation for diagonal `F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub isometries: Vec<String>,
    pub unitaries: Vec<String>,
    /// `(relation number, rendered relation)`.
    pub relations: Vec<(u8, String)>,
}

fn superscript(n: &BigInt) -> String {
    n.to_string()
        .chars()
        .map(|c| match c {
            '-' => '⁻',
            d => ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'][d.to_digit(10).expect("digit") as usize],
        })
        .collect()
}

fn power(base: &str, e: &BigInt) -> Option<String> {
    if e.is_zero() {
        None
    } else if e.is_one() {
        Some(base.to_string())
    } else {
        Some(format!("{base}{}", superscript(e)))
    }
}

/// `U_1^{e_1} .. U_d^{e_d}` with trivial factors dropped; `None` when all vanish.
fn unitary_word(names: &[String], exps: &[BigInt]) -> Option<String> {
    let parts: Vec<String> = names.iter().zip(exps).filter_map(|(u, e)| power(u, e)).collect();
    (!parts.is_empty()).then(|| parts.join(" "))
}

pub fn emit_presentation(input: &QuiverInput) -> Result<Presentation> {
    let f = input.f();
    if !is_positive_diagonal(f) {
        return Err(Error::NotPositiveDiagonal(f.to_string()));
    }
    let d = input.d();
    let bounds: Vec<usize> = f
        .diagonal_entries()
        .iter()
        .map(|a| a.to_string().parse::<usize>().map_err(|_| Error::Parse(format!("a_j = {a} too large"))))
        .collect::<Result<_>>()?;
    let nus = MultiIndex::all(&bounds);
    let iso = |nu: &MultiIndex| {
        let c = nu.components();
        if d == 1 {
            format!("S_{}", c[0])
        } else {
            format!("S_({})", c.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        }
    };
    let unitaries: Vec<String> = if d == 1 { vec!["U".into()] } else { (1..=d).map(|j| format!("U_{j}")).collect() };
    let isometries: Vec<String> = nus.iter().map(iso).collect();

    let mut relations = Vec::new();
    for s in &isometries {
        relations.push((1, format!("{s}* {s} = 1")));
    }
    if isometries.len() > 1 {
        relations.push((1, "S_ν* S_μ = 0 for ν ≠ μ".to_string()));
    }
    for (nu, s) in nus.iter().zip(&isometries) {
        let exps: Vec<BigInt> = nu.components().iter().map(|&x| BigInt::from(x)).collect();
        let lhs = match unitary_word(&unitaries, &exps) {
            Some(w) => format!("{w} S"),
            None => "S".into(),
        };
        relations.push((2, format!("{lhs} = {s}")));
    }
    for (j, u) in unitaries.iter().enumerate() {
        let a_j = f.get(j, j);
        let lhs = power(u, a_j).expect("a_j >= 1");
        let rhs = match unitary_word(&unitaries, input.g().row(j)) {
            Some(w) => format!("S {w}"),
            None => "S".into(),
        };
        relations.push((3, format!("{lhs} S = {rhs}")));
    }
    let sum: Vec<String> = isometries.iter().map(|s| format!("{s} {s}*")).collect();
    relations.push((4, format!("{} = 1", sum.join(" + "))));
    Ok(Presentation { isometries, unitaries, relations })
}

fn int_value(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse::<Number>().expect("integer literal"))
}

fn matrix_value(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(int_value).collect())).collect())
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
}

#[derive(Serialize)]
struct ErrorJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    error: ErrorBody,
}

fn error_json(e: &Error, line: Option<usize>) -> String {
    let body = ErrorJson { line, error: ErrorBody { kind: e.kind(), message: e.to_string() } };
    serde_json::to_string(&body).expect("serializable error")
}

#[derive(Serialize)]
struct LevelJson {
    k: usize,
    size: usize,
    ker_rank: usize,
    coker: Value,
}

#[derive(Serialize)]
struct ClosedFormJson<'a> {
    family: &'a str,
    covered: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<&'a str>,
    #[serde(rename = "K0", skip_serializing_if = "Option::is_none")]
    k0: Option<Value>,
    #[serde(rename = "K1", skip_serializing_if = "Option::is_none")]
    k1: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
}

#[derive(Serialize)]
struct RelationJson<'a> {
    id: u8,
    relation: &'a str,
}

#[derive(Serialize)]
struct PresentationJson<'a> {
    isometries: &'a [String],
    unitaries: &'a [String],
    relations: Vec<RelationJson<'a>>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    d: usize,
    #[serde(rename = "F")]
    f: Value,
    #[serde(rename = "G")]
    g: Value,
    #[serde(rename = "K0")]
    k0: Value,
    #[serde(rename = "K1")]
    k1: Value,
    levels: Vec<LevelJson>,
    flags: Value,
    warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    checks: Option<&'a [CheckLine]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<Vec<ClosedFormJson<'a>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    presentation: Option<PresentationJson<'a>>,
}

struct Computed {
    result: KGroupsResult,
    checks: Option<Vec<CheckLine>>,
    closed: Option<Vec<ClosedFormLine>>,
    presentation: Option<Presentation>,
    breakdown: bool,
}

fn compute(job: &JobSpec) -> Result<Computed> {
    let input = &job.input;
    let levels = build_levels(input)?;
    let summaries = summarize_levels(&levels)?;
    let (k0, k1) = assemble(&summaries);
    let result = KGroupsResult { k0, k1, levels: summaries, warnings: input.warnings() };
    let checks = job.options.check.then(|| run_checks(input, &levels)).transpose()?;
    let closed = job.options.closed_form.then(|| run_closed_forms(input, &result));
    let presentation = job.options.presentation.then(|| emit_presentation(input)).transpose()?;
    Ok(Computed { result, checks, closed, presentation, breakdown: job.options.breakdown })
}

impl Computed {
    fn exit_code(&self) -> i32 {
        let check_failed = self.checks.iter().flatten().any(|c| c.status == Status::Fail);
        let diff_failed = self.closed.iter().flatten().any(|c| c.agrees == Some(false));
        if check_failed || diff_failed {
            EXIT_CHECK_FAILED
        } else {
            EXIT_OK
        }
    }

    fn to_json(&self, input: &QuiverInput) -> String {
        let r = &self.result;
        let report = JsonReport {
            d: input.d(),
            f: matrix_value(input.f()),
            g: matrix_value(input.g()),
            k0: r.k0.to_json(),
            k1: r.k1.to_json(),
            levels: r
                .levels
                .iter()
                .map(|l| LevelJson { k: l.k, size: l.size, ker_rank: l.kernel_rank, coker: l.cokernel.to_json() })
                .collect(),
            flags: json!({ "general_f": input.general_f_enabled() }),
            warnings: r.warnings.clone(),
            checks: self.checks.as_deref(),
            closed_form: self.closed.as_ref().map(|lines| {
                lines
                    .iter()
                    .map(|l| match &l.outcome {
                        Ok(c) => ClosedFormJson {
                            family: l.family,
                            covered: true,
                            rule: Some(&c.rule),
                            k0: Some(c.k0.to_json()),
                            k1: Some(c.k1.to_json()),
                            agrees: l.agrees,
                            reason: None,
                        },
                        Err(why) => ClosedFormJson {
                            family: l.family,
                            covered: false,
                            rule: None,
                            k0: None,
                            k1: None,
                            agrees: None,
                            reason: Some(why),
                        },
                    })
                    .collect()
            }),
            presentation: self.presentation.as_ref().map(|p| PresentationJson {
                isometries: &p.isometries,
                unitaries: &p.unitaries,
                relations: p.relations.iter().map(|(id, r)| RelationJson { id: *id, relation: r }).collect(),
            }),
        };
        serde_json::to_string(&report).expect("serializable report")
    }

    fn to_text(&self) -> String {
        let r = &self.result;
        let mut out = String::new();
        let _ = writeln!(out, "K0 = {}", r.k0);
        let _ = writeln!(out, "K1 = {}", r.k1);
        if self.breakdown {
            let levels = &r.levels;
            let _ = writeln!(out, "\nlevels:");
            let _ = writeln!(out, "  {:>3}  {:>8}  {:>8}  coker", "k", "size", "ker_rank");
            for l in levels {
                let _ = writeln!(out, "  {:>3}  {:>8}  {:>8}  {}", l.k, l.size, l.kernel_rank, l.cokernel);
            }
        }
        if let Some(checks) = &self.checks {
            let _ = writeln!(out, "\nchecks:");
            for c in checks {
                let detail = if c.detail.is_empty() { String::new() } else { format!("  ({})", c.detail) };
                let _ = writeln!(out, "  {}  {}{detail}", c.status.label(), c.name);
            }
        }
        if let Some(closed) = &self.closed {
            let _ = writeln!(out, "\nclosed form:");
            if closed.is_empty() {
                let _ = writeln!(out, "  none applicable");
            }
            for l in closed {
                match (&l.outcome, l.agrees) {
                    (Ok(c), Some(true)) => {
                        let _ = writeln!(out, "  AGREE   {} [{}]", l.family, c.rule);
                    }
                    (Ok(c), _) => {
                        let _ = writeln!(out, "  DIFFER  {} [{}]: K0 = {}, K1 = {}", l.family, c.rule, c.k0, c.k1);
                    }
                    (Err(why), _) => {
                        let _ = writeln!(out, "  N/A     {}: {why}", l.family);
                    }
                }
            }
        }
        if let Some(p) = &self.presentation {
            let _ = writeln!(out, "\npresentation:");
            let _ = writeln!(out, "  isometries: {}", p.isometries.join(", "));
            let _ = writeln!(out, "  unitaries: {}", p.unitaries.join(", "));
            for (id, rel) in &p.relations {
                let _ = writeln!(out, "  ({id}) {rel}");
            }
        }
        for w in &r.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

/// Runs one job and renders its report.
pub fn run(job: &JobSpec) -> Report {
    match compute(job) {
        Ok(computed) => {
            let stdout = match job.options.format {
                OutputFormat::Json => format!("{}\n", computed.to_json(&job.input)),
                OutputFormat::Text => computed.to_text(),
            };
            Report { exit_code: computed.exit_code(), stdout, stderr: String::new() }
        }
        Err(e) => error_report(&e, job.options.format),
    }
}

pub fn error_report(e: &Error, format: OutputFormat) -> Report {
    match format {
        OutputFormat::Json => {
            Report { exit_code: EXIT_INPUT_ERROR, stdout: format!("{}\n", error_json(e, None)), stderr: String::new() }
        }
        OutputFormat::Text => {
            Report { exit_code: EXIT_INPUT_ERROR, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
    }
}

/// One job per non-empty, non-comment line; one JSON object per job, in
/// input order. The exit code is the largest over all jobs.
pub fn run_batch(text: &str, options: ReportOptions, input_options: InputOptions) -> Report {
    let options = ReportOptions { format: OutputFormat::Json, ..options };
    let jobs: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let results: Vec<(i32, String)> = jobs
        .par_iter()
        .map(|&(line, src)| match parse_input(src, options, input_options) {
            Ok(job) => {
                let report = run(&job);
                (report.exit_code, report.stdout.trim_end().to_string())
            }
            Err(e) => (EXIT_INPUT_ERROR, error_json(&e, Some(line))),
        })
        .collect();
    let mut stdout = String::new();
    for (_, v) in &results {
        let _ = writeln!(stdout, "{v}");
    }
    let exit_code = results.iter().map(|(c, _)| *c).max().unwrap_or(EXIT_OK);
    Report { exit_code, stdout, stderr: String::new() }
}

/// Command-line arguments of `quiverk`.
#[derive(Debug, Clone, Parser)]
#[command(name = "quiverk", version, about = "K-groups of the Cuntz-Pimsner algebras O_{F,G}(T^d)")]
pub struct Cli {
    /// Inline input such as "F=diag(2,3); G=[[1,1],[0,1]]", or a file containing it.
    pub input: Option<String>,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Per-level table of kernel ranks and cokernels.
    #[arg(long)]
    pub breakdown: bool,
    /// Verify the level identities and the Ω consistency checks.
    #[arg(long)]
    pub check: bool,
    /// Compare against every applicable closed form.
    #[arg(long)]
    pub closed_form: bool,
    /// Print the generators-and-relations presentation.
    #[arg(long)]
    pub presentation: bool,
    /// Accept F that is not positive diagonal.
    #[arg(long)]
    pub general_f: bool,
    /// Run every line of FILE as a job and print JSON lines.
    #[arg(long, value_name = "FILE", conflicts_with = "input")]
    pub batch: Option<PathBuf>,
}

impl Cli {
    fn report_options(&self) -> ReportOptions {
        ReportOptions {
            breakdown: self.breakdown,
            check: self.check,
            closed_form: self.closed_form,
            presentation: self.presentation,
            format: if self.json { OutputFormat::Json } else { OutputFormat::Text },
        }
    }
}

/// Executes parsed arguments. `max_binomial` is the raw value of
/// [`MAX_BINOMIAL_ENV`], if set.
pub fn execute(cli: &Cli, max_binomial: Option<&str>) -> Report {
    let options = cli.report_options();
    let limit = match max_binomial.map(|s| s.trim().parse::<u128>()) {
        None => DEFAULT_MAX_BINOMIAL,
        Some(Ok(v)) => v,
        Some(Err(_)) => {
            let e = Error::Parse(format!("{MAX_BINOMIAL_ENV} must be a nonnegative integer"));
            return error_report(&e, options.format);
        }
    };
    let input_options = InputOptions { allow_general_f: cli.general_f, max_binomial: limit };
    if let Some(path) = &cli.batch {
        return match std::fs::read_to_string(path) {
            Ok(text) => run_batch(&text, options, input_options),
            Err(e) => error_report(&Error::Parse(format!("{}: {e}", path.display())), options.format),
        };
    }
    let Some(arg) = &cli.input else {
        return error_report(
            &Error::Parse("no input given; pass inline input, a file, or --batch FILE".into()),
            options.format,
        );
    };
    let path = std::path::Path::new(arg);
    let source = if path.is_file() {
        match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => return error_report(&Error::Parse(format!("{arg}: {e}")), options.format),
        }
    } else {
        arg.clone()
    };
    match parse_input(&source, options, input_options) {
        Ok(job) => run(&job),
        Err(e) => error_report(&e, options.format),
    }
}
