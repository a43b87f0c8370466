//! Command-line front end. Human-readable reports go to `out`; `--out FILE`
//! also writes the JSON report described in `docs/report-schema.md`.
//!
//! Exit status: 0 success, 1 verdict failure, 2 input error.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::chain::{compose_transform, lambda_table};
use crate::engine::{
    build_corpus, check_certificate, Certificate, CheckReport, KnowledgeBase, RESERVED_CONSTANTS,
};
use crate::numeric::{ade_falsify, fe_residual, FalsifierReport, FalsifySpec, ResidualReport, SamplePlan, Verdict};
use crate::syntax::{parse_expr, parse_poly, parse_source, SourceFile};

/// Overrides the default residual tolerance.
pub const TOLERANCE_VAR: &str = "DIFFTRANS_TOLERANCE";
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "difftrans", version, about = "Differential transcendence certificates and numeric checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the statements of a .dfa file and check every certificate.
    Certify {
        file: PathBuf,
        /// Only report this statement (or chain member).
        #[arg(long)]
        equation: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equation for `g o e` from an equation `P` for `g`.
    Transform {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        inner: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chain-rule coefficients lambda_kj of an inner function.
    Lambda {
        #[arg(long)]
        inner: String,
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the identities of a .dfa file at their sample points.
    Residual {
        file: PathBuf,
        /// Identity name, or `all`.
        #[arg(long, default_value = "all")]
        plan: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for an algebraic differential equation of bounded shape.
    Falsify {
        #[arg(long)]
        symbol: String,
        #[arg(long)]
        order: u32,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        coeff_degree: u32,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// An input error, reported with exit status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Run = Result<i32, InputError>;

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{e}");
            return code;
        }
    };
    let result = match cli.command {
        Command::Certify { file, equation, out: json } => certify(&file, equation.as_deref(), json.as_deref(), out),
        Command::Transform { poly, inner, out: json } => transform(&poly, &inner, json.as_deref(), out),
        Command::Lambda { inner, kmax, out: json } => lambda(&inner, kmax, json.as_deref(), out),
        Command::Residual { file, plan, out: json } => residual(&file, &plan, json.as_deref(), out),
        Command::Falsify { symbol, order, degree, coeff_degree, samples, seed, out: json } => {
            let spec = FalsifySpec::new(&symbol, order, degree, coeff_degree, samples, seed);
            falsify(&spec, json.as_deref(), out)
        }
    };
    match result {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

/// Default tolerance, from the environment when set.
pub fn default_tolerance() -> f64 {
    std::env::var(TOLERANCE_VAR).ok().and_then(|v| v.parse().ok()).filter(|t: &f64| *t > 0.0).unwrap_or(DEFAULT_TOLERANCE)
}

fn write_json<T: Serialize>(path: Option<&Path>, report: &T) -> Result<(), InputError> {
    if let Some(path) = path {
        let mut text = serde_json::to_string_pretty(report)?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// Read, parse and link a source file against the standard knowledge base.
pub fn load_source(path: &Path) -> Result<SourceFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let src = parse_source(&text).map_err(|e| format!("{}:{e}", path.display()))?;
    let functions: BTreeSet<String> = KnowledgeBase::standard().symbols().map(|s| s.name.clone()).collect();
    let constants: BTreeSet<String> = RESERVED_CONSTANTS.iter().map(|s| s.to_string()).collect();
    src.link(&functions, &constants).map_err(|e| format!("{}:{e}", path.display()))?;
    Ok(src)
}

#[derive(Serialize)]
struct CertifiedEntry<'a> {
    statement: &'a str,
    certificate: &'a Certificate,
    check: CheckReport,
}

#[derive(Serialize)]
struct FailedEntry {
    statement: String,
    error: String,
}

#[derive(Serialize)]
struct CertifyReport<'a> {
    command: &'static str,
    file: String,
    certified: Vec<CertifiedEntry<'a>>,
    failed: Vec<FailedEntry>,
    accepted: bool,
}

fn certify(file: &Path, only: Option<&str>, json: Option<&Path>, out: &mut dyn Write) -> Run {
    let src = load_source(file).map_err(InputError)?;
    let corpus = build_corpus(&src, KnowledgeBase::standard());
    let selected = |statement: &str, symbols: &[&str]| only.is_none_or(|n| n == statement || symbols.contains(&n));
    let mut report =
        CertifyReport { command: "certify", file: file.display().to_string(), certified: Vec::new(), failed: Vec::new(), accepted: true };
    for o in &corpus.outcomes {
        match &o.result {
            Ok(certs) => {
                for c in certs {
                    if selected(&o.name, &[c.symbol.as_str()]) {
                        let check = check_certificate(c, &corpus.kb);
                        report.accepted &= check.accepted;
                        report.certified.push(CertifiedEntry { statement: &o.name, certificate: c, check });
                    }
                }
            }
            Err(e) if selected(&o.name, &[]) => {
                report.accepted = false;
                report.failed.push(FailedEntry { statement: o.name.clone(), error: e.to_string() });
            }
            Err(_) => {}
        }
    }
    if let Some(name) = only {
        if report.certified.is_empty() && report.failed.is_empty() {
            return Err(InputError(format!("no certifying statement named `{name}`")));
        }
    }
    for e in &report.certified {
        write!(out, "{}", e.certificate)?;
        let verdict = if e.check.accepted { "accepted" } else { "REJECTED" };
        writeln!(out, "check: {verdict} ({} nodes)", e.check.nodes)?;
        for r in &e.check.rejections {
            writeln!(out, "  at {} ({}): {}", r.path, r.rule, r.reason)?;
        }
        writeln!(out)?;
    }
    for f in &report.failed {
        writeln!(out, "failed {}: {}", f.statement, f.error)?;
    }
    writeln!(
        out,
        "{} certified, {} failed: {}",
        report.certified.len(),
        report.failed.len(),
        if report.accepted { "ok" } else { "FAILED" }
    )?;
    write_json(json, &report)?;
    Ok(if report.accepted { EXIT_OK } else { EXIT_VERDICT })
}

#[derive(Serialize)]
struct TransformReport {
    command: &'static str,
    poly: String,
    inner: String,
    result: String,
    clearing_power: u32,
    note: String,
}

fn transform(poly: &str, inner: &str, json: Option<&Path>, out: &mut dyn Write) -> Run {
    let f = parse_poly(poly)?;
    let e = parse_expr(inner)?;
    let t = compose_transform(&f, &e)?;
    let report = TransformReport {
        command: "transform",
        poly: f.to_string(),
        inner: e.to_string(),
        result: t.poly.to_string(),
        clearing_power: t.clearing_power,
        note: t.note,
    };
    writeln!(out, "f  = {}", report.poly)?;
    writeln!(out, "e  = {}", report.inner)?;
    writeln!(out, "f1 = {}", report.result)?;
    writeln!(out, "{}", report.note)?;
    write_json(json, &report)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct LambdaEntry {
    k: usize,
    j: usize,
    value: String,
}

#[derive(Serialize)]
struct LambdaReport {
    command: &'static str,
    inner: String,
    kmax: usize,
    entries: Vec<LambdaEntry>,
}

fn lambda(inner: &str, kmax: usize, json: Option<&Path>, out: &mut dyn Write) -> Run {
    let e = parse_expr(inner)?;
    let table = lambda_table(&e, kmax)?;
    let mut entries = Vec::new();
    for k in 1..=kmax {
        for (j, v) in table.row(k) {
            writeln!(out, "lambda[{k},{j}] = {v}")?;
            entries.push(LambdaEntry { k, j, value: v.to_string() });
        }
    }
    write_json(json, &LambdaReport { command: "lambda", inner: e.to_string(), kmax, entries })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ResidualRun {
    command: &'static str,
    file: String,
    reports: Vec<ResidualReport>,
    passed: bool,
}

/// Residual reports for the identities of `src` selected by `plan`.
pub fn residual_reports(src: &SourceFile, plan: &str) -> Result<Vec<ResidualReport>, String> {
    let default = default_tolerance();
    let mut reports = Vec::new();
    for id in src.identities().filter(|i| plan == "all" || i.name == plan) {
        let samples = SamplePlan::new(id.samples.clone(), id.tolerance.unwrap_or(default));
        let r = fe_residual(&id.name, &id.lhs, &id.rhs, &samples).map_err(|e| format!("{}: {e}", id.name))?;
        reports.push(r);
    }
    if reports.is_empty() {
        return Err(format!("no identity named `{plan}`"));
    }
    Ok(reports)
}

fn residual(file: &Path, plan: &str, json: Option<&Path>, out: &mut dyn Write) -> Run {
    let src = load_source(file).map_err(InputError)?;
    let reports = residual_reports(&src, plan).map_err(InputError)?;
    for r in &reports {
        let verdict = if r.passed { "pass" } else { "FAIL" };
        writeln!(out, "{}: max {:.3e} (tolerance {:.0e}) {verdict}", r.name, r.max, r.tolerance)?;
        for e in &r.entries {
            writeln!(out, "  z = {}{:+}i  residual {:.3e}", e.z.re, e.z.im, e.residual)?;
        }
        for s in &r.skipped {
            writeln!(out, "  z = {}{:+}i  skipped: {}", s.z.re, s.z.im, s.reason)?;
        }
    }
    let passed = reports.iter().all(|r| r.passed);
    write_json(json, &ResidualRun { command: "residual", file: file.display().to_string(), reports, passed })?;
    Ok(if passed { EXIT_OK } else { EXIT_VERDICT })
}

#[derive(Serialize)]
struct FalsifyRun<'a> {
    command: &'static str,
    report: &'a FalsifierReport,
}

/// Human-readable falsifier summary.
pub fn render_falsifier(r: &FalsifierReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "symbol {}: order {}, degree {}, coefficient degree {}", r.symbol, r.order, r.degree, r.coeff_degree)?;
    writeln!(out, "matrix {} x {}, seed {}", r.rows, r.columns, r.seed)?;
    writeln!(out, "sigma_min {:.3e}, sigma_max {:.3e}, threshold {:.0e}", r.sigma_min, r.sigma_max, r.threshold)?;
    writeln!(out, "qr min pivot {:.3e}, qr rank {}, oracles agree: {}", r.qr_min_pivot, r.qr_rank, r.oracles_agree)?;
    match &r.verdict {
        Verdict::NoDependencyFound => writeln!(out, "verdict: NoDependencyFound"),
        Verdict::DependencyCandidate { coefficients, holdout_residual } => {
            writeln!(out, "verdict: DependencyCandidate (hold-out residual {holdout_residual:.3e})")?;
            for c in coefficients {
                writeln!(out, "  {:>14} {:+.6e}{:+.6e}i", c.column, c.value.re, c.value.im)?;
            }
            Ok(())
        }
    }
}

fn falsify(spec: &FalsifySpec, json: Option<&Path>, out: &mut dyn Write) -> Run {
    let report = ade_falsify(spec)?;
    render_falsifier(&report, out)?;
    write_json(json, &FalsifyRun { command: "falsify", report: &report })?;
    Ok(match report.verdict {
        Verdict::NoDependencyFound => EXIT_OK,
        Verdict::DependencyCandidate { .. } => EXIT_VERDICT,
    })
}
