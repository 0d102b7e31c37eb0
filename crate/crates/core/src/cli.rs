//! Command-line front end: argument parsing, dispatch, and report output.
//!
//! Exit codes: 0 all checks pass, 1 at least one mismatch, 2 usage or
//! domain error, 3 numeric failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::acceptance::{run_all, AcceptanceConfig};
use crate::error::Error;
use crate::exactnum::{format_rational, parse_rational, Rational};
use crate::hyperseries::{
    check_product_formula, contiguous_relation_check, terminating_4f3_check, ProductFormula,
    DEFAULT_ORDER,
};
use crate::identities::{verify_grid, GridSpec, IdentityId};
use crate::numerics::{
    dixon_check, dminus_check, format_float, gamma_selftest, integral_check, linear4f3_check,
    IntegralKind, NumericReport, Precision, DEFAULT_MAX_TERMS,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "catconv",
    version,
    about = "Verify alternating Catalan convolution identities exactly and numerically"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Worker threads for grid sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Omit timings so identical runs produce identical reports.
    #[arg(long, global = true)]
    pub no_timing: bool,

    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact sweep of one identity over a parameter grid.
    Verify(VerifyArgs),
    /// Coefficientwise check of a product formula.
    Coeffs(CoeffArgs),
    /// Terminating 4F3 sum against its closed form.
    Terminating(TerminatingArgs),
    /// Contiguous relation splitting the 4F3 into two 3F2 sums.
    Contiguous(TerminatingArgs),
    /// Series at unity against Gamma closed forms.
    Numeric(NumericArgs),
    /// Gamma reflection and duplication residuals.
    GammaSelftest(PrecArgs),
    /// Double integral by Gauss-Jacobi quadrature against its closed form.
    Integral(IntegralArgs),
    /// The whole acceptance suite.
    All(AllArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub identity: String,
    #[arg(long, value_parser = parse_range)]
    pub n: RangeInclusive<u32>,
    #[arg(long, value_parser = parse_range, default_value = "0..0")]
    pub lambda: RangeInclusive<u32>,
    #[arg(long, value_parser = parse_range, default_value = "0..0")]
    pub mu: RangeInclusive<u32>,
    /// Comma-separated rationals.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_list, default_value = "")]
    pub a: RationalList,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_list, default_value = "")]
    pub c: RationalList,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    #[arg(long)]
    pub formula: String,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_list)]
    pub a: RationalList,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_list)]
    pub c: RationalList,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_list, default_value = "1")]
    pub lambda: RationalList,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: u32,
}

#[derive(Debug, Args)]
pub struct TerminatingArgs {
    #[arg(long, value_parser = parse_range)]
    pub n: RangeInclusive<u32>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_list)]
    pub c: RationalList,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_list)]
    pub e: RationalList,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_list)]
    pub lambda: RationalList,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NumericKind {
    Dixon,
    Dminus,
    Linear4f3,
}

#[derive(Debug, Args)]
pub struct NumericArgs {
    #[arg(value_enum)]
    pub kind: NumericKind,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_list)]
    pub a: RationalList,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_list)]
    pub c: RationalList,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_list)]
    pub e: RationalList,
    /// Only read by `linear4f3`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational_list, default_value = "1")]
    pub lambda: RationalList,
    #[arg(long, default_value_t = 40)]
    pub prec: u32,
    #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
    pub max_terms: usize,
}

#[derive(Debug, Args)]
pub struct PrecArgs {
    #[arg(long, default_value_t = 40)]
    pub prec: u32,
}

#[derive(Debug, Args)]
pub struct IntegralArgs {
    #[arg(long, value_parser = parse_integral_kind)]
    pub which: IntegralKind,
    #[arg(long, value_parser = parse_range)]
    pub n: RangeInclusive<u32>,
    #[arg(long, value_parser = parse_range, default_value = "0..0")]
    pub lambda: RangeInclusive<u32>,
    #[arg(long, default_value_t = 40)]
    pub prec: u32,
}

#[derive(Debug, Args)]
pub struct AllArgs {
    /// Reduced grids (n <= 24, lambda and mu <= 6, order 24, 30 digits).
    #[arg(long)]
    pub quick: bool,
}

/// Newtype so clap does not treat the list as repeated values.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalList(pub Vec<Rational>);

/// `lo..hi` (inclusive) or a single integer.
pub fn parse_range(text: &str) -> Result<RangeInclusive<u32>, String> {
    let parse = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| format!("bad integer `{s}` in range `{text}`"))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
        None => {
            let v = parse(text)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range `{text}`"));
    }
    Ok(lo..=hi)
}

pub fn parse_rational_list(text: &str) -> Result<RationalList, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_rational(s).ok_or_else(|| format!("bad rational `{s}` (expected p/q)")))
        .collect::<Result<_, _>>()
        .map(RationalList)
}

fn parse_integral_kind(text: &str) -> Result<IntegralKind, String> {
    text.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FailureEntry {
    pub params: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
}

/// Serialized report; field order is the schema order.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub command: String,
    pub config_echo: BTreeMap<String, Value>,
    pub cases_run: usize,
    pub skipped: usize,
    pub failures: Vec<FailureEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(skip)]
    pub exit_code: i32,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            config_echo: BTreeMap::new(),
            cases_run: 0,
            skipped: 0,
            failures: Vec::new(),
            findings: Vec::new(),
            checks: Vec::new(),
            error: None,
            elapsed_ms: None,
            exit_code: EXIT_PASS,
        }
    }

    fn echo(&mut self, key: &str, value: Value) {
        self.config_echo.insert(key.to_string(), value);
    }

    fn fail(&mut self, params: Vec<(String, String)>, lhs: String, rhs: String) {
        self.failures.push(FailureEntry {
            params: params.into_iter().collect(),
            lhs,
            rhs,
        });
    }

    fn error(&mut self, e: &Error) {
        self.error = Some(e.to_string());
    }

    fn finish_exit_code(&mut self, numeric_error: bool) {
        self.exit_code = if self.error.is_some() {
            if numeric_error {
                EXIT_NUMERIC
            } else {
                EXIT_USAGE
            }
        } else if self.failures.is_empty() {
            EXIT_PASS
        } else {
            EXIT_MISMATCH
        };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for (k, v) in &self.config_echo {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "  {k} = {shown}");
        }
        for check in &self.checks {
            if let Some(line) = check.get("line").and_then(Value::as_str) {
                let _ = writeln!(out, "{line}");
            }
        }
        let _ = writeln!(
            out,
            "cases run: {}, skipped: {}, failures: {}",
            self.cases_run,
            self.skipped,
            self.failures.len()
        );
        for f in self.failures.iter().take(20) {
            let params: Vec<String> = f.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(
                out,
                "  FAIL {}: lhs {} rhs {}",
                params.join(" "),
                f.lhs,
                f.rhs
            );
        }
        if self.failures.len() > 20 {
            let _ = writeln!(out, "  ... {} more", self.failures.len() - 20);
        }
        for finding in &self.findings {
            let _ = writeln!(out, "finding: {finding}");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "elapsed: {ms} ms");
        }
        out
    }
}

fn range_value(r: &RangeInclusive<u32>) -> Value {
    Value::String(format!("{}..{}", r.start(), r.end()))
}

fn rationals_value(list: &RationalList) -> Value {
    Value::Array(
        list.0
            .iter()
            .map(|r| Value::String(format_rational(r)))
            .collect(),
    )
}

/// Runs a parsed command; never panics on bad input.
pub fn run(cli: &Cli) -> Report {
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Verify(args) => verify(args),
        Command::Coeffs(args) => coeffs(args),
        Command::Terminating(args) => terminating(args, false),
        Command::Contiguous(args) => terminating(args, true),
        Command::Numeric(args) => numeric(args),
        Command::GammaSelftest(args) => gamma(args),
        Command::Integral(args) => integral(args),
        Command::All(args) => all(args, cli.no_timing),
    };
    if !cli.no_timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

fn verify(args: &VerifyArgs) -> Report {
    let mut report = Report::new("verify");
    report.echo("identity", json!(args.identity));
    report.echo("n", range_value(&args.n));
    report.echo("lambda", range_value(&args.lambda));
    report.echo("mu", range_value(&args.mu));
    report.echo("a", rationals_value(&args.a));
    report.echo("c", rationals_value(&args.c));
    let id: IdentityId = match args.identity.parse() {
        Ok(id) => id,
        Err(e) => {
            report.error(&Error::Domain(e));
            report.finish_exit_code(false);
            return report;
        }
    };
    let grid = GridSpec::new(args.n.clone())
        .with_lambda(args.lambda.clone())
        .with_mu(args.mu.clone())
        .with_rationals(args.a.0.clone(), args.c.0.clone());
    match verify_grid(id, &grid) {
        Ok(result) => {
            report.cases_run = result.cases_run;
            report.skipped = result.skipped;
            for f in &result.failures {
                report.fail(
                    f.params.describe(id),
                    format_rational(&f.lhs),
                    format_rational(&f.rhs),
                );
            }
            report.findings.extend(result.finding);
            report.finish_exit_code(false);
        }
        Err(e) => {
            report.error(&e);
            report.finish_exit_code(e.is_numeric_failure());
        }
    }
    report
}

fn coeffs(args: &CoeffArgs) -> Report {
    let mut report = Report::new("coeffs");
    report.echo("formula", json!(args.formula));
    report.echo("a", rationals_value(&args.a));
    report.echo("c", rationals_value(&args.c));
    report.echo("lambda", rationals_value(&args.lambda));
    report.echo("order", json!(args.order));
    let formula: ProductFormula = match args.formula.parse() {
        Ok(f) => f,
        Err(e) => {
            report.error(&Error::Domain(e));
            report.finish_exit_code(false);
            return report;
        }
    };
    let lambdas = if formula.uses_lambda() {
        args.lambda.0.clone()
    } else {
        args.lambda.0.iter().take(1).cloned().collect()
    };
    let mut first_error = None;
    for a in &args.a.0 {
        for c in &args.c.0 {
            for l in &lambdas {
                match check_product_formula(formula, a, c, l, args.order) {
                    Ok(r) => {
                        report.cases_run += 1;
                        if let Some((k, lhs, rhs)) = &r.mismatch {
                            let mut params = r.params();
                            params.push(("coefficient".into(), k.to_string()));
                            report.fail(params, format_rational(lhs), format_rational(rhs));
                        }
                    }
                    Err(
                        e @ (Error::ZeroLowerPochhammer { .. }
                        | Error::DegenerateLambda
                        | Error::Domain(_)),
                    ) => {
                        report.skipped += 1;
                        first_error.get_or_insert(e);
                    }
                    Err(e) => {
                        report.error(&e);
                        report.finish_exit_code(e.is_numeric_failure());
                        return report;
                    }
                }
            }
        }
    }
    // a single inadmissible request is a usage error, not a skip
    if report.cases_run == 0 {
        if let Some(e) = first_error {
            report.error(&e);
        }
    }
    report.finish_exit_code(false);
    report
}

fn terminating(args: &TerminatingArgs, contiguous: bool) -> Report {
    let mut report = Report::new(if contiguous {
        "contiguous"
    } else {
        "terminating"
    });
    report.echo("n", range_value(&args.n));
    report.echo("c", rationals_value(&args.c));
    report.echo("e", rationals_value(&args.e));
    report.echo("lambda", rationals_value(&args.lambda));
    let mut first_error = None;
    for n in args.n.clone() {
        for c in &args.c.0 {
            for e in &args.e.0 {
                for l in &args.lambda.0 {
                    let result = if contiguous {
                        contiguous_relation_check(n, c, e, l)
                    } else {
                        terminating_4f3_check(n, c, e, l)
                    };
                    match result {
                        Ok(r) => {
                            report.cases_run += 1;
                            if !r.passed() {
                                report.fail(
                                    r.params.clone(),
                                    format_rational(&r.lhs),
                                    format_rational(&r.rhs),
                                );
                            }
                        }
                        Err(e) => {
                            report.skipped += 1;
                            first_error.get_or_insert(e);
                        }
                    }
                }
            }
        }
    }
    if report.cases_run == 0 {
        if let Some(e) = first_error {
            report.error(&e);
        }
    }
    report.finish_exit_code(false);
    report
}

fn push_numeric(report: &mut Report, numeric: &NumericReport, digits: u32) {
    for check in &numeric.checks {
        report.cases_run += 1;
        let params: Vec<String> = check
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let error = format_float(&check.error, 3);
        report.checks.push(json!({
            "label": check.label,
            "params": check.params.iter().cloned().collect::<BTreeMap<_, _>>(),
            "value": format_float(&check.value, digits),
            "reference": format_float(&check.reference, digits),
            "error": error,
            "tolerance": format_float(&check.tolerance, 3),
            "passed": check.passed(),
            "line": format!(
                "  [{}] {} {}: value {} reference {} error {}",
                if check.passed() { "PASS" } else { "FAIL" },
                check.label,
                params.join(" "),
                format_float(&check.value, digits.min(30)),
                format_float(&check.reference, digits.min(30)),
                error
            ),
        }));
        if !check.passed() {
            report.fail(
                check.params.clone(),
                format_float(&check.value, digits),
                format_float(&check.reference, digits),
            );
        }
    }
}

fn precision_or_error(report: &mut Report, digits: u32) -> Option<Precision> {
    match Precision::new(digits) {
        Ok(p) => Some(p),
        Err(e) => {
            report.error(&e);
            report.finish_exit_code(false);
            None
        }
    }
}

fn numeric(args: &NumericArgs) -> Report {
    let name = match args.kind {
        NumericKind::Dixon => "dixon",
        NumericKind::Dminus => "dminus",
        NumericKind::Linear4f3 => "linear4f3",
    };
    let mut report = Report::new(&format!("numeric {name}"));
    report.echo("a", rationals_value(&args.a));
    report.echo("c", rationals_value(&args.c));
    report.echo("e", rationals_value(&args.e));
    if args.kind == NumericKind::Linear4f3 {
        report.echo("lambda", rationals_value(&args.lambda));
    }
    report.echo("prec", json!(args.prec));
    report.echo("max_terms", json!(args.max_terms));
    let Some(prec) = precision_or_error(&mut report, args.prec) else {
        return report;
    };
    let lambdas: Vec<Rational> = if args.kind == NumericKind::Linear4f3 {
        args.lambda.0.clone()
    } else {
        vec![Rational::from(1)]
    };
    for a in &args.a.0 {
        for c in &args.c.0 {
            for e in &args.e.0 {
                for l in &lambdas {
                    let result = match args.kind {
                        NumericKind::Dixon => dixon_check(a, c, e, prec, args.max_terms),
                        NumericKind::Dminus => dminus_check(a, c, e, prec, args.max_terms),
                        NumericKind::Linear4f3 => linear4f3_check(a, c, e, l, prec, args.max_terms),
                    };
                    match result {
                        Ok(r) => push_numeric(&mut report, &r, args.prec),
                        Err(err) => {
                            report.error(&err);
                            report.finish_exit_code(err.is_numeric_failure());
                            return report;
                        }
                    }
                }
            }
        }
    }
    report.finish_exit_code(false);
    report
}

fn gamma(args: &PrecArgs) -> Report {
    let mut report = Report::new("gamma-selftest");
    report.echo("prec", json!(args.prec));
    let Some(prec) = precision_or_error(&mut report, args.prec) else {
        return report;
    };
    match gamma_selftest(prec) {
        Ok(r) => {
            push_numeric(&mut report, &r, args.prec);
            report.finish_exit_code(false);
        }
        Err(e) => {
            report.error(&e);
            report.finish_exit_code(true);
        }
    }
    report
}

fn integral(args: &IntegralArgs) -> Report {
    let mut report = Report::new("integral");
    report.echo("which", json!(args.which.name()));
    report.echo("n", range_value(&args.n));
    report.echo("lambda", range_value(&args.lambda));
    report.echo("prec", json!(args.prec));
    let Some(prec) = precision_or_error(&mut report, args.prec) else {
        return report;
    };
    for n in args.n.clone() {
        for l in args.lambda.clone() {
            match integral_check(args.which, n, l, prec) {
                Ok(r) => push_numeric(&mut report, &r, args.prec),
                Err(e) => {
                    report.error(&e);
                    report.finish_exit_code(e.is_numeric_failure());
                    return report;
                }
            }
        }
    }
    report.finish_exit_code(false);
    report
}

fn all(args: &AllArgs, no_timing: bool) -> Report {
    let mut report = Report::new(if args.quick { "all --quick" } else { "all" });
    report.echo("quick", json!(args.quick));
    let config = if args.quick {
        AcceptanceConfig::quick()
    } else {
        AcceptanceConfig::full()
    };
    for outcome in run_all(&config) {
        report.cases_run += 1;
        let line = if no_timing {
            outcome.line()
        } else {
            outcome.timed_line()
        };
        report.checks.push(json!({
            "criterion": outcome.id,
            "title": outcome.title,
            "passed": outcome.passed,
            "detail": outcome.detail,
            "line": line,
        }));
        if !outcome.passed {
            report.fail(
                vec![("criterion".into(), outcome.id.to_string())],
                "fail".into(),
                outcome.detail.clone(),
            );
        }
    }
    report.finish_exit_code(false);
    report
}

/// Parses `args`, runs, prints, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    let execute = || run(&cli);
    let report = match cli.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
        {
            Ok(pool) => pool.install(execute),
            Err(e) => {
                eprintln!("catconv: cannot start {jobs} workers: {e}");
                return EXIT_USAGE;
            }
        },
        None => execute(),
    };
    let rendered = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    print!("{rendered}");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &rendered) {
            eprintln!("catconv: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    if let Some(e) = &report.error {
        eprintln!("catconv: {e}");
    }
    report.exit_code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0..40").unwrap(), 0..=40);
        assert_eq!(parse_range("7").unwrap(), 7..=7);
        assert_eq!(parse_range("2..=3").unwrap(), 2..=3);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("a..2").is_err());
    }

    #[test]
    fn rational_lists() {
        let list = parse_rational_list("1/2, 3,-2/4").unwrap();
        assert_eq!(
            list.0,
            vec![
                Rational::from((1, 2)),
                Rational::from(3),
                Rational::from((-1, 2))
            ]
        );
        assert!(parse_rational_list("1/0x").is_err());
        assert!(parse_rational_list("").unwrap().0.is_empty());
    }

    #[test]
    fn verify_counts_cases() {
        let cli = Cli::try_parse_from([
            "catconv",
            "verify",
            "--identity",
            "thm-a",
            "--n",
            "0..40",
            "--lambda",
            "0..10",
        ])
        .unwrap();
        let report = run(&cli);
        assert_eq!(report.cases_run, 451);
        assert!(report.failures.is_empty());
        assert_eq!(report.exit_code, EXIT_PASS);
    }

    #[test]
    fn unknown_identity_is_usage_error() {
        let cli = Cli::try_parse_from(["catconv", "verify", "--identity", "thm-z", "--n", "0..3"])
            .unwrap();
        let report = run(&cli);
        assert_eq!(report.exit_code, EXIT_USAGE);
        assert!(report.error.is_some());
    }

    #[test]
    fn flagged_corollary_is_a_mismatch() {
        let cli = Cli::try_parse_from([
            "catconv",
            "verify",
            "--identity",
            "cor-2",
            "--n",
            "0..4",
            "--lambda",
            "0..2",
        ])
        .unwrap();
        let report = run(&cli);
        assert_eq!(report.exit_code, EXIT_MISMATCH);
        assert_eq!(report.findings.len(), 1);
    }

    #[test]
    fn starved_series_is_numeric_failure() {
        let cli = Cli::try_parse_from([
            "catconv",
            "numeric",
            "dixon",
            "--a",
            "1/2",
            "--c",
            "1/4",
            "--e",
            "1/4",
            "--max-terms",
            "4",
        ])
        .unwrap();
        assert_eq!(run(&cli).exit_code, EXIT_NUMERIC);
    }

    #[test]
    fn low_precision_is_usage_error() {
        let cli = Cli::try_parse_from(["catconv", "gamma-selftest", "--prec", "10"]).unwrap();
        assert_eq!(run(&cli).exit_code, EXIT_USAGE);
    }
}
