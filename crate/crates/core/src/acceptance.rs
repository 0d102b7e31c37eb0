//! The end-to-end acceptance criteria, runnable at full or reduced size.
//!
//! Shared by the `all` subcommand and the `acceptance` test target.

use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, rat, Rational};
use crate::hyperseries::{
    check_product_formula, contiguous_relation_check, default_rational_grid, terminating_4f3_check,
    ProductFormula,
};
use crate::identities::{
    lhs_value, odd_vanishing, rhs_value, verify_grid, GridSpec, IdentityId, IdentityParams,
};
use crate::numerics::{
    dixon_check, dminus_check, gamma_selftest, integral_check, linear4f3_check, pi, ten_to_minus,
    BigFloat, IntegralKind, NumericReport, Precision, DEFAULT_MAX_TERMS,
};

/// Sizes and tolerances for one acceptance run.
#[derive(Debug, Clone, PartialEq)]
pub struct AcceptanceConfig {
    pub quick: bool,
    pub theorem_n: u32,
    pub theorem_lambda: u32,
    pub theorem_budget: Duration,
    pub mikic_n: u32,
    pub proposition_n: u32,
    pub min_pairs: usize,
    pub corollary_n: u32,
    pub corollary_lambda: u32,
    pub order: u32,
    pub product_lambdas: Vec<Rational>,
    pub terminating_n: u32,
    pub terminating_lambda: RangeInclusive<u32>,
    pub gamma_digits: Vec<u32>,
    pub numeric_digits: u32,
    pub min_triples: usize,
    pub min_terminating: usize,
    pub integral_n: u32,
    pub integral_lambda: u32,
    pub integral_digits: u32,
    /// Integral relative error bound is `10^-(integral_digits - integral_slack)`.
    pub integral_slack: u32,
}

impl AcceptanceConfig {
    pub fn full() -> Self {
        AcceptanceConfig {
            quick: false,
            theorem_n: 60,
            theorem_lambda: 12,
            theorem_budget: Duration::from_secs(60),
            mikic_n: 200,
            proposition_n: 40,
            min_pairs: 40,
            corollary_n: 30,
            corollary_lambda: 8,
            order: 48,
            product_lambdas: vec![
                rat(1, 2),
                rat(1, 1),
                rat(3, 2),
                rat(2, 1),
                rat(3, 1),
                rat(1, 3),
            ],
            terminating_n: 40,
            terminating_lambda: 1..=8,
            gamma_digits: vec![20, 40, 60],
            numeric_digits: 40,
            min_triples: 10,
            min_terminating: 5,
            integral_n: 8,
            integral_lambda: 3,
            integral_digits: 40,
            integral_slack: 15,
        }
    }

    /// Reduced grids: `n <= 24`, `lambda, mu <= 6`, order 24, 30 digits.
    pub fn quick() -> Self {
        AcceptanceConfig {
            quick: true,
            theorem_n: 24,
            theorem_lambda: 6,
            mikic_n: 24,
            proposition_n: 24,
            corollary_n: 24,
            corollary_lambda: 6,
            order: 24,
            terminating_n: 24,
            terminating_lambda: 1..=6,
            gamma_digits: vec![20, 30],
            numeric_digits: 30,
            integral_digits: 30,
            ..AcceptanceConfig::full()
        }
    }
}

/// Outcome of one numbered criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2}: {} ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail
        )
    }

    /// [`line`](Self::line) with the wall-clock time appended.
    pub fn timed_line(&self) -> String {
        format!("{} [{:.1}s]", self.line(), self.elapsed.as_secs_f64())
    }
}

pub const CRITERIA: [(u32, &str); 10] = [
    (1, "convolution theorems, exact"),
    (2, "two-term identities as lambda = 0 specializations"),
    (3, "propositions on the rational grid"),
    (4, "corollaries, exact or flagged"),
    (5, "product formulae coefficientwise"),
    (6, "terminating 4F3 closed form and contiguous relation"),
    (7, "gamma reflection and duplication"),
    (8, "series at unity against Gamma closed forms"),
    (9, "double integrals by Gauss-Jacobi quadrature"),
    (10, "odd-n vanishing of parity-factor identities"),
];

/// Runs criterion `id` (1 to 10).
pub fn run_criterion(id: u32, config: &AcceptanceConfig) -> CriterionOutcome {
    let title = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, t)| *t)
        .unwrap_or("unknown criterion");
    let start = Instant::now();
    let result = match id {
        1 => theorems(config),
        2 => two_term(config),
        3 => propositions(config),
        4 => corollaries(config),
        5 => products(config),
        6 => terminating(config),
        7 => gamma_tests(config),
        8 => series_at_unity(config),
        9 => integrals(config),
        10 => parity(config),
        _ => Err(Error::Domain(format!("no criterion {id}"))),
    };
    let (passed, detail) = match result {
        Ok(pair) => pair,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionOutcome {
        id,
        title,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

pub fn run_all(config: &AcceptanceConfig) -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .map(|(id, _)| run_criterion(*id, config))
        .collect()
}

type Verdict = Result<(bool, String)>;

const THEOREMS: [IdentityId; 5] = [
    IdentityId::ThmA,
    IdentityId::ThmB,
    IdentityId::ThmC,
    IdentityId::ThmD,
    IdentityId::ThmE,
];
const PROPOSITIONS: [IdentityId; 3] = [IdentityId::PropA, IdentityId::PropB, IdentityId::PropC];
const COROLLARIES: [IdentityId; 4] = [
    IdentityId::Cor1,
    IdentityId::Cor2,
    IdentityId::Cor3,
    IdentityId::Cor4,
];

fn theorem_grid(config: &AcceptanceConfig) -> GridSpec {
    GridSpec::new(0..=config.theorem_n)
        .with_lambda(0..=config.theorem_lambda)
        .with_mu(0..=config.theorem_lambda)
}

fn proposition_grid(config: &AcceptanceConfig) -> GridSpec {
    GridSpec::new(0..=config.proposition_n)
        .with_rationals(default_rational_grid(), default_rational_grid())
}

fn corollary_grid(config: &AcceptanceConfig) -> GridSpec {
    GridSpec::new(0..=config.corollary_n).with_lambda(0..=config.corollary_lambda)
}

fn theorems(config: &AcceptanceConfig) -> Verdict {
    let start = Instant::now();
    let grid = theorem_grid(config);
    let mut cases = 0;
    let mut failures = 0;
    let mut skipped = 0;
    for id in THEOREMS {
        let report = verify_grid(id, &grid)?;
        cases += report.cases_run;
        failures += report.failures.len();
        skipped += report.skipped;
    }
    let in_budget = start.elapsed() < config.theorem_budget;
    Ok((
        failures == 0 && in_budget,
        format!(
            "{cases} cases, {failures} failures, {skipped} outside domain, {} the {}s budget",
            if in_budget { "within" } else { "over" },
            config.theorem_budget.as_secs()
        ),
    ))
}

fn two_term(config: &AcceptanceConfig) -> Verdict {
    let grid = GridSpec::new(0..=config.mikic_n);
    let mut failures = 0;
    let mut cases = 0;
    for (two_term, theorem) in [
        (IdentityId::Mikic1, IdentityId::ThmA),
        (IdentityId::Mikic2, IdentityId::ThmB),
    ] {
        failures += verify_grid(two_term, &grid)?.failures.len();
        let mismatches: usize = (0..=config.mikic_n)
            .into_par_iter()
            .map(|n| -> Result<usize> {
                let plain = IdentityParams::n(n);
                let special = IdentityParams::n(n).lambda(0);
                let same = lhs_value(two_term, &plain)? == lhs_value(theorem, &special)?
                    && rhs_value(two_term, &plain)? == rhs_value(theorem, &special)?;
                Ok(usize::from(!same))
            })
            .sum::<Result<usize>>()?;
        failures += mismatches;
        cases += config.mikic_n as usize + 1;
    }
    Ok((
        failures == 0,
        format!("{cases} values of n, {failures} mismatches"),
    ))
}

fn propositions(config: &AcceptanceConfig) -> Verdict {
    let grid = proposition_grid(config);
    let rationals = default_rational_grid();
    let mut ok = true;
    let mut parts = Vec::new();
    for id in PROPOSITIONS {
        let report = verify_grid(id, &grid)?;
        let mut pairs = 0;
        for a in &rationals {
            for c in &rationals {
                let single =
                    GridSpec::new(grid.n.clone()).with_rationals(vec![a.clone()], vec![c.clone()]);
                if verify_grid(id, &single)?.skipped == 0 {
                    pairs += 1;
                }
            }
        }
        ok &= report.passed() && pairs >= config.min_pairs;
        parts.push(format!(
            "{}: {} cases, {} failures, {pairs} admissible pairs",
            id.name(),
            report.cases_run,
            report.failures.len()
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn corollaries(config: &AcceptanceConfig) -> Verdict {
    let grid = corollary_grid(config);
    let mut ok = true;
    let mut parts = Vec::new();
    for id in COROLLARIES {
        let report = verify_grid(id, &grid)?;
        ok &= report.passed_or_flagged();
        let mut part = format!(
            "{}: {} cases, {} failures",
            id.name(),
            report.cases_run,
            report.failures.len()
        );
        if let (Some(finding), Some(first)) = (&report.finding, report.failures.first()) {
            let repro: Vec<String> = first
                .params
                .describe(id)
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            part.push_str(&format!(
                " flagged [{finding}; e.g. {}: lhs {} vs closed form {}]",
                repro.join(" "),
                format_rational(&first.lhs),
                format_rational(&first.rhs)
            ));
        }
        parts.push(part);
    }
    Ok((ok, parts.join("; ")))
}

fn products(config: &AcceptanceConfig) -> Verdict {
    let grid = default_rational_grid();
    let mut jobs = Vec::new();
    for formula in ProductFormula::ALL {
        let lambdas = if formula.uses_lambda() {
            config.product_lambdas.clone()
        } else {
            vec![rat(1, 1)]
        };
        for a in &grid {
            for c in &grid {
                for l in &lambdas {
                    jobs.push((formula, a.clone(), c.clone(), l.clone()));
                }
            }
        }
    }
    let outcomes: Vec<Option<bool>> = jobs
        .into_par_iter()
        .map(
            |(formula, a, c, l)| match check_product_formula(formula, &a, &c, &l, config.order) {
                Ok(report) => Ok(Some(report.passed())),
                Err(
                    Error::ZeroLowerPochhammer { .. } | Error::DegenerateLambda | Error::Domain(_),
                ) => Ok(None),
                Err(e) => Err(e),
            },
        )
        .collect::<Result<_>>()?;
    let checked = outcomes.iter().flatten().count();
    let failures = outcomes.iter().flatten().filter(|p| !**p).count();
    let skipped = outcomes.len() - checked;
    Ok((
        failures == 0 && checked > 0,
        format!(
            "{checked} parameter sets through order {}, {failures} mismatching, {skipped} inadmissible",
            config.order
        ),
    ))
}

fn terminating(config: &AcceptanceConfig) -> Verdict {
    let grid = default_rational_grid();
    let mut jobs = Vec::new();
    for n in 0..=config.terminating_n {
        for l in config.terminating_lambda.clone() {
            for c in &grid {
                for e in &grid {
                    jobs.push((n, Rational::from(l), c.clone(), e.clone()));
                }
            }
        }
    }
    let outcomes: Vec<Option<(bool, bool)>> = jobs
        .into_par_iter()
        .map(|(n, l, c, e)| {
            let closed = terminating_4f3_check(n, &c, &e, &l);
            let contiguous = contiguous_relation_check(n, &c, &e, &l);
            match (closed, contiguous) {
                (Ok(x), Ok(y)) => Ok(Some((x.passed(), y.passed()))),
                (Err(Error::ZeroLowerPochhammer { .. }), _)
                | (_, Err(Error::ZeroLowerPochhammer { .. })) => Ok(None),
                (Err(e), _) | (_, Err(e)) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let checked = outcomes.iter().flatten().count();
    let closed_failures = outcomes.iter().flatten().filter(|(x, _)| !x).count();
    let contiguous_failures = outcomes.iter().flatten().filter(|(_, y)| !y).count();
    Ok((
        checked > 0 && closed_failures == 0 && contiguous_failures == 0,
        format!(
            "{checked} cases, {closed_failures} closed-form failures, {contiguous_failures} contiguous failures, {} inadmissible",
            outcomes.len() - checked
        ),
    ))
}

fn gamma_tests(config: &AcceptanceConfig) -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for &digits in &config.gamma_digits {
        let report = gamma_selftest(Precision::new(digits)?)?;
        ok &= report.passed();
        parts.push(format!("P={digits}: worst {}", worst(&report)));
    }
    Ok((ok, parts.join("; ")))
}

fn worst(report: &NumericReport) -> String {
    report
        .worst_error()
        .map(|e| e.to_string_radix(10, Some(3)))
        .unwrap_or_else(|| "none".to_string())
}

/// Convergent `(a, c, e)` triples for the Dixon sum (`1 + a/2 - c - e >= 1/2`).
pub fn dixon_triples() -> Vec<(Rational, Rational, Rational)> {
    [
        ((1, 2), (1, 4), (1, 4)),
        ((1, 1), (1, 2), (1, 2)),
        ((1, 1), (1, 3), (1, 5)),
        ((3, 2), (1, 3), (1, 4)),
        ((2, 1), (2, 3), (1, 5)),
        ((5, 2), (1, 3), (1, 7)),
        ((3, 1), (1, 3), (-1, 5)),
        ((7, 2), (3, 4), (2, 3)),
        ((4, 1), (5, 3), (1, 5)),
        ((1, 3), (1, 5), (1, 7)),
        ((9, 2), (-1, 3), (5, 4)),
        ((5, 1), (7, 3), (1, 6)),
    ]
    .into_iter()
    .map(triple)
    .collect()
}

/// Convergent triples for the shifted sums (`a/2 - c - e >= 1/2`).
pub fn shifted_triples() -> Vec<(Rational, Rational, Rational)> {
    [
        ((3, 1), (1, 2), (1, 2)),
        ((3, 1), (1, 3), (1, 5)),
        ((7, 2), (1, 3), (-1, 5)),
        ((5, 2), (1, 3), (1, 7)),
        ((4, 1), (2, 3), (1, 5)),
        ((2, 1), (1, 4), (1, 5)),
        ((9, 2), (3, 4), (1, 3)),
        ((5, 1), (4, 3), (2, 5)),
        ((11, 2), (-1, 4), (3, 2)),
        ((6, 1), (5, 2), (-1, 3)),
        ((13, 3), (1, 6), (1, 5)),
        ((8, 1), (5, 3), (7, 4)),
    ]
    .into_iter()
    .map(triple)
    .collect()
}

fn triple(t: ((i64, i64), (i64, i64), (i64, i64))) -> (Rational, Rational, Rational) {
    (
        rat(t.0 .0, t.0 .1),
        rat(t.1 .0, t.1 .1),
        rat(t.2 .0, t.2 .1),
    )
}

const LINEAR_LAMBDAS: [(i64, i64); 4] = [(2, 1), (3, 2), (1, 3), (5, 1)];

/// Terminating instances `a = -n`, shared with the exact engine.
const TERMINATING_N: [i64; 5] = [1, 2, 4, 5, 6];

fn series_at_unity(config: &AcceptanceConfig) -> Verdict {
    let prec = Precision::new(config.numeric_digits)?;
    let max = DEFAULT_MAX_TERMS;
    let mut jobs: Vec<(&'static str, bool, Rational, Rational, Rational, Rational)> = Vec::new();
    for (a, c, e) in dixon_triples() {
        jobs.push(("dixon", false, a, c, e, rat(1, 1)));
    }
    for (i, (a, c, e)) in shifted_triples().into_iter().enumerate() {
        jobs.push(("dminus", false, a.clone(), c.clone(), e.clone(), rat(1, 1)));
        let (p, q) = LINEAR_LAMBDAS[i % LINEAR_LAMBDAS.len()];
        jobs.push(("linear4f3", false, a, c, e, rat(p, q)));
    }
    for n in TERMINATING_N {
        let (c, e) = (rat(1, 3), rat(1, 5));
        jobs.push(("dixon", true, rat(-n, 1), c.clone(), e.clone(), rat(1, 1)));
        jobs.push(("dminus", true, rat(-n, 1), c.clone(), e.clone(), rat(1, 1)));
        jobs.push(("linear4f3", true, rat(-n, 1), c, e, rat(2, 1)));
    }
    let results: Vec<(&'static str, bool, Result<NumericReport>)> = jobs
        .into_par_iter()
        .map(|(kind, term, a, c, e, l)| {
            let report = match kind {
                "dixon" => dixon_check(&a, &c, &e, prec, max),
                "dminus" => dminus_check(&a, &c, &e, prec, max),
                _ => linear4f3_check(&a, &c, &e, &l, prec, max),
            };
            (kind, term, report)
        })
        .collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for kind in ["dixon", "dminus", "linear4f3"] {
        for term in [false, true] {
            let group: Vec<_> = results
                .iter()
                .filter(|(k, t, _)| *k == kind && *t == term)
                .collect();
            let passed = group
                .iter()
                .filter(|(_, _, r)| r.as_ref().is_ok_and(NumericReport::passed))
                .count();
            let needed = if term {
                config.min_terminating
            } else {
                config.min_triples
            };
            ok &= passed == group.len() && passed >= needed;
            let label = if term { "terminating" } else { "convergent" };
            parts.push(format!("{kind} {label} {passed}/{}", group.len()));
            if let Some((_, _, Err(e))) = group.iter().find(|(_, _, r)| r.is_err()) {
                parts.push(format!("first error: {e}"));
            }
        }
    }
    Ok((
        ok,
        format!("P={}: {}", config.numeric_digits, parts.join(", ")),
    ))
}

fn integrals(config: &AcceptanceConfig) -> Verdict {
    let prec = Precision::new(config.integral_digits)?;
    let bits = prec.working_bits();
    let bound = ten_to_minus(
        config.integral_digits as i32 - config.integral_slack as i32,
        bits,
    );
    let mut jobs = Vec::new();
    for kind in IntegralKind::ALL {
        for n in 0..=config.integral_n {
            for l in 0..=config.integral_lambda {
                jobs.push((kind, n, l));
            }
        }
    }
    let reports: Vec<NumericReport> = jobs
        .into_par_iter()
        .map(|(kind, n, l)| integral_check(kind, n, l, prec))
        .collect::<Result<_>>()?;
    let mut worst_error = BigFloat::new(bits);
    let mut failures = 0;
    for report in &reports {
        for check in &report.checks {
            if check.error > bound {
                failures += 1;
            }
            if check.error > worst_error {
                worst_error.clone_from(&check.error);
            }
        }
    }
    let origin = integral_check(IntegralKind::ThmAIntegral, 0, 0, prec)?;
    let quarter = BigFloat::with_val(bits, pi(bits).square_ref()) / 4u32;
    let origin_error =
        BigFloat::with_val(bits, &origin.checks[0].value - &quarter).abs() / &quarter;
    let origin_ok = origin_error <= bound;
    Ok((
        failures == 0 && origin_ok,
        format!(
            "{} integrals, {failures} above 1e-{}, worst {}; pi^2/4 at origin {}",
            reports.len(),
            config.integral_digits - config.integral_slack,
            worst_error.to_string_radix(10, Some(3)),
            if origin_ok { "reproduced" } else { "missed" }
        ),
    ))
}

fn parity(config: &AcceptanceConfig) -> Verdict {
    let mut cases = 0;
    let mut failures = 0;
    let mut identities = 0;
    for id in IdentityId::ALL
        .into_iter()
        .filter(|id| id.has_parity_factor())
    {
        let grid = if THEOREMS.contains(&id) || matches!(id, IdentityId::Mikic1) {
            theorem_grid(config)
        } else if PROPOSITIONS.contains(&id) {
            proposition_grid(config)
        } else {
            corollary_grid(config)
        };
        let report = odd_vanishing(id, &grid)?;
        cases += report.cases_run;
        failures += report.failures.len();
        identities += 1;
    }
    Ok((
        failures == 0 && cases > 0,
        format!("{identities} identities, {cases} odd-n cases, {failures} nonzero"),
    ))
}
