//! Hypergeometric series at unity against their Gamma-quotient closed forms.
//!
//! Convergent series are summed by the Levin u-transform (the terms decay
//! only algebraically at unity); terminating ones exactly. At terminating
//! parameters the closed forms sit on Gamma poles that cancel, so they are
//! evaluated at `a = -n + eps` with `eps` far below the target tolerance.

use rug::ops::Pow;

use super::gamma::gamma_ratio;
use super::{from_rational, pi, ten_to_minus, BigFloat, NumericCheck, NumericReport, Precision};
use crate::error::{Error, Result};
use crate::exactnum::{binomial, format_rational, rat, zero_step, Rational};
use crate::hyperseries::{terminating_4f3_closed_form, terminating_sum};

pub const DEFAULT_MAX_TERMS: usize = 100_000;

/// Levin u parameters `beta = 1`, starting index 1.
const LEVIN_BETA: u32 = 1;
const LEVIN_START: usize = 1;

/// Value of a `pFq` at unity.
#[derive(Debug, Clone)]
pub struct SeriesSum {
    pub value: BigFloat,
    /// Difference between the last two accepted transforms; zero when
    /// the series terminated.
    pub error_estimate: BigFloat,
    pub terms_used: usize,
    pub terminated: bool,
}

fn terminates(uppers: &[Rational]) -> bool {
    uppers.iter().any(|u| zero_step(u, u32::MAX).is_some())
}

fn is_nonpositive_integer(x: &Rational) -> bool {
    zero_step(x, u32::MAX).is_some()
}

/// Levin u-transform of order `k` from partial sums `s` and terms `t`.
fn levin_u(sums: &[BigFloat], terms: &[BigFloat], k: usize, bits: u32) -> BigFloat {
    let mut numer = BigFloat::new(bits);
    let mut denom = BigFloat::new(bits);
    let last = BigFloat::with_val(bits, (LEVIN_BETA as usize + LEVIN_START + k) as u32);
    for j in 0..=k {
        let m = LEVIN_START + j;
        let base = BigFloat::with_val(bits, (LEVIN_BETA as usize + m) as u32) / &last;
        let power = base.pow((k as i32 - 1).max(0));
        let omega = BigFloat::with_val(bits, &terms[m] * (LEVIN_BETA as usize + m) as u32);
        let mut weight = power * BigFloat::with_val(bits, &binomial(k as u32, j as i64)) / omega;
        if j % 2 == 1 {
            weight = -weight;
        }
        numer += BigFloat::with_val(bits, &weight * &sums[m]);
        denom += weight;
    }
    numer / denom
}

/// Sum of `pFq(uppers; lowers; 1)` with `p = q + 1`.
///
/// Stops once two consecutive transform differences fall below `target`.
pub fn hypergeometric_at_unity(
    uppers: &[Rational],
    lowers: &[Rational],
    target: &BigFloat,
    bits: u32,
    max_terms: usize,
) -> Result<SeriesSum> {
    if terminates(uppers) {
        let exact = terminating_sum(uppers, lowers)?;
        let length = uppers
            .iter()
            .filter_map(|u| zero_step(u, u32::MAX))
            .min()
            .unwrap_or(0) as usize;
        return Ok(SeriesSum {
            value: from_rational(&exact, bits),
            error_estimate: BigFloat::new(bits),
            terms_used: length + 1,
            terminated: true,
        });
    }
    if let Some(l) = lowers.iter().find(|l| is_nonpositive_integer(l)) {
        return Err(Error::Domain(format!(
            "lower parameter {} is a nonpositive integer",
            format_rational(l)
        )));
    }
    if uppers.len() != lowers.len() + 1 {
        return Err(Error::Domain(format!(
            "expected a {}F{} series at unity",
            lowers.len() + 1,
            lowers.len()
        )));
    }
    let excess = lowers.iter().sum::<Rational>() - uppers.iter().sum::<Rational>();
    if excess.cmp0().is_le() {
        return Err(Error::NonConvergent(format!(
            "parameter excess {} is not positive",
            format_rational(&excess)
        )));
    }

    // the transform loses roughly one digit per order in cancellation
    let max_order = ((f64::from(bits) / std::f64::consts::LOG2_10) as usize)
        .min(max_terms.saturating_sub(LEVIN_START + 1));
    let mut terms = vec![BigFloat::with_val(bits, 1)];
    let mut sums = vec![BigFloat::with_val(bits, 1)];
    let mut previous: Option<BigFloat> = None;
    let mut below = 0;
    let mut estimate = BigFloat::with_val(bits, rug::float::Special::Infinity);
    let mut k = 2;
    while k <= max_order {
        while terms.len() <= LEVIN_START + k {
            let m = terms.len() - 1;
            let mut ratio = rat(1, (m + 1) as i64);
            for u in uppers {
                ratio *= Rational::from(u + m as u32);
            }
            for l in lowers {
                ratio /= Rational::from(l + m as u32);
            }
            let next = BigFloat::with_val(bits, &terms[m] * &from_rational(&ratio, bits));
            let sum = BigFloat::with_val(bits, &sums[m] + &next);
            terms.push(next);
            sums.push(sum);
        }
        let current = levin_u(&sums, &terms, k, bits);
        if let Some(prev) = &previous {
            estimate = BigFloat::with_val(bits, &current - prev).abs();
            let scale =
                BigFloat::with_val(bits, current.abs_ref()).max(&BigFloat::with_val(bits, 1));
            if BigFloat::with_val(bits, &estimate / &scale) < *target {
                below += 1;
                if below == 2 {
                    return Ok(SeriesSum {
                        value: current,
                        error_estimate: estimate,
                        terms_used: terms.len(),
                        terminated: false,
                    });
                }
            } else {
                below = 0;
            }
        }
        previous = Some(current);
        k += 2;
    }
    Err(Error::TailBoundExceeded {
        max_terms: terms.len().min(max_terms),
        estimate: estimate.to_string_radix(10, Some(6)),
    })
}

fn params3(a: &Rational, c: &Rational, e: &Rational) -> Vec<(String, String)> {
    vec![
        ("a".to_string(), format_rational(a)),
        ("c".to_string(), format_rational(c)),
        ("e".to_string(), format_rational(e)),
    ]
}

fn require_regular(name: &str, x: &Rational) -> Result<()> {
    if is_nonpositive_integer(x) {
        return Err(Error::Domain(format!(
            "{name} = {} is a nonpositive integer",
            format_rational(x)
        )));
    }
    Ok(())
}

fn require_margin(quantity: Rational, printed: &str) -> Result<()> {
    if quantity < rat(1, 2) {
        return Err(Error::NonConvergent(format!(
            "{printed} = {} is below the margin 1/2",
            format_rational(&quantity)
        )));
    }
    Ok(())
}

/// Shared evaluation context for the checks at unity.
struct Setup {
    prec: Precision,
    inner: Precision,
    bits: u32,
    terminating: bool,
    /// `a`, perturbed off the Gamma poles when the series terminates.
    a: BigFloat,
}

impl Setup {
    fn new(a: &Rational, terminating: bool, prec: Precision) -> Setup {
        let inner = prec.scaled(3);
        let bits = inner.working_bits();
        let mut a_float = from_rational(a, bits);
        if terminating {
            let exponent = (f64::from(prec.digits()) * 1.25).ceil() as i32;
            a_float += ten_to_minus(exponent, bits);
        }
        Setup {
            prec,
            inner,
            bits,
            terminating,
            a: a_float,
        }
    }

    fn float(&self, x: &Rational) -> BigFloat {
        from_rational(x, self.bits)
    }

    /// `half_a * a/2 + offset`.
    fn lin(&self, half_a: i32, offset: &Rational) -> BigFloat {
        let scaled = BigFloat::with_val(self.bits, &self.a * half_a) / 2u32;
        scaled + self.float(offset)
    }

    fn tolerance(&self) -> BigFloat {
        let digits = if self.terminating {
            self.prec.digits() as i32 - 5
        } else {
            (self.prec.digits() / 2) as i32
        };
        ten_to_minus(digits, self.bits)
    }

    fn sum(&self, uppers: &[Rational], lowers: &[Rational], max_terms: usize) -> Result<SeriesSum> {
        let target = ten_to_minus((self.prec.digits() / 2 + 5) as i32, self.bits);
        hypergeometric_at_unity(uppers, lowers, &target, self.bits, max_terms)
    }

    /// `(value, reference)`: the exact sum is the reference when there is one.
    fn sides(&self, series: BigFloat, closed: BigFloat) -> (BigFloat, BigFloat) {
        if self.terminating {
            (closed, series)
        } else {
            (series, closed)
        }
    }

    fn label(&self, name: &str) -> String {
        if self.terminating {
            format!("{name}: exact terminating sum vs closed form")
        } else {
            format!("{name}: series vs closed form")
        }
    }
}

fn plus(x: &Rational, n: i64) -> Rational {
    Rational::from(x + n)
}

/// `3F2(a, c, e; 1+a-c, 1+a-e; 1)` against the Dixon Gamma quotient.
pub fn dixon_check(
    a: &Rational,
    c: &Rational,
    e: &Rational,
    prec: Precision,
    max_terms: usize,
) -> Result<NumericReport> {
    require_regular("c", c)?;
    require_regular("e", e)?;
    let terminating = is_nonpositive_integer(a);
    if !terminating {
        require_margin(Rational::from(a / 2u32) + 1 - c - e, "1 + a/2 - c - e")?;
    }
    let s = Setup::new(a, terminating, prec);
    let lowers = [(plus(a, 1) - c), (plus(a, 1) - e)];
    let series = s.sum(&[a.clone(), c.clone(), e.clone()], &lowers, max_terms)?;

    let ce = Rational::from(c + e);
    let numerator = vec![
        s.lin(2, &(rat(1, 1) - c.clone())),
        s.lin(2, &(rat(1, 1) - e.clone())),
        s.lin(1, &rat(1, 1)),
        s.lin(1, &(rat(1, 1) - ce.clone())),
    ];
    let denominator = vec![
        s.lin(1, &(rat(1, 1) - c.clone())),
        s.lin(1, &(rat(1, 1) - e.clone())),
        s.lin(2, &rat(1, 1)),
        s.lin(2, &(rat(1, 1) - ce)),
    ];
    let closed = gamma_ratio(numerator, denominator, s.inner)?;

    let mut report = NumericReport::new("dixon");
    let (value, reference) = s.sides(series.value, closed);
    report.push(NumericCheck::new(
        s.label("dixon"),
        params3(a, c, e),
        value,
        reference,
        None,
        s.tolerance(),
    ));
    Ok(report)
}

/// `3F2(1+a, c, e; 1+a-c, 1+a-e; 1)` against its two-term Gamma closed form.
pub fn dminus_check(
    a: &Rational,
    c: &Rational,
    e: &Rational,
    prec: Precision,
    max_terms: usize,
) -> Result<NumericReport> {
    require_regular("c", c)?;
    require_regular("e", e)?;
    let terminating = is_nonpositive_integer(&plus(a, 1));
    if !terminating {
        require_margin(Rational::from(a / 2u32) - c - e, "a/2 - c - e")?;
    }
    let s = Setup::new(a, terminating, prec);
    let lowers = [(plus(a, 1) - c), (plus(a, 1) - e)];
    let series = s.sum(&[plus(a, 1), c.clone(), e.clone()], &lowers, max_terms)?;

    let one = rat(1, 1);
    let ce = Rational::from(c + e);
    // 2^(2a-2c-2e-1) / pi * Gamma(1+a-c, 1+a-e; 1+a-2c, 1+a-2e) times the braces
    let outer_num = [
        s.lin(2, &(one.clone() - c.clone())),
        s.lin(2, &(one.clone() - e.clone())),
    ];
    let outer_den = [
        s.lin(2, &(one.clone() - Rational::from(c * 2u32))),
        s.lin(2, &(one.clone() - Rational::from(e * 2u32))),
    ];
    let brace_den = [s.lin(2, &one), s.lin(2, &(one.clone() - ce.clone()))];
    let half = rat(1, 2);
    let term = |first: &Rational, second: &Rational| -> Result<BigFloat> {
        let mut numerator = outer_num.to_vec();
        numerator.extend([
            s.lin(1, first),
            s.lin(1, &(second.clone() - c.clone())),
            s.lin(1, &(second.clone() - e.clone())),
            s.lin(1, &(first.clone() - ce.clone())),
        ]);
        let mut denominator = outer_den.to_vec();
        denominator.extend(brace_den.iter().cloned());
        gamma_ratio(numerator, denominator, s.inner)
    };
    let braces = term(&half, &one)? + term(&one, &half)?;
    let exponent =
        BigFloat::with_val(s.bits, &s.a * 2u32) - s.float(&Rational::from(&ce * 2u32)) - 1u32;
    let closed = BigFloat::with_val(s.bits, 2).pow(exponent) / pi(s.bits) * braces;

    let mut report = NumericReport::new("dminus");
    let (value, reference) = s.sides(series.value, closed);
    report.push(NumericCheck::new(
        s.label("dminus"),
        params3(a, c, e),
        value,
        reference,
        None,
        s.tolerance(),
    ));
    Ok(report)
}

/// `4F3(a, c, e, 1+lambda; 1+a-c, 1+a-e, lambda; 1)` against its braced
/// two-term closed form; at `a = -n` also against the exact terminating
/// closed form.
pub fn linear4f3_check(
    a: &Rational,
    c: &Rational,
    e: &Rational,
    lambda: &Rational,
    prec: Precision,
    max_terms: usize,
) -> Result<NumericReport> {
    if lambda.cmp0().is_eq() {
        return Err(Error::DegenerateLambda);
    }
    require_regular("c", c)?;
    require_regular("e", e)?;
    require_regular("lambda", lambda)?;
    let terminating = is_nonpositive_integer(a);
    if !terminating {
        require_margin(Rational::from(a / 2u32) - c - e, "a/2 - c - e")?;
    }
    let s = Setup::new(a, terminating, prec);
    let lowers = [(plus(a, 1) - c), (plus(a, 1) - e), lambda.clone()];
    let uppers = [a.clone(), c.clone(), e.clone(), plus(lambda, 1)];
    let series = s.sum(&uppers, &lowers, max_terms)?;

    let one = rat(1, 1);
    let ce = Rational::from(c + e);
    // Gamma(1+a-c, 1+a-e; a, 1+a-c-e) folded into each braced term
    let outer_num = [
        s.lin(2, &(one.clone() - c.clone())),
        s.lin(2, &(one.clone() - e.clone())),
    ];
    let outer_den = [s.lin(2, &rat(0, 1)), s.lin(2, &(one.clone() - ce.clone()))];
    let term = |base: &Rational, shifted: &Rational| -> Result<BigFloat> {
        let mut numerator = outer_num.to_vec();
        numerator.extend([s.lin(1, base), s.lin(1, &(shifted.clone() - ce.clone()))]);
        let mut denominator = outer_den.to_vec();
        denominator.extend([
            s.lin(1, &(shifted.clone() - c.clone())),
            s.lin(1, &(shifted.clone() - e.clone())),
        ]);
        gamma_ratio(numerator, denominator, s.inner)
    };
    let half = rat(1, 2);
    let lambda_f = s.float(lambda);
    let first = term(&half, &half)? / BigFloat::with_val(s.bits, &lambda_f * 2u32);
    let weight = (BigFloat::with_val(s.bits, &lambda_f * 2u32) - &s.a)
        / BigFloat::with_val(s.bits, &lambda_f * 4u32);
    let second = term(&rat(0, 1), &one)? * weight;
    let closed = first + second;

    let mut params = params3(a, c, e);
    params.push(("lambda".to_string(), format_rational(lambda)));
    let mut report = NumericReport::new("linear4f3");
    if terminating {
        let n = zero_step(a, u32::MAX).unwrap_or(0);
        let exact = terminating_4f3_closed_form(n, c, e, lambda)?;
        report.push(NumericCheck::new(
            "linear4f3: exact terminating sum vs exact closed form",
            params.clone(),
            series.value.clone(),
            s.float(&exact),
            None,
            s.tolerance(),
        ));
    }
    let (value, reference) = s.sides(series.value, closed);
    report.push(NumericCheck::new(
        s.label("linear4f3"),
        params,
        value,
        reference,
        None,
        s.tolerance(),
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: u32) -> Precision {
        Precision::new(d).unwrap()
    }

    fn assert_passes(report: &NumericReport) {
        for c in &report.checks {
            assert!(
                c.passed(),
                "{} {:?}: error {}",
                c.label,
                c.params,
                c.error.to_f64()
            );
        }
        assert!(report.passed());
    }

    #[test]
    fn levin_sums_zeta_two() {
        // 3F2(1,1,1;2,2;1) = pi^2/6
        let bits = 300;
        let target = ten_to_minus(40, bits);
        let s = hypergeometric_at_unity(
            &[rat(1, 1), rat(1, 1), rat(1, 1)],
            &[rat(2, 1), rat(2, 1)],
            &target,
            bits,
            DEFAULT_MAX_TERMS,
        )
        .unwrap();
        let expected = pi(bits).square() / 6u32;
        assert!(BigFloat::with_val(bits, &s.value - &expected).abs() < ten_to_minus(38, bits));
        assert!(!s.terminated);
        assert!(s.terms_used < 200);
    }

    #[test]
    fn terminating_sum_is_exact() {
        let s = hypergeometric_at_unity(
            &[rat(-2, 1), rat(1, 1)],
            &[rat(1, 1)],
            &ten_to_minus(10, 128),
            128,
            10,
        )
        .unwrap();
        // 2F1(-2, 1; 1; 1) = (1 - 1)^2
        assert!(s.terminated);
        assert_eq!(s.value, 0);
        assert_eq!(s.terms_used, 3);
    }

    #[test]
    fn divergent_and_starved_series() {
        let bits = 200;
        let target = ten_to_minus(30, bits);
        let err =
            hypergeometric_at_unity(&[rat(1, 1), rat(1, 1)], &[rat(1, 1)], &target, bits, 1000)
                .unwrap_err();
        assert!(matches!(err, Error::NonConvergent(_)));
        let err = hypergeometric_at_unity(
            &[rat(1, 1), rat(1, 1), rat(1, 1)],
            &[rat(2, 1), rat(2, 1)],
            &target,
            bits,
            6,
        )
        .unwrap_err();
        assert!(matches!(err, Error::TailBoundExceeded { .. }));
    }

    #[test]
    fn dixon_examples() {
        assert_passes(
            &dixon_check(&rat(1, 2), &rat(1, 4), &rat(1, 4), p(40), DEFAULT_MAX_TERMS).unwrap(),
        );
        assert_passes(
            &dixon_check(&rat(1, 1), &rat(1, 2), &rat(1, 2), p(40), DEFAULT_MAX_TERMS).unwrap(),
        );
        let report = dixon_check(
            &rat(-4, 1),
            &rat(1, 3),
            &rat(1, 5),
            p(40),
            DEFAULT_MAX_TERMS,
        )
        .unwrap();
        assert_passes(&report);
        let exact = terminating_sum(
            &[rat(-4, 1), rat(1, 3), rat(1, 5)],
            &[rat(-10, 3), rat(-16, 5)],
        )
        .unwrap();
        assert_eq!(
            report.checks[0].reference,
            from_rational(&exact, report.checks[0].reference.prec())
        );
    }

    #[test]
    fn dixon_odd_termination_vanishes() {
        let report = dixon_check(
            &rat(-3, 1),
            &rat(1, 3),
            &rat(1, 5),
            p(30),
            DEFAULT_MAX_TERMS,
        )
        .unwrap();
        assert_passes(&report);
        assert_eq!(report.checks[0].reference, 0);
    }

    #[test]
    fn dminus_examples() {
        assert_passes(
            &dminus_check(&rat(3, 1), &rat(1, 2), &rat(1, 2), p(40), DEFAULT_MAX_TERMS).unwrap(),
        );
        assert_passes(
            &dminus_check(
                &rat(7, 2),
                &rat(1, 3),
                &rat(-1, 5),
                p(40),
                DEFAULT_MAX_TERMS,
            )
            .unwrap(),
        );
        assert_passes(
            &dminus_check(
                &rat(-5, 1),
                &rat(1, 3),
                &rat(1, 5),
                p(40),
                DEFAULT_MAX_TERMS,
            )
            .unwrap(),
        );
    }

    #[test]
    fn linear4f3_examples() {
        let report = linear4f3_check(
            &rat(-6, 1),
            &rat(1, 3),
            &rat(1, 5),
            &rat(2, 1),
            p(40),
            DEFAULT_MAX_TERMS,
        )
        .unwrap();
        assert_eq!(report.checks.len(), 2);
        assert_eq!(report.checks[0].error, 0);
        assert_passes(&report);
        assert_passes(
            &linear4f3_check(
                &rat(4, 1),
                &rat(2, 3),
                &rat(1, 5),
                &rat(3, 2),
                p(40),
                DEFAULT_MAX_TERMS,
            )
            .unwrap(),
        );
        // lambda = c - 1
        assert_passes(
            &linear4f3_check(
                &rat(6, 1),
                &rat(5, 2),
                &rat(-1, 3),
                &rat(3, 2),
                p(40),
                DEFAULT_MAX_TERMS,
            )
            .unwrap(),
        );
    }

    #[test]
    fn margins_and_domains() {
        let prec = p(30);
        assert!(matches!(
            dixon_check(&rat(1, 2), &rat(1, 2), &rat(1, 2), prec, 100),
            Err(Error::NonConvergent(_))
        ));
        assert!(matches!(
            dminus_check(&rat(1, 2), &rat(1, 4), &rat(1, 4), prec, 100),
            Err(Error::NonConvergent(_))
        ));
        assert!(matches!(
            dixon_check(&rat(1, 2), &rat(-1, 1), &rat(1, 4), prec, 100),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            linear4f3_check(&rat(3, 1), &rat(1, 4), &rat(1, 4), &rat(0, 1), prec, 100),
            Err(Error::DegenerateLambda)
        ));
        assert!(matches!(
            dixon_check(&rat(1, 2), &rat(1, 4), &rat(1, 4), prec, 4),
            Err(Error::TailBoundExceeded { .. })
        ));
    }
}
