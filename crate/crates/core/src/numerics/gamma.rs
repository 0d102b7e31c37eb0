//! Log-Gamma by argument shifting plus the Stirling series, with exact
//! rational Bernoulli coefficients.

use std::sync::{LazyLock, Mutex};

use rug::ops::Pow;

use super::{from_rational, pi, ten_to_minus, BigFloat, NumericCheck, NumericReport, Precision};
use crate::error::{Error, Result};
use crate::exactnum::{binomial, rat, Rational};

/// Bernoulli numbers `B_0, B_1, ...` (with `B_1 = -1/2`), grown on demand.
static BERNOULLI: LazyLock<Mutex<Vec<Rational>>> = LazyLock::new(|| Mutex::new(vec![rat(1, 1)]));

fn bernoulli(m: usize) -> Rational {
    let mut table = BERNOULLI.lock().expect("bernoulli table poisoned");
    // sum_{j=0}^{m} binom(m+1, j) B_j = 0
    while table.len() <= m {
        let next = table.len();
        let mut acc = Rational::new();
        for (j, b) in table.iter().enumerate() {
            acc += Rational::from(b * binomial(next as u32 + 1, j as i64));
        }
        table.push(-acc / (next as u32 + 1));
    }
    table[m].clone()
}

fn is_pole(x: &BigFloat, prec: Precision) -> bool {
    if x.is_sign_positive() && !x.is_zero() {
        return false;
    }
    let nearest = BigFloat::with_val(x.prec(), x.round_ref());
    let gap = (nearest - x).abs();
    gap <= ten_to_minus((prec.digits() / 2) as i32, x.prec())
}

fn pole_error(x: &BigFloat) -> Error {
    Error::Pole(x.to_string_radix(10, Some(12)))
}

/// `ln Gamma(x)` for `x > 0`.
pub fn log_gamma(x: &BigFloat, prec: Precision) -> Result<BigFloat> {
    if is_pole(x, prec) {
        return Err(pole_error(x));
    }
    if !x.is_sign_positive() || x.is_zero() {
        return Err(Error::Domain(format!(
            "log_gamma needs a positive argument, got {}",
            x.to_string_radix(10, Some(12))
        )));
    }
    let bits = prec.working_bits();
    let x = BigFloat::with_val(bits, x);
    // shift until the Stirling remainder can drop below 2^-bits
    let threshold = f64::from(bits) * 0.12 + 10.0;
    let shift = (threshold - x.to_f64()).ceil().max(0.0) as u32;
    let mut product = BigFloat::with_val(bits, 1);
    for i in 0..shift {
        product *= BigFloat::with_val(bits, &x + i);
    }
    let z = BigFloat::with_val(bits, &x + shift);
    let lnz = BigFloat::with_val(bits, z.ln_ref());
    let half_ln_two_pi = BigFloat::with_val(bits, pi(bits) * 2u32).ln() / 2u32;
    let mut acc = BigFloat::with_val(bits, &z - 0.5f64) * &lnz - &z + half_ln_two_pi;

    let eps = BigFloat::with_val(bits, 1u32) >> bits;
    let z_squared = BigFloat::with_val(bits, z.square_ref());
    let mut z_power = z.clone();
    let mut previous: Option<BigFloat> = None;
    let mut k = 1usize;
    loop {
        let coeff = bernoulli(2 * k) / ((2 * k) as u32 * (2 * k - 1) as u32);
        let term = from_rational(&coeff, bits) / &z_power;
        let size = BigFloat::with_val(bits, term.abs_ref());
        acc += &term;
        if size <= eps {
            break;
        }
        if let Some(prev) = &previous {
            if size > *prev {
                // asymptotic series started diverging before reaching eps
                return Err(Error::Domain(
                    "Stirling series did not reach working precision".into(),
                ));
            }
        }
        previous = Some(size);
        z_power *= &z_squared;
        k += 1;
    }
    if shift > 0 {
        acc -= product.ln();
    }
    Ok(acc)
}

/// `ln |Gamma(x)|` and the sign of `Gamma(x)`, for any non-pole `x`.
fn log_abs_gamma(x: &BigFloat, prec: Precision) -> Result<(BigFloat, i32)> {
    if is_pole(x, prec) {
        return Err(pole_error(x));
    }
    if x.is_sign_positive() {
        return Ok((log_gamma(x, prec)?, 1));
    }
    // Gamma(x) Gamma(1-x) = pi / sin(pi x)
    let bits = prec.working_bits();
    let sine = BigFloat::with_val(bits, pi(bits) * x).sin();
    let reflected = BigFloat::with_val(bits, 1 - x);
    let value = pi(bits).ln()
        - BigFloat::with_val(bits, sine.abs_ref()).ln()
        - log_gamma(&reflected, prec)?;
    let sign = if sine.is_sign_negative() { -1 } else { 1 };
    Ok((value, sign))
}

/// `Gamma(x)` at any non-pole real argument.
pub fn gamma(x: &BigFloat, prec: Precision) -> Result<BigFloat> {
    let (log_abs, sign) = log_abs_gamma(x, prec)?;
    let value = log_abs.exp();
    Ok(if sign < 0 { -value } else { value })
}

/// `Gamma(n_1) ... Gamma(n_p) / (Gamma(d_1) ... Gamma(d_q))`.
#[derive(Debug, Clone, Default)]
pub struct GammaQuotientSpec {
    pub numerator: Vec<BigFloat>,
    pub denominator: Vec<BigFloat>,
}

impl GammaQuotientSpec {
    pub fn new(numerator: Vec<BigFloat>, denominator: Vec<BigFloat>) -> Self {
        GammaQuotientSpec {
            numerator,
            denominator,
        }
    }
}

pub fn gamma_quotient(spec: &GammaQuotientSpec, prec: Precision) -> Result<BigFloat> {
    let bits = prec.working_bits();
    let mut log_sum = BigFloat::new(bits);
    let mut sign = 1;
    for x in &spec.numerator {
        let (v, s) = log_abs_gamma(x, prec)?;
        log_sum += v;
        sign *= s;
    }
    for x in &spec.denominator {
        let (v, s) = log_abs_gamma(x, prec)?;
        log_sum -= v;
        sign *= s;
    }
    let value = log_sum.exp();
    Ok(if sign < 0 { -value } else { value })
}

/// Like [`gamma_quotient`], but a pole among the denominator arguments
/// alone makes the quotient zero.
pub(crate) fn gamma_ratio(
    numerator: Vec<BigFloat>,
    denominator: Vec<BigFloat>,
    prec: Precision,
) -> Result<BigFloat> {
    if let Some(x) = numerator.iter().find(|x| is_pole(x, prec)) {
        return Err(pole_error(x));
    }
    if denominator.iter().any(|x| is_pole(x, prec)) {
        return Ok(BigFloat::new(prec.working_bits()));
    }
    gamma_quotient(&GammaQuotientSpec::new(numerator, denominator), prec)
}

/// Reflection and duplication residuals; each must stay below `10^-(digits-5)`.
pub fn gamma_selftest(prec: Precision) -> Result<NumericReport> {
    let bits = prec.working_bits();
    let tolerance = ten_to_minus(prec.digits() as i32 - 5, bits);
    let mut report = NumericReport::new(format!("gamma self-test at {prec}"));
    let sqrt_pi = BigFloat::with_val(bits, pi(bits).sqrt_ref());

    for (p, q) in [(1, 4), (1, 3), (2, 5), (7, 10)] {
        let x = from_rational(&rat(p, q), bits);
        let product = gamma(&x, prec)? * gamma(&BigFloat::with_val(bits, 1 - &x), prec)?;
        let expected = pi(bits) / BigFloat::with_val(bits, pi(bits) * &x).sin();
        report.push(NumericCheck::new(
            "reflection",
            vec![("x".into(), format!("{p}/{q}"))],
            product,
            expected,
            None,
            tolerance.clone(),
        ));
    }
    for (p, q) in [(1, 2), (1, 1), (3, 1), (7, 2)] {
        let x = from_rational(&rat(p, q), bits);
        let doubled = gamma(&BigFloat::with_val(bits, &x * 2u32), prec)?;
        let two_pow = BigFloat::with_val(bits, 2).pow(BigFloat::with_val(bits, &x * 2u32) - 1u32);
        let expected =
            gamma(&x, prec)? * gamma(&BigFloat::with_val(bits, &x + 0.5f64), prec)? * two_pow
                / &sqrt_pi;
        report.push(NumericCheck::new(
            "duplication",
            vec![("x".into(), format!("{p}/{q}"))],
            doubled,
            expected,
            None,
            tolerance.clone(),
        ));
    }
    report.push(NumericCheck::new(
        "factorial",
        vec![("x".into(), "6".into())],
        gamma(&BigFloat::with_val(bits, 6), prec)?,
        BigFloat::with_val(bits, 120),
        None,
        tolerance.clone(),
    ));
    report.push(NumericCheck::new(
        "half",
        vec![("x".into(), "1/2".into())],
        gamma(&BigFloat::with_val(bits, 0.5f64), prec)?,
        sqrt_pi,
        None,
        tolerance,
    ));
    Ok(report)
}
