//! Truncated power series over exact rationals.
//!
//! Builds `pFq` expansions in `x`, multiplies them, and checks the
//! confluent product formulae coefficient by coefficient. Also sums
//! terminating series at unity exactly (the `4F3` with an extra linear
//! column and its contiguous split into two `3F2` series).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, rat, zero_step, Rational};

/// Default truncation order for product-formula checks.
pub const DEFAULT_ORDER: u32 = 48;

/// Default parameter grid for `a`, `c` in the product and proposition checks.
pub fn default_rational_grid() -> Vec<Rational> {
    [
        (1, 2),
        (1, 1),
        (3, 2),
        (2, 1),
        (5, 2),
        (3, 1),
        (1, 3),
        (2, 3),
    ]
    .into_iter()
    .map(|(p, q)| rat(p, q))
    .collect()
}

/// The argument a series is evaluated at, as a function of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Argument {
    /// `x`
    Plus,
    /// `-x`
    Minus,
    /// `x^2 / 4`
    HalfSquare,
}

impl Argument {
    /// Multiplier applied to the `k`-th term per unit step.
    pub fn scale(self) -> Rational {
        match self {
            Argument::Plus => rat(1, 1),
            Argument::Minus => rat(-1, 1),
            Argument::HalfSquare => rat(1, 4),
        }
    }

    /// Power of `x` contributed per term index.
    pub fn degree(self) -> u32 {
        match self {
            Argument::Plus | Argument::Minus => 1,
            Argument::HalfSquare => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prefactor {
    pub coeff: Rational,
    pub power: u32,
}

impl Default for Prefactor {
    fn default() -> Self {
        Prefactor {
            coeff: rat(1, 1),
            power: 0,
        }
    }
}

/// Parameters of `coeff * x^power * pFq(uppers; lowers; argument)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    pub uppers: Vec<Rational>,
    pub lowers: Vec<Rational>,
    pub argument: Argument,
    pub prefactor: Prefactor,
}

impl SeriesSpec {
    pub fn new(uppers: Vec<Rational>, lowers: Vec<Rational>, argument: Argument) -> Self {
        SeriesSpec {
            uppers,
            lowers,
            argument,
            prefactor: Prefactor::default(),
        }
    }

    pub fn with_prefactor(mut self, coeff: Rational, power: u32) -> Self {
        self.prefactor = Prefactor { coeff, power };
        self
    }
}

/// Coefficients of `x^0 ..= x^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(order: u32) -> Self {
        TruncatedSeries {
            coeffs: vec![Rational::new(); order as usize + 1],
        }
    }

    pub fn one(order: u32) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = rat(1, 1);
        s
    }

    /// Panics on an empty coefficient list.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least x^0");
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeff(&self, k: u32) -> &Rational {
        &self.coeffs[k as usize]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: u32) -> Self {
        let keep = (order.min(self.order()) + 1) as usize;
        TruncatedSeries {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Rational::from(c * factor))
                .collect(),
        }
    }

    /// Multiply by `x^power`, dropping what falls past the order.
    pub fn shifted(&self, power: u32) -> Self {
        let mut out = Self::zero(self.order());
        for (k, c) in self.coeffs.iter().enumerate() {
            let target = k + power as usize;
            if target >= out.coeffs.len() {
                break;
            }
            out.coeffs[target] = c.clone();
        }
        out
    }

    /// Index of the first coefficient where the two series differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<u32> {
        let order = self.order().min(other.order());
        (0..=order).find(|&k| self.coeff(k) != other.coeff(k))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let order = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=order)
                .map(|k| f(self.coeff(k), other.coeff(k)))
                .collect(),
        }
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| Rational::from(a + b))
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| Rational::from(a - b))
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scaled(&rat(-1, 1))
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        series_mul(self, rhs)
    }
}

/// Cauchy product truncated to the smaller of the two orders.
pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    let order = a.order().min(b.order()) as usize;
    let mut coeffs = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut acc = Rational::new();
        for i in 0..=n {
            let (x, y) = (&a.coeffs[i], &b.coeffs[n - i]);
            if x.cmp0().is_ne() && y.cmp0().is_ne() {
                acc += Rational::from(x * y);
            }
        }
        coeffs.push(acc);
    }
    TruncatedSeries { coeffs }
}

fn term_ratio(uppers: &[Rational], lowers: &[Rational], k: u32) -> Rational {
    // t_{k+1} / t_k = prod(u + k) / (prod(l + k) * (k + 1))
    let mut num = Rational::from(1);
    for u in uppers {
        num *= Rational::from(u + k);
    }
    let mut den = Rational::from(k + 1);
    for l in lowers {
        den *= Rational::from(l + k);
    }
    num / den
}

fn first_lower_zero(lowers: &[Rational], steps: u32) -> Option<(usize, u32)> {
    lowers
        .iter()
        .enumerate()
        .filter_map(|(i, l)| zero_step(l, steps).map(|s| (i, s)))
        .min_by_key(|&(_, s)| s)
}

/// Truncated expansion of the series described by `spec`.
///
/// Terms are generated by their ratio; once an upper parameter reaches zero
/// the series has terminated and later lower-parameter zeros are harmless.
pub fn pfq_truncate(spec: &SeriesSpec, order: u32) -> Result<TruncatedSeries> {
    let degree = spec.argument.degree();
    let scale = spec.argument.scale();
    let mut out = TruncatedSeries::zero(order);
    if spec.prefactor.power > order {
        return Ok(out);
    }
    let max_index = (order - spec.prefactor.power) / degree;
    // number of nonzero terms before termination
    let terminating_at = spec
        .uppers
        .iter()
        .filter_map(|u| zero_step(u, max_index + 1))
        .min();
    let live_terms = terminating_at.map_or(max_index + 1, |t| t + 1);
    // term k needs lower steps 0..k-1, so k <= live_terms-1 touches steps < live_terms-1
    if let Some((index, step)) = first_lower_zero(&spec.lowers, live_terms.saturating_sub(1)) {
        return Err(Error::ZeroLowerPochhammer {
            index,
            value: spec.lowers[index].clone(),
            step,
        });
    }

    let mut term = spec.prefactor.coeff.clone();
    for k in 0..live_terms {
        if term.cmp0().is_eq() {
            break;
        }
        out.coeffs[(k * degree + spec.prefactor.power) as usize] = term.clone();
        if k + 1 < live_terms {
            term *= term_ratio(&spec.uppers, &spec.lowers, k);
            term *= &scale;
        }
    }
    Ok(out)
}

/// The product formulae checked coefficient by coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProductFormula {
    /// `1F1(a;c;x) 1F1(a;c;-x) = 2F3(a, c-a; c, c/2, (1+c)/2; x^2/4)`
    BaileyDixon,
    /// `1F1(a;2a;x) 1F1(c;2c;-x) = 2F3((a+c)/2, (a+c+1)/2; a+c, a+1/2, c+1/2; x^2/4)`
    BaileyWatson,
    /// `2F1(a,c; a+c+1/2; x)^2 = 3F2(a+c, 2a, 2c; a+c+1/2, 2a+2c; x)`
    Clausen,
    /// `1F1(a;c;x) 2F2(1+lambda, a; lambda, c; -x)` against a `3F4` minus an odd `2F3` part.
    LemmaLinear,
    /// `LemmaLinear` at `lambda = c - 1`.
    VariantLinear,
}

impl ProductFormula {
    pub const ALL: [ProductFormula; 5] = [
        ProductFormula::BaileyDixon,
        ProductFormula::BaileyWatson,
        ProductFormula::Clausen,
        ProductFormula::LemmaLinear,
        ProductFormula::VariantLinear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProductFormula::BaileyDixon => "bailey-dixon",
            ProductFormula::BaileyWatson => "bailey-watson",
            ProductFormula::Clausen => "clausen",
            ProductFormula::LemmaLinear => "lemma-linear",
            ProductFormula::VariantLinear => "variant-linear",
        }
    }

    pub fn uses_lambda(self) -> bool {
        self == ProductFormula::LemmaLinear
    }
}

impl fmt::Display for ProductFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProductFormula {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ProductFormula::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown formula `{s}`"))
    }
}

fn half(x: &Rational) -> Rational {
    Rational::from(x / 2u32)
}

fn plus(x: &Rational, p: i64, q: i64) -> Rational {
    x + rat(p, q)
}

/// The odd part shared by the two linear-factor formulae:
/// `-(a / (c * mult)) x 2F3(1+a, c-a; c, (1+c)/2, (2+c)/2; x^2/4)`.
fn odd_part(a: &Rational, c: &Rational, mult: &Rational, order: u32) -> Result<TruncatedSeries> {
    let coeff = -(a / Rational::from(c * mult));
    pfq_truncate(
        &SeriesSpec::new(
            vec![plus(a, 1, 1), Rational::from(c - a)],
            vec![c.clone(), half(&plus(c, 1, 1)), half(&plus(c, 2, 1))],
            Argument::HalfSquare,
        )
        .with_prefactor(coeff, 1),
        order,
    )
}

/// Left and right sides of `formula` as truncated series.
///
/// `lambda` is read only by [`ProductFormula::LemmaLinear`].
pub fn product_sides(
    formula: ProductFormula,
    a: &Rational,
    c: &Rational,
    lambda: &Rational,
    order: u32,
) -> Result<(TruncatedSeries, TruncatedSeries)> {
    use Argument::*;
    let one_f_one = |u: &Rational, l: &Rational, arg| {
        pfq_truncate(
            &SeriesSpec::new(vec![u.clone()], vec![l.clone()], arg),
            order,
        )
    };
    let c_minus_a = Rational::from(c - a);
    match formula {
        ProductFormula::BaileyDixon => {
            let lhs = &one_f_one(a, c, Plus)? * &one_f_one(a, c, Minus)?;
            let rhs = pfq_truncate(
                &SeriesSpec::new(
                    vec![a.clone(), c_minus_a],
                    vec![c.clone(), half(c), half(&plus(c, 1, 1))],
                    HalfSquare,
                ),
                order,
            )?;
            Ok((lhs, rhs))
        }
        ProductFormula::BaileyWatson => {
            let two_a = Rational::from(a * 2u32);
            let two_c = Rational::from(c * 2u32);
            let lhs = &one_f_one(a, &two_a, Plus)? * &one_f_one(c, &two_c, Minus)?;
            let a_plus_c = Rational::from(a + c);
            let rhs = pfq_truncate(
                &SeriesSpec::new(
                    vec![half(&a_plus_c), half(&plus(&a_plus_c, 1, 1))],
                    vec![a_plus_c.clone(), plus(a, 1, 2), plus(c, 1, 2)],
                    HalfSquare,
                ),
                order,
            )?;
            Ok((lhs, rhs))
        }
        ProductFormula::Clausen => {
            let a_plus_c = Rational::from(a + c);
            let base = pfq_truncate(
                &SeriesSpec::new(
                    vec![a.clone(), c.clone()],
                    vec![plus(&a_plus_c, 1, 2)],
                    Plus,
                ),
                order,
            )?;
            let lhs = &base * &base;
            let rhs = pfq_truncate(
                &SeriesSpec::new(
                    vec![
                        a_plus_c.clone(),
                        Rational::from(a * 2u32),
                        Rational::from(c * 2u32),
                    ],
                    vec![plus(&a_plus_c, 1, 2), Rational::from(&a_plus_c * 2u32)],
                    Plus,
                ),
                order,
            )?;
            Ok((lhs, rhs))
        }
        ProductFormula::LemmaLinear => {
            if lambda.cmp0().is_eq() {
                return Err(Error::DegenerateLambda);
            }
            let linear = pfq_truncate(
                &SeriesSpec::new(
                    vec![plus(lambda, 1, 1), a.clone()],
                    vec![lambda.clone(), c.clone()],
                    Minus,
                ),
                order,
            )?;
            let lhs = &one_f_one(a, c, Plus)? * &linear;
            let even = pfq_truncate(
                &SeriesSpec::new(
                    vec![plus(lambda, 1, 1), a.clone(), c_minus_a],
                    vec![lambda.clone(), c.clone(), half(c), half(&plus(c, 1, 1))],
                    HalfSquare,
                ),
                order,
            )?;
            let rhs = &even + &odd_part(a, c, lambda, order)?;
            Ok((lhs, rhs))
        }
        ProductFormula::VariantLinear => {
            if *c == 0 || *c == 1 {
                return Err(Error::Domain(
                    "variant-linear needs c outside {0, 1}".into(),
                ));
            }
            // The (c-1) factor rides on -x: this is the lambda = c-1 case of
            // the linear-factor product, and the orientation the odd part's
            // sign requires.
            let c_minus_1 = plus(c, -1, 1);
            let lhs = &one_f_one(a, c, Plus)? * &one_f_one(a, &c_minus_1, Minus)?;
            let even = pfq_truncate(
                &SeriesSpec::new(
                    vec![a.clone(), c_minus_a],
                    vec![c_minus_1.clone(), half(c), half(&plus(c, 1, 1))],
                    HalfSquare,
                ),
                order,
            )?;
            let rhs = &even + &odd_part(a, c, &c_minus_1, order)?;
            Ok((lhs, rhs))
        }
    }
}

/// Outcome of a coefficient-by-coefficient product check.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientReport {
    pub formula: ProductFormula,
    pub a: Rational,
    pub c: Rational,
    pub lambda: Option<Rational>,
    pub order: u32,
    /// First differing coefficient with both values, if any.
    pub mismatch: Option<(u32, Rational, Rational)>,
}

impl CoefficientReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }

    pub fn params(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("formula".to_string(), self.formula.to_string()),
            ("a".to_string(), format_rational(&self.a)),
            ("c".to_string(), format_rational(&self.c)),
        ];
        if let Some(l) = &self.lambda {
            out.push(("lambda".to_string(), format_rational(l)));
        }
        out.push(("order".to_string(), self.order.to_string()));
        out
    }
}

pub fn check_product_formula(
    formula: ProductFormula,
    a: &Rational,
    c: &Rational,
    lambda: &Rational,
    order: u32,
) -> Result<CoefficientReport> {
    let (lhs, rhs) = product_sides(formula, a, c, lambda, order)?;
    let mismatch = lhs
        .first_mismatch(&rhs)
        .map(|k| (k, lhs.coeff(k).clone(), rhs.coeff(k).clone()));
    Ok(CoefficientReport {
        formula,
        a: a.clone(),
        c: c.clone(),
        lambda: formula.uses_lambda().then(|| lambda.clone()),
        order,
        mismatch,
    })
}

/// Exact sum of a terminating hypergeometric series at unity.
///
/// Some upper parameter must be a nonpositive integer; lower parameters
/// must stay nonzero over the surviving terms.
pub fn terminating_sum(uppers: &[Rational], lowers: &[Rational]) -> Result<Rational> {
    let length = uppers
        .iter()
        .filter_map(|u| zero_step(u, u32::MAX))
        .min()
        .ok_or_else(|| Error::Domain("series does not terminate".into()))?;
    if let Some((index, step)) = first_lower_zero(lowers, length) {
        return Err(Error::ZeroLowerPochhammer {
            index,
            value: lowers[index].clone(),
            step,
        });
    }
    let mut sum = Rational::new();
    let mut term = rat(1, 1);
    for k in 0..=length {
        sum += &term;
        if k < length {
            term *= term_ratio(uppers, lowers, k);
        }
    }
    Ok(sum)
}

/// Exact two-sided comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactReport {
    pub params: Vec<(String, String)>,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl ExactReport {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn terminating_params(
    n: u32,
    c: &Rational,
    e: &Rational,
    lambda: &Rational,
) -> Vec<(String, String)> {
    vec![
        ("n".to_string(), n.to_string()),
        ("c".to_string(), format_rational(c)),
        ("e".to_string(), format_rational(e)),
        ("lambda".to_string(), format_rational(lambda)),
    ]
}

/// Closed form of the terminating `4F3(-n, c, e, 1+lambda; 1-c-n, 1-e-n, lambda; 1)`.
pub fn terminating_4f3_closed_form(
    n: u32,
    c: &Rational,
    e: &Rational,
    lambda: &Rational,
) -> Result<Rational> {
    if lambda.cmp0().is_eq() {
        return Err(Error::DegenerateLambda);
    }
    let n_r = Rational::from(n);
    let one_minus_n = Rational::from(1 - &n_r);
    let uppers = [
        Rational::from(-&n_r),
        (&one_minus_n - Rational::from(c + e)),
    ];
    let lowers = [
        Rational::from(&one_minus_n - c),
        Rational::from(&one_minus_n - e),
    ];
    let base = crate::exactnum::poch_quotient(&uppers, &lowers, n / 2)?;
    let two_lambda = Rational::from(lambda * 2u32);
    let factor = if n.is_multiple_of(2) {
        Rational::from(&two_lambda + n) / &two_lambda
    } else {
        -Rational::from(n + 1) / two_lambda
    };
    Ok(base * factor)
}

fn terminating_parameters(n: u32, c: &Rational, e: &Rational) -> (Rational, Rational, Rational) {
    let a = -Rational::from(n);
    let lower_c = Rational::from(1 + &a) - c;
    let lower_e = Rational::from(1 + &a) - e;
    (a, lower_c, lower_e)
}

/// Direct sum of the terminating `4F3` against its closed form.
pub fn terminating_4f3_check(
    n: u32,
    c: &Rational,
    e: &Rational,
    lambda: &Rational,
) -> Result<ExactReport> {
    if lambda.cmp0().is_eq() {
        return Err(Error::DegenerateLambda);
    }
    let (a, lower_c, lower_e) = terminating_parameters(n, c, e);
    let lhs = terminating_sum(
        &[a, c.clone(), e.clone(), plus(lambda, 1, 1)],
        &[lower_c, lower_e, lambda.clone()],
    )?;
    let rhs = terminating_4f3_closed_form(n, c, e, lambda)?;
    Ok(ExactReport {
        params: terminating_params(n, c, e, lambda),
        lhs,
        rhs,
    })
}

/// The `4F3` with the `(lambda+k)/lambda` column against
/// `(lambda-a)/lambda * 3F2(a,..) + (a/lambda) * 3F2(1+a,..)` at `a = -n`.
pub fn contiguous_relation_check(
    n: u32,
    c: &Rational,
    e: &Rational,
    lambda: &Rational,
) -> Result<ExactReport> {
    if lambda.cmp0().is_eq() {
        return Err(Error::DegenerateLambda);
    }
    let (a, lower_c, lower_e) = terminating_parameters(n, c, e);
    let lowers = [lower_c, lower_e];
    let lhs = terminating_sum(
        &[a.clone(), c.clone(), e.clone(), plus(lambda, 1, 1)],
        &[lowers[0].clone(), lowers[1].clone(), lambda.clone()],
    )?;
    let first = terminating_sum(&[a.clone(), c.clone(), e.clone()], &lowers)?;
    let mut rhs = Rational::from(lambda - &a) / lambda * first;
    if a.cmp0().is_ne() {
        let second = terminating_sum(&[plus(&a, 1, 1), c.clone(), e.clone()], &lowers)?;
        rhs += Rational::from(&a / lambda) * second;
    }
    Ok(ExactReport {
        params: terminating_params(n, c, e, lambda),
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::factorial;

    fn r(p: i64, q: i64) -> Rational {
        rat(p, q)
    }

    #[test]
    fn exponential_series() {
        let a = r(7, 3);
        let s = pfq_truncate(
            &SeriesSpec::new(vec![a.clone()], vec![a], Argument::Plus),
            6,
        )
        .unwrap();
        for k in 0..=6 {
            assert_eq!(*s.coeff(k), Rational::from((1, factorial(k))));
        }
    }

    #[test]
    fn one_f_one_coefficient() {
        let s = pfq_truncate(
            &SeriesSpec::new(vec![r(1, 2)], vec![r(2, 1)], Argument::Plus),
            4,
        )
        .unwrap();
        // (1/2)_2 / ((2)_2 2!) = (3/4) / 12
        assert_eq!(*s.coeff(2), r(1, 16));
    }

    #[test]
    fn half_square_has_no_odd_powers() {
        let s = pfq_truncate(
            &SeriesSpec::new(
                vec![r(1, 1), r(1, 1)],
                vec![r(2, 1), r(1, 1), r(3, 2)],
                Argument::HalfSquare,
            ),
            9,
        )
        .unwrap();
        for k in (1..=9).step_by(2) {
            assert_eq!(*s.coeff(k), 0);
        }
        // k=1 term: 1*1/(2*1*(3/2)) / 1! * 1/4
        assert_eq!(*s.coeff(2), r(1, 12));
    }

    #[test]
    fn minus_argument_flips_odd_terms() {
        let plus = pfq_truncate(
            &SeriesSpec::new(vec![r(1, 3)], vec![r(5, 2)], Argument::Plus),
            7,
        )
        .unwrap();
        let minus = pfq_truncate(
            &SeriesSpec::new(vec![r(1, 3)], vec![r(5, 2)], Argument::Minus),
            7,
        )
        .unwrap();
        for k in 0..=7 {
            let expected = if k % 2 == 0 {
                plus.coeff(k).clone()
            } else {
                -plus.coeff(k).clone()
            };
            assert_eq!(*minus.coeff(k), expected);
        }
    }

    #[test]
    fn prefactor_shifts_and_scales() {
        let base = SeriesSpec::new(vec![r(1, 1)], vec![r(1, 1)], Argument::Plus);
        let s = pfq_truncate(&base.clone().with_prefactor(r(3, 1), 2), 5).unwrap();
        assert_eq!(s.coeffs()[..2], [r(0, 1), r(0, 1)]);
        assert_eq!(*s.coeff(2), 3);
        assert_eq!(*s.coeff(5), r(1, 2));
    }

    #[test]
    fn terminating_series_is_polynomial() {
        let s = pfq_truncate(
            &SeriesSpec::new(vec![r(-3, 1)], vec![r(1, 2)], Argument::Plus),
            10,
        )
        .unwrap();
        assert_ne!(*s.coeff(3), 0);
        for k in 4..=10 {
            assert_eq!(*s.coeff(k), 0);
        }
        // lower -5 would vanish at step 5, but the series stops after x^3
        let s = pfq_truncate(
            &SeriesSpec::new(vec![r(-3, 1)], vec![r(-5, 1)], Argument::Plus),
            10,
        );
        assert!(s.is_ok());
    }

    #[test]
    fn zero_lower_is_rejected() {
        let err = pfq_truncate(
            &SeriesSpec::new(vec![r(1, 1)], vec![r(-2, 1)], Argument::Plus),
            5,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::ZeroLowerPochhammer {
                index: 0,
                step: 2,
                ..
            }
        ));
        // order 2 only needs lower steps 0 and 1
        assert!(pfq_truncate(
            &SeriesSpec::new(vec![r(1, 1)], vec![r(-2, 1)], Argument::Plus),
            2
        )
        .is_ok());
    }

    #[test]
    fn cauchy_product_examples() {
        let a = TruncatedSeries::from_coeffs(vec![r(1, 1), r(2, 3), r(-1, 5)]);
        assert_eq!(series_mul(&a, &TruncatedSeries::one(2)), a);
        let p = TruncatedSeries::from_coeffs(vec![r(1, 1), r(1, 1), r(0, 1)]);
        let m = TruncatedSeries::from_coeffs(vec![r(1, 1), r(-1, 1), r(0, 1)]);
        assert_eq!(series_mul(&p, &m).coeffs(), &[r(1, 1), r(0, 1), r(-1, 1)]);
        // 1F1(1;2;x) = sum x^k/(k+1)!; x^2 coefficient of the product with its reflection
        let f = |arg| pfq_truncate(&SeriesSpec::new(vec![r(1, 1)], vec![r(2, 1)], arg), 4).unwrap();
        let prod = series_mul(&f(Argument::Plus), &f(Argument::Minus));
        let direct: Rational = (0..=2)
            .map(|i| {
                let sign = if (2 - i) % 2 == 0 { 1 } else { -1 };
                Rational::from((sign, factorial(i + 1) * factorial(3 - i)))
            })
            .sum();
        assert_eq!(*prod.coeff(2), direct);
        // 1/6 - 1/4 + 1/6
        assert_eq!(*prod.coeff(2), r(1, 12));
    }

    #[test]
    fn product_mul_truncates_to_min_order() {
        let a = TruncatedSeries::one(5);
        let b = TruncatedSeries::one(3);
        assert_eq!(series_mul(&a, &b).order(), 3);
    }

    #[test]
    fn product_formula_examples() {
        let rep = check_product_formula(
            ProductFormula::BaileyDixon,
            &r(1, 1),
            &r(2, 1),
            &r(0, 1),
            16,
        )
        .unwrap();
        assert!(rep.passed(), "{rep:?}");
        let (lhs, _) =
            product_sides(ProductFormula::Clausen, &r(1, 2), &r(1, 2), &r(0, 1), 12).unwrap();
        assert_eq!(*lhs.coeff(0), 1);
        let rep = check_product_formula(ProductFormula::Clausen, &r(1, 2), &r(1, 2), &r(0, 1), 12)
            .unwrap();
        assert!(rep.passed());
        let rep = check_product_formula(
            ProductFormula::LemmaLinear,
            &r(1, 2),
            &r(2, 1),
            &r(1, 1),
            16,
        )
        .unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn lemma_at_c_minus_one_is_the_variant() {
        for (a, c) in [(r(1, 2), r(2, 1)), (r(2, 3), r(5, 2)), (r(3, 1), r(1, 3))] {
            let lambda = Rational::from(&c - 1);
            let lemma = product_sides(ProductFormula::LemmaLinear, &a, &c, &lambda, 20).unwrap();
            let variant =
                product_sides(ProductFormula::VariantLinear, &a, &c, &r(99, 1), 20).unwrap();
            assert_eq!(lemma.0, variant.0);
            assert_eq!(lemma.1, variant.1);
        }
    }

    #[test]
    fn variant_with_factors_swapped_fails_at_first_order() {
        // 1F1(a;c-1;x) 1F1(a;c;-x) has x^1 coefficient +a/(c(c-1)); the odd
        // part of the right side carries -a/(c(c-1)).
        let (a, c) = (r(1, 2), r(2, 1));
        let f = |l: &Rational, arg| {
            pfq_truncate(&SeriesSpec::new(vec![a.clone()], vec![l.clone()], arg), 6).unwrap()
        };
        let swapped = &f(&r(1, 1), Argument::Plus) * &f(&c, Argument::Minus);
        let (_, rhs) = product_sides(ProductFormula::VariantLinear, &a, &c, &r(0, 1), 6).unwrap();
        assert_eq!(swapped.first_mismatch(&rhs), Some(1));
        assert_eq!(*swapped.coeff(1), r(1, 4));
        assert_eq!(*rhs.coeff(1), r(-1, 4));
    }

    #[test]
    fn lemma_rejects_zero_lambda() {
        let err =
            check_product_formula(ProductFormula::LemmaLinear, &r(1, 2), &r(2, 1), &r(0, 1), 8)
                .unwrap_err();
        assert_eq!(err, Error::DegenerateLambda);
        assert!(check_product_formula(
            ProductFormula::VariantLinear,
            &r(1, 2),
            &r(1, 1),
            &r(0, 1),
            8
        )
        .is_err());
    }

    #[test]
    fn terminating_4f3_examples() {
        let rep = terminating_4f3_check(0, &r(1, 3), &r(1, 5), &r(2, 1)).unwrap();
        assert_eq!((rep.lhs.clone(), rep.rhs.clone()), (r(1, 1), r(1, 1)));
        let rep = terminating_4f3_check(1, &r(1, 3), &r(1, 5), &r(2, 1)).unwrap();
        assert_eq!(rep.lhs, r(-1, 2));
        assert_eq!(rep.rhs, r(-1, 2));
        let rep = terminating_4f3_check(2, &r(1, 1), &r(1, 1), &r(1, 1)).unwrap();
        assert_eq!(rep.lhs, r(3, 1));
        assert_eq!(rep.rhs, r(3, 1));
    }

    #[test]
    fn terminating_4f3_direct_oracle() {
        // n = 2, c = e = 1, lambda = 1: terms 1, -2*1*1*2/((-2)(-2)*1), (1*2)(1*2)(2*3)/((-2*-1)^2 * (1*2)) / 2!
        let t0 = r(1, 1);
        let t1 = r(-2 * 2, 4);
        let t2 = Rational::from((2 * 2 * 2 * 6, 4 * 2)) / 2u32;
        assert_eq!(t0 + t1 + t2, r(3, 1));
    }

    #[test]
    fn contiguous_examples() {
        let rep = contiguous_relation_check(0, &r(1, 3), &r(1, 5), &r(2, 1)).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.lhs, 1);
        assert!(contiguous_relation_check(1, &r(1, 3), &r(1, 5), &r(2, 1))
            .unwrap()
            .passed());
        assert!(contiguous_relation_check(3, &r(1, 2), &r(1, 7), &r(1, 1))
            .unwrap()
            .passed());
        assert_eq!(
            contiguous_relation_check(3, &r(1, 2), &r(1, 7), &r(0, 1)).unwrap_err(),
            Error::DegenerateLambda
        );
    }

    #[test]
    fn terminating_sum_requires_termination() {
        assert!(terminating_sum(&[r(1, 2)], &[r(3, 1)]).is_err());
        // 2F1(-2, 1; 1; 1) = (1-1)^2 = 0
        assert_eq!(
            terminating_sum(&[r(-2, 1), r(1, 1)], &[r(1, 1)]).unwrap(),
            0
        );
    }

    #[test]
    fn formula_names_round_trip() {
        for f in ProductFormula::ALL {
            assert_eq!(f.name().parse::<ProductFormula>().unwrap(), f);
        }
        assert!("nope".parse::<ProductFormula>().is_err());
    }
}
