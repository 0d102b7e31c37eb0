//! Gauss–Jacobi rules on (0, 1) and the double-integral forms of the
//! two alternating Catalan convolutions.
//!
//! Each axis weight absorbs the integrand's non-polynomial factors, so the
//! tensor rule integrates `(x - y)^n` exactly once `m >= n/2 + 2`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rug::ops::Pow;

use super::gamma::gamma;
use super::{from_rational, pi, ten_to_minus, BigFloat, NumericCheck, NumericReport, Precision};
use crate::error::{Error, Result};
use crate::exactnum::{binomial, catalan, factorial, format_rational, pochhammer, rat, Rational};

pub const MAX_INTEGRAL_N: u32 = 12;
pub const MAX_INTEGRAL_LAMBDA: u32 = 6;

const MAX_NEWTON_STEPS: usize = 200;

/// Nodes and weights for `int_0^1 f(x) x^beta (1-x)^alpha dx`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub alpha: Rational,
    pub beta: Rational,
    pub nodes: Vec<BigFloat>,
    pub weights: Vec<BigFloat>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn mass(&self) -> BigFloat {
        let bits = self.weights[0].prec();
        self.weights
            .iter()
            .fold(BigFloat::new(bits), |acc, w| acc + w)
    }
}

/// Jacobi recurrence on [-1, 1] for weight `(1-t)^a (1+t)^b`: returns
/// `(P_m(t), P_m'(t))`.
fn jacobi_eval(m: usize, a: &BigFloat, b: &BigFloat, t: &BigFloat) -> (BigFloat, BigFloat) {
    let bits = t.prec();
    let ab = BigFloat::with_val(bits, a + b);
    let mut p_prev = BigFloat::with_val(bits, 1);
    let mut d_prev = BigFloat::new(bits);
    // P_1 = ((a+b+2) t + (a-b)) / 2
    let slope = BigFloat::with_val(bits, &ab + 2u32) / 2u32;
    let mut p = BigFloat::with_val(bits, &slope * t) + BigFloat::with_val(bits, a - b) / 2u32;
    let mut d = slope;
    if m == 0 {
        return (p_prev, d_prev);
    }
    for n in 2..=m as u32 {
        let two_n_ab = BigFloat::with_val(bits, &ab + 2 * n);
        let c0 = BigFloat::with_val(bits, &ab + n)
            * (2 * n)
            * BigFloat::with_val(bits, &two_n_ab - 2u32);
        let c1 = BigFloat::with_val(bits, &two_n_ab - 1u32);
        let c2 = BigFloat::with_val(bits, &two_n_ab * &two_n_ab)
            - BigFloat::with_val(bits, &two_n_ab * 2u32);
        let c3 = BigFloat::with_val(bits, a * a) - BigFloat::with_val(bits, b * b);
        let c4 = BigFloat::with_val(bits, a + (n - 1))
            * BigFloat::with_val(bits, b + (n - 1))
            * 2u32
            * &two_n_ab;
        let linear = BigFloat::with_val(bits, &c2 * t) + &c3;
        let p_next = (BigFloat::with_val(bits, &c1 * &linear) * &p
            - BigFloat::with_val(bits, &c4 * &p_prev))
            / &c0;
        let d_next = (BigFloat::with_val(bits, &c1 * &linear) * &d
            + BigFloat::with_val(bits, &c1 * &c2) * &p
            - BigFloat::with_val(bits, &c4 * &d_prev))
            / &c0;
        p_prev = std::mem::replace(&mut p, p_next);
        d_prev = std::mem::replace(&mut d, d_next);
    }
    (p, d)
}

/// Golub–Welsch eigenvalues in double precision, ascending.
fn initial_nodes(m: usize, a: f64, b: f64) -> Vec<f64> {
    let mut jacobi = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        let fi = i as f64;
        let s = 2.0 * fi + a + b;
        jacobi[(i, i)] = if i == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if i + 1 < m {
            let k = fi + 1.0;
            let s = 2.0 * k + a + b;
            let off_sq = if k == 1.0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
            } else {
                4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0))
            };
            jacobi[(i, i + 1)] = off_sq.sqrt();
            jacobi[(i + 1, i)] = off_sq.sqrt();
        }
    }
    let mut nodes: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    nodes.sort_by(f64::total_cmp);
    nodes
}

/// Gauss–Jacobi rule with `m` nodes for the weight `x^beta (1-x)^alpha`
/// on (0, 1), exact for polynomials of degree `< 2m`.
pub fn jacobi_rule(
    alpha: &Rational,
    beta: &Rational,
    m: usize,
    prec: Precision,
) -> Result<QuadratureRule> {
    if *alpha <= -1 || *beta <= -1 {
        return Err(Error::Domain(format!(
            "Jacobi exponents must exceed -1, got alpha = {}, beta = {}",
            format_rational(alpha),
            format_rational(beta)
        )));
    }
    if m == 0 {
        return Err(Error::Domain(
            "a quadrature rule needs at least one node".into(),
        ));
    }
    let bits = prec.working_bits();
    let a = from_rational(alpha, bits);
    let b = from_rational(beta, bits);
    let tolerance = BigFloat::with_val(bits, 1u32) >> (bits - 8);

    let mut refined = Vec::with_capacity(m);
    for guess in initial_nodes(m, alpha.to_f64(), beta.to_f64()) {
        let mut t = BigFloat::with_val(bits, guess);
        let mut converged = false;
        for _ in 0..MAX_NEWTON_STEPS {
            let (p, d) = jacobi_eval(m, &a, &b, &t);
            if d.is_zero() {
                break;
            }
            let step = p / d;
            t -= &step;
            if step.abs() <= tolerance {
                converged = true;
                break;
            }
        }
        if !converged || !t.is_finite() {
            return Err(Error::RuleConstruction(format!(
                "Newton iteration stalled near node {guess} (m = {m})"
            )));
        }
        refined.push(t);
    }
    for pair in refined.windows(2) {
        if BigFloat::with_val(bits, &pair[1] - &pair[0]) <= tolerance {
            return Err(Error::RuleConstruction(format!(
                "two nodes merged (m = {m})"
            )));
        }
    }

    // Gamma(m+a+1) Gamma(m+b+1) / (Gamma(m+a+b+1) m!), the (0,1) weight scale
    let mf = m as u32;
    let scale = gamma(&BigFloat::with_val(bits, &a + (mf + 1)), prec)?
        * gamma(&BigFloat::with_val(bits, &b + (mf + 1)), prec)?
        / gamma(&(BigFloat::with_val(bits, &a + &b) + (mf + 1)), prec)?
        / BigFloat::with_val(bits, &factorial(mf));
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for t in refined {
        let (_, d) = jacobi_eval(m, &a, &b, &t);
        let one_minus_sq = BigFloat::with_val(bits, 1) - BigFloat::with_val(bits, t.square_ref());
        let weight = BigFloat::with_val(bits, &scale / (one_minus_sq * d.square()));
        let x = (t + 1u32) / 2u32;
        if x <= 0 || x >= 1 || weight <= 0 {
            return Err(Error::RuleConstruction(format!(
                "node or weight out of range (m = {m})"
            )));
        }
        nodes.push(x);
        weights.push(weight);
    }
    Ok(QuadratureRule {
        alpha: alpha.clone(),
        beta: beta.clone(),
        nodes,
        weights,
    })
}

/// The two double integrals with closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegralKind {
    /// Weight `sqrt((1-x)(1-y))`.
    ThmAIntegral,
    /// Weight `sqrt((1-y)/(1-x))`.
    ThmBIntegral,
}

impl IntegralKind {
    pub const ALL: [IntegralKind; 2] = [IntegralKind::ThmAIntegral, IntegralKind::ThmBIntegral];

    pub fn name(self) -> &'static str {
        match self {
            IntegralKind::ThmAIntegral => "thm-a",
            IntegralKind::ThmBIntegral => "thm-b",
        }
    }

    /// `(alpha_x, alpha_y)`; both axes carry `beta = lambda - 1/2`.
    fn alphas(self) -> (Rational, Rational) {
        match self {
            IntegralKind::ThmAIntegral => (rat(1, 2), rat(1, 2)),
            IntegralKind::ThmBIntegral => (rat(-1, 2), rat(1, 2)),
        }
    }

    /// Rational factor `R` of the closed form `pi^2 R / 2^k`, with `2^-k`
    /// included.
    fn closed_form(self, n: u32, lambda: u32) -> Rational {
        let half = n / 2;
        let common = Rational::from(factorial(lambda)) / pochhammer(&Rational::from(n + 2), lambda)
            * binomial(2 * lambda, i64::from(lambda))
            * binomial(n, i64::from(half));
        match self {
            IntegralKind::ThmAIntegral => {
                if n % 2 == 1 {
                    return Rational::new();
                }
                common * catalan(lambda + half)
                    / Rational::from(rug::Integer::from(1) << (2 * (1 + n + 2 * lambda)))
            }
            IntegralKind::ThmBIntegral => {
                common * binomial(n + 2 * lambda, i64::from(lambda + half))
                    / Rational::from(rug::Integer::from(1) << (1 + 2 * n + 4 * lambda))
            }
        }
    }
}

impl fmt::Display for IntegralKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IntegralKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IntegralKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::Domain(format!("unknown integral '{s}' (expected thm-a or thm-b)"))
            })
    }
}

/// Tensor-rule value of `int int (xy)^(lambda-1/2) (x-y)^n w(x,y) dx dy`
/// against its closed form, to `10^-(digits-8)`.
pub fn integral_check(
    kind: IntegralKind,
    n: u32,
    lambda: u32,
    prec: Precision,
) -> Result<NumericReport> {
    integral_check_with_nodes(kind, n, lambda, (n / 2 + 2) as usize, prec)
}

pub(crate) fn integral_check_with_nodes(
    kind: IntegralKind,
    n: u32,
    lambda: u32,
    m: usize,
    prec: Precision,
) -> Result<NumericReport> {
    if n > MAX_INTEGRAL_N || lambda > MAX_INTEGRAL_LAMBDA {
        return Err(Error::Domain(format!(
            "integral checks cover n <= {MAX_INTEGRAL_N}, lambda <= {MAX_INTEGRAL_LAMBDA}; got n = {n}, lambda = {lambda}"
        )));
    }
    let bits = prec.working_bits();
    let beta = Rational::from(lambda) - rat(1, 2);
    let (alpha_x, alpha_y) = kind.alphas();
    let rule_x = jacobi_rule(&alpha_x, &beta, m, prec)?;
    let rule_y = if alpha_y == alpha_x {
        rule_x.clone()
    } else {
        jacobi_rule(&alpha_y, &beta, m, prec)?
    };

    let mut value = BigFloat::new(bits);
    for (x, wx) in rule_x.nodes.iter().zip(&rule_x.weights) {
        for (y, wy) in rule_y.nodes.iter().zip(&rule_y.weights) {
            let diff = BigFloat::with_val(bits, x - y).pow(n);
            value += diff * wx * wy;
        }
    }
    let reference = pi(bits).square() * from_rational(&kind.closed_form(n, lambda), bits);
    let mass = rule_x.mass() * rule_y.mass();
    let scale = reference.is_zero().then_some(&mass);
    let mut report = NumericReport::new(format!("{kind} integral"));
    report.push(NumericCheck::new(
        format!("{kind} integral: quadrature vs closed form"),
        vec![
            ("n".to_string(), n.to_string()),
            ("lambda".to_string(), lambda.to_string()),
            ("nodes".to_string(), m.to_string()),
        ],
        value,
        reference,
        scale,
        ten_to_minus(prec.digits() as i32 - 8, bits),
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::{rhs_value, IdentityId, IdentityParams};

    fn p(d: u32) -> Precision {
        Precision::new(d).unwrap()
    }

    fn close(a: &BigFloat, b: &BigFloat, digits: i32) -> bool {
        let bits = a.prec();
        BigFloat::with_val(bits, a - b).abs() <= ten_to_minus(digits, bits)
    }

    #[test]
    fn legendre_two_nodes() {
        let prec = p(40);
        let rule = jacobi_rule(&rat(0, 1), &rat(0, 1), 2, prec).unwrap();
        let bits = prec.working_bits();
        let root3 = BigFloat::with_val(bits, 3).sqrt();
        let lo = (BigFloat::with_val(bits, 3) - &root3) / 6u32;
        let hi = (BigFloat::with_val(bits, 3) + &root3) / 6u32;
        assert!(close(&rule.nodes[0], &lo, 45));
        assert!(close(&rule.nodes[1], &hi, 45));
        assert!(close(
            &rule.weights[0],
            &BigFloat::with_val(bits, 0.5f64),
            45
        ));
    }

    #[test]
    fn weights_sum_to_beta_function() {
        let prec = p(40);
        let bits = prec.working_bits();
        for (alpha, beta, m) in [
            (rat(1, 2), rat(-1, 2), 3),
            (rat(-1, 2), rat(5, 2), 6),
            (rat(1, 2), rat(7, 2), 9),
        ] {
            let rule = jacobi_rule(&alpha, &beta, m, prec).unwrap();
            let b1 = from_rational(&(beta.clone() + 1u32), bits);
            let a1 = from_rational(&(alpha.clone() + 1u32), bits);
            let sum = BigFloat::with_val(bits, &a1 + &b1);
            let expected =
                gamma(&b1, prec).unwrap() * gamma(&a1, prec).unwrap() / gamma(&sum, prec).unwrap();
            assert!(close(&rule.mass(), &expected, 42));
            assert!(rule.nodes.iter().all(|x| *x > 0 && *x < 1));
        }
    }

    #[test]
    fn single_node_moments() {
        // weight x^(-1/2) (1-x)^(1/2): moments pi/2 and pi/8
        let prec = p(30);
        let bits = prec.working_bits();
        let rule = jacobi_rule(&rat(1, 2), &rat(-1, 2), 1, prec).unwrap();
        assert_eq!(rule.len(), 1);
        let m0 = rule.weights[0].clone();
        let m1 = BigFloat::with_val(bits, &rule.weights[0] * &rule.nodes[0]);
        assert!(close(&m0, &(pi(bits) / 2u32), 32));
        assert!(close(&m1, &(pi(bits) / 8u32), 32));
    }

    #[test]
    fn invalid_rules() {
        assert!(matches!(
            jacobi_rule(&rat(-1, 1), &rat(0, 1), 2, p(30)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            jacobi_rule(&rat(0, 1), &rat(0, 1), 0, p(30)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn first_integral_at_origin() {
        let prec = p(40);
        let report = integral_check(IntegralKind::ThmAIntegral, 0, 0, prec).unwrap();
        let bits = prec.working_bits();
        let check = &report.checks[0];
        assert!(close(&check.reference, &(pi(bits).square() / 4u32), 45));
        assert!(report.passed());
    }

    #[test]
    fn odd_first_integral_vanishes() {
        for lambda in 0..=3 {
            let report = integral_check(IntegralKind::ThmAIntegral, 1, lambda, p(40)).unwrap();
            assert_eq!(report.checks[0].reference, 0);
            assert!(report.passed());
        }
    }

    #[test]
    fn second_integral_example() {
        let prec = p(40);
        let bits = prec.working_bits();
        let report = integral_check(IntegralKind::ThmBIntegral, 2, 1, prec).unwrap();
        let expected = pi(bits).square() * 6u32 / 512u32;
        assert!(close(&report.checks[0].reference, &expected, 45));
        assert!(report.passed());
        let thm = rhs_value(IdentityId::ThmB, &IdentityParams::n(2).lambda(1)).unwrap();
        assert_eq!(thm, 6);
    }

    #[test]
    fn closed_forms_match_theorem_values() {
        for n in 0..=8 {
            for lambda in 0..=3 {
                let params = IdentityParams::n(n).lambda(lambda);
                let a = rhs_value(IdentityId::ThmA, &params).unwrap()
                    / Rational::from(rug::Integer::from(1) << (2 * (1 + n + 2 * lambda)));
                assert_eq!(IntegralKind::ThmAIntegral.closed_form(n, lambda), a);
                let b = rhs_value(IdentityId::ThmB, &params).unwrap()
                    / Rational::from(rug::Integer::from(1) << (1 + 2 * n + 4 * lambda));
                assert_eq!(IntegralKind::ThmBIntegral.closed_form(n, lambda), b);
            }
        }
    }

    #[test]
    fn extra_nodes_do_not_improve() {
        let prec = p(40);
        let base = integral_check(IntegralKind::ThmBIntegral, 6, 2, prec).unwrap();
        let more = integral_check_with_nodes(IntegralKind::ThmBIntegral, 6, 2, 9, prec).unwrap();
        let bits = prec.working_bits();
        assert!(base.passed() && more.passed());
        assert!(close(&base.checks[0].value, &more.checks[0].value, 50));
        let _ = bits;
    }

    #[test]
    fn names_round_trip() {
        for k in IntegralKind::ALL {
            assert_eq!(k.name().parse::<IntegralKind>().unwrap(), k);
        }
        assert!("thm-c".parse::<IntegralKind>().is_err());
    }
}
