//! High-precision floating-point checks for what exact arithmetic cannot
//! reach: Gamma-quotient evaluations of series at unity, Gamma self-tests,
//! and the double integrals behind the convolution sums.
//!
//! Floats are MPFR values ([`BigFloat`]); every computation takes an
//! explicit [`Precision`] and works internally with guard bits on top.

mod gamma;
mod quadrature;
mod series;

use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::Assign;
pub use rug::Float as BigFloat;

use crate::error::{Error, Result};
use crate::exactnum::Rational;

pub use gamma::{gamma, gamma_quotient, gamma_selftest, log_gamma, GammaQuotientSpec};
pub use quadrature::{
    integral_check, jacobi_rule, IntegralKind, QuadratureRule, MAX_INTEGRAL_LAMBDA, MAX_INTEGRAL_N,
};
pub use series::{
    dixon_check, dminus_check, hypergeometric_at_unity, linear4f3_check, SeriesSum,
    DEFAULT_MAX_TERMS,
};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision in decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 20;

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Domain(format!(
                "precision must be at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        Ok(Precision { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Mantissa bits carrying `digits` decimal digits.
    pub fn bits(self) -> u32 {
        (f64::from(self.digits) * LOG2_10).ceil() as u32
    }

    /// Bits used for intermediate results.
    pub(crate) fn working_bits(self) -> u32 {
        self.bits() + 64
    }

    /// A context `factor` times as precise.
    pub(crate) fn scaled(self, factor: u32) -> Precision {
        Precision {
            digits: self.digits * factor,
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} digits", self.digits)
    }
}

pub fn pi(bits: u32) -> BigFloat {
    BigFloat::with_val(bits, Constant::Pi)
}

/// `10^(-digits)` at `bits` precision.
pub fn ten_to_minus(digits: i32, bits: u32) -> BigFloat {
    BigFloat::with_val(bits, 10).pow(-digits)
}

pub(crate) fn from_rational(x: &Rational, bits: u32) -> BigFloat {
    BigFloat::with_val(bits, x)
}

/// Decimal rendering with `digits` significant digits.
pub fn format_float(x: &BigFloat, digits: u32) -> String {
    x.to_string_radix(10, Some(digits as usize))
}

/// One numeric comparison of a computed value against a reference.
#[derive(Debug, Clone)]
pub struct NumericCheck {
    pub label: String,
    pub params: Vec<(String, String)>,
    pub value: BigFloat,
    pub reference: BigFloat,
    /// Relative error, or absolute when the reference is zero (or when the
    /// check declares a scale, relative to that scale).
    pub error: BigFloat,
    pub tolerance: BigFloat,
}

impl NumericCheck {
    /// Builds a check whose error is `|value - reference| / max(|reference|, scale)`,
    /// falling back to the absolute difference when that denominator is zero.
    pub fn new(
        label: impl Into<String>,
        params: Vec<(String, String)>,
        value: BigFloat,
        reference: BigFloat,
        scale: Option<&BigFloat>,
        tolerance: BigFloat,
    ) -> Self {
        let bits = value.prec().max(reference.prec());
        let diff = BigFloat::with_val(bits, &value - &reference).abs();
        let mut denom = BigFloat::with_val(bits, reference.abs_ref());
        if let Some(scale) = scale {
            if *scale > denom {
                denom.assign(scale);
            }
        }
        let error = if denom.is_zero() { diff } else { diff / denom };
        NumericCheck {
            label: label.into(),
            params,
            value,
            reference,
            error,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

/// A group of numeric checks for one operation call.
#[derive(Debug, Clone)]
pub struct NumericReport {
    pub label: String,
    pub checks: Vec<NumericCheck>,
}

impl NumericReport {
    pub fn new(label: impl Into<String>) -> Self {
        NumericReport {
            label: label.into(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(NumericCheck::passed)
    }

    pub fn push(&mut self, check: NumericCheck) {
        self.checks.push(check);
    }

    pub fn worst_error(&self) -> Option<&BigFloat> {
        self.checks
            .iter()
            .map(|c| &c.error)
            .max_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal))
    }
}
