//! Exact integer/rational arithmetic and the combinatorial primitives
//! (binomials, Catalan numbers, rising factorials) the rest of the crate
//! is built on.
//!
//! `Integer` and `Rational` are GMP-backed; `Rational` is kept in lowest
//! terms with a positive denominator after every operation.

use std::sync::{LazyLock, RwLock};

pub use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Default number of Catalan numbers kept in the shared table.
pub const DEFAULT_CATALAN_CAP: u32 = 512;

/// Binomial coefficient `n choose k`; zero when `k` lies outside `0..=n`.
pub fn binomial(n: u32, k: i64) -> Integer {
    if k < 0 || k > i64::from(n) {
        return Integer::new();
    }
    let k = k as u32;
    Integer::from(Integer::binomial_u(n, k.min(n - k)))
}

fn catalan_direct(n: u32) -> Integer {
    let central = binomial(2 * n, i64::from(n));
    central.div_exact(&Integer::from(n + 1))
}

/// Memoized Catalan numbers `C_0 ..= C_{cap-1}`.
///
/// Values past the cap are computed directly and not stored.
#[derive(Debug)]
pub struct CatalanTable {
    cap: u32,
    values: RwLock<Vec<Integer>>,
}

impl CatalanTable {
    pub fn with_cap(cap: u32) -> Self {
        CatalanTable {
            cap,
            values: RwLock::new(Vec::new()),
        }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn get(&self, n: u32) -> Integer {
        if n >= self.cap {
            return catalan_direct(n);
        }
        {
            let values = self.values.read().expect("catalan table poisoned");
            if let Some(v) = values.get(n as usize) {
                return v.clone();
            }
        }
        let mut values = self.values.write().expect("catalan table poisoned");
        // C_{m+1} = C_m * 2(2m+1) / (m+2)
        if values.is_empty() {
            values.push(Integer::from(1));
        }
        while values.len() <= n as usize {
            let m = (values.len() - 1) as u32;
            let next = Integer::from(&values[m as usize] * (2 * (2 * m + 1)))
                .div_exact(&Integer::from(m + 2));
            values.push(next);
        }
        values[n as usize].clone()
    }
}

impl Default for CatalanTable {
    fn default() -> Self {
        CatalanTable::with_cap(DEFAULT_CATALAN_CAP)
    }
}

static CATALAN: LazyLock<CatalanTable> = LazyLock::new(CatalanTable::default);

/// Catalan number `C_n = binomial(2n, n) / (n + 1)`.
pub fn catalan(n: u32) -> Integer {
    CATALAN.get(n)
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`, with `(x)_0 = 1`.
///
/// A factor hitting zero is legal and yields zero.
pub fn pochhammer(x: &Rational, n: u32) -> Rational {
    let mut acc = Rational::from(1);
    let mut factor = x.clone();
    for _ in 0..n {
        acc *= &factor;
        if acc.cmp0().is_eq() {
            return acc;
        }
        factor += 1;
    }
    acc
}

/// Index of the first step `j < n` at which `x + j == 0`, if any.
pub(crate) fn zero_step(x: &Rational, n: u32) -> Option<u32> {
    if *x.denom() != 1 || x.cmp0().is_gt() {
        return None;
    }
    let depth = (-x.numer().clone()).to_u32()?;
    (depth < n).then_some(depth)
}

/// Quotient `prod (u)_n / prod (l)_n` of rising factorials.
///
/// Fails when any lower parameter is a nonpositive integer reached within
/// `n` steps.
pub fn poch_quotient(uppers: &[Rational], lowers: &[Rational], n: u32) -> Result<Rational> {
    for (index, l) in lowers.iter().enumerate() {
        if let Some(step) = zero_step(l, n) {
            return Err(Error::ZeroLowerPochhammer {
                index,
                value: l.clone(),
                step,
            });
        }
    }
    let mut num = Rational::from(1);
    for u in uppers {
        num *= pochhammer(u, n);
        if num.cmp0().is_eq() {
            return Ok(num);
        }
    }
    let mut den = Rational::from(1);
    for l in lowers {
        den *= pochhammer(l, n);
    }
    Ok(num / den)
}

/// Indicator: 1 on true, 0 on false.
pub fn chi(condition: bool) -> u32 {
    u32::from(condition)
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

/// Parses `p/q` or a bare integer.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let parsed = Rational::parse(text).ok()?;
    Some(Rational::from(parsed))
}

/// Lossless `num/den` rendering, denominator always present.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}
