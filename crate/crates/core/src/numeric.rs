//! Exact values of the form `a + b·ε` where `a` and `b` are arbitrary-precision
//! rationals and `ε` is a single positive infinitesimal shared by an instance.
//!
//! Values are ordered lexicographically on `(a, b)`, which is the order of the
//! real numbers `a + b·ε` for every sufficiently small `ε > 0`. This lets
//! perturbed instances be played and compared without floating-point ties.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericError {
    #[error("limit of the ratio does not exist: denominator has zero constant part")]
    DenominatorVanishes,
    #[error("cannot parse `{0}` as a rational")]
    BadRational(String),
    #[error("cannot parse `{0}` as an eps value")]
    BadEpsValue(String),
}

/// Build a rational from an integer numerator and denominator.
///
/// Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Build an integral rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"p"`, `"-p"` or `"p/q"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, NumericError> {
    let t = s.trim();
    let bad = || NumericError::BadRational(s.to_string());
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            if let Ok(n) = t.parse::<BigInt>() {
                return Ok(Rational::from_integer(n));
            }
            parse_decimal(t).ok_or_else(bad)
        }
    }
}

// Finite decimals such as "1.25" or "-0.5"; exponents are not accepted.
fn parse_decimal(t: &str) -> Option<Rational> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.')?;
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let den = num::pow(BigInt::from(10u32), frac.len());
    let r = Rational::new(num, den);
    Some(if neg { -r } else { r })
}

/// Render a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion for display and plotting only.
pub fn rational_to_f64(r: &Rational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// The exact number `c + e·ε` with `ε → 0⁺`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct EpsValue {
    c: Rational,
    e: Rational,
}

impl EpsValue {
    pub fn new(c: Rational, e: Rational) -> Self {
        EpsValue { c, e }
    }

    /// Shorthand for integer coefficients, `from_ints(3, -11)` is `3 − 11ε`.
    pub fn from_ints(c: i64, e: i64) -> Self {
        EpsValue::new(int(c), int(e))
    }

    pub fn constant(c: Rational) -> Self {
        EpsValue { c, e: Rational::zero() }
    }

    pub fn zero() -> Self {
        EpsValue::default()
    }

    /// The infinitesimal itself.
    pub fn eps() -> Self {
        EpsValue::from_ints(0, 1)
    }

    /// Constant part.
    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// Coefficient of ε.
    pub fn e(&self) -> &Rational {
        &self.e
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && self.e.is_zero()
    }

    /// `true` iff the value is strictly greater than zero as ε → 0⁺.
    pub fn is_positive(&self) -> bool {
        self.c.is_positive() || (self.c.is_zero() && self.e.is_positive())
    }

    pub fn is_negative(&self) -> bool {
        self.c.is_negative() || (self.c.is_zero() && self.e.is_negative())
    }

    /// Multiply both coefficients by a rational scalar.
    pub fn scale(&self, k: &Rational) -> Self {
        EpsValue { c: &self.c * k, e: &self.e * k }
    }

    /// Componentwise division by a positive integer.
    pub fn div_int(&self, m: usize) -> Self {
        assert!(m > 0, "division by zero machine count");
        let k = Rational::new(BigInt::one(), BigInt::from(m));
        self.scale(&k)
    }

    /// Substitute a concrete ε, producing a plain rational.
    pub fn at(&self, eps: &Rational) -> Rational {
        &self.c + &self.e * eps
    }

    /// Human-oriented rendering, e.g. `3 - 11·ε`.
    pub fn human(&self) -> String {
        let c = format_rational(&self.c);
        if self.e.is_zero() {
            return c;
        }
        let sign = if self.e.is_negative() { '-' } else { '+' };
        let mag = self.e.abs();
        if mag.is_one() {
            format!("{c} {sign} ε")
        } else {
            format!("{c} {sign} {}·ε", format_rational(&mag))
        }
    }
}

/// Three-way comparison in the ε → 0⁺ order.
pub fn compare(x: &EpsValue, y: &EpsValue) -> Ordering {
    x.cmp(y)
}

/// The limit of `num / den` as ε → 0⁺, which is `num.c / den.c`.
pub fn limit_ratio(num: &EpsValue, den: &EpsValue) -> Result<Rational, NumericError> {
    if den.c.is_zero() {
        return Err(NumericError::DenominatorVanishes);
    }
    Ok(&num.c / &den.c)
}

impl Ord for EpsValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.cmp(&other.c).then_with(|| self.e.cmp(&other.e))
    }
}

impl PartialOrd for EpsValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for EpsValue {
    fn from(c: Rational) -> Self {
        EpsValue::constant(c)
    }
}

impl From<i64> for EpsValue {
    fn from(c: i64) -> Self {
        EpsValue::from_ints(c, 0)
    }
}

impl<'a> Add<&'a EpsValue> for &'a EpsValue {
    type Output = EpsValue;
    fn add(self, rhs: &'a EpsValue) -> EpsValue {
        EpsValue { c: &self.c + &rhs.c, e: &self.e + &rhs.e }
    }
}

impl Add for EpsValue {
    type Output = EpsValue;
    fn add(mut self, rhs: EpsValue) -> EpsValue {
        self += &rhs;
        self
    }
}

impl<'a> Sub<&'a EpsValue> for &'a EpsValue {
    type Output = EpsValue;
    fn sub(self, rhs: &'a EpsValue) -> EpsValue {
        EpsValue { c: &self.c - &rhs.c, e: &self.e - &rhs.e }
    }
}

impl Sub for EpsValue {
    type Output = EpsValue;
    fn sub(mut self, rhs: EpsValue) -> EpsValue {
        self -= &rhs;
        self
    }
}

impl AddAssign<&EpsValue> for EpsValue {
    fn add_assign(&mut self, rhs: &EpsValue) {
        self.c += &rhs.c;
        self.e += &rhs.e;
    }
}

impl SubAssign<&EpsValue> for EpsValue {
    fn sub_assign(&mut self, rhs: &EpsValue) {
        self.c -= &rhs.c;
        self.e -= &rhs.e;
    }
}

impl Neg for EpsValue {
    type Output = EpsValue;
    fn neg(self) -> EpsValue {
        EpsValue { c: -self.c, e: -self.e }
    }
}

impl<'a> Sum<&'a EpsValue> for EpsValue {
    fn sum<I: Iterator<Item = &'a EpsValue>>(iter: I) -> Self {
        iter.fold(EpsValue::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

impl Sum for EpsValue {
    fn sum<I: Iterator<Item = EpsValue>>(iter: I) -> Self {
        iter.fold(EpsValue::zero(), |acc, x| acc + x)
    }
}

/// Canonical form `c+e*eps`, e.g. `3-11*eps`, `1/2+0*eps`.
impl fmt::Display for EpsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.e.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}*eps", format_rational(&self.c), sign, format_rational(&self.e.abs()))
    }
}

/// Accepts the canonical `c+e*eps` form as well as a bare rational (`e = 0`).
impl FromStr for EpsValue {
    type Err = NumericError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = t.strip_suffix("*eps") else {
            return parse_rational(&t).map(EpsValue::constant);
        };
        let bad = || NumericError::BadEpsValue(s.to_string());
        // The separating sign is the last '+'/'-' that is not the leading one.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, ch)| ch == '+' || ch == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(bad)?;
        let c = parse_rational(&body[..split]).map_err(|_| bad())?;
        let e = parse_rational(&body[split..]).map_err(|_| bad())?;
        Ok(EpsValue { c, e })
    }
}
