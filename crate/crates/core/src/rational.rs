//! Exact rational numbers.
//!
//! Values whose numerator and denominator fit in an `i64` are stored inline and
//! combined through `i128` intermediates; anything larger falls back to
//! [`num_rational::BigRational`]. The representation is canonical (lowest
//! terms, positive denominator, inline whenever it fits), so derived equality
//! and hashing agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An exact fraction in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Invariant: `den > 0`, `gcd(num, den) = 1`, `num != i64::MIN`.
    Small(i64, i64),
    /// Invariant: does not fit the `Small` form.
    Big(Box<BigRational>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn fits_small(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

impl Rational {
    pub const ZERO: Rational = Rational(Repr::Small(0, 1));
    pub const ONE: Rational = Rational(Repr::Small(1, 1));

    /// Builds `num/den`, reducing to lowest terms.
    ///
    /// Panics if `den` is zero.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::new(n, 1)
    }

    /// Builds `num/den` from arbitrary-precision parts. Panics if `den` is zero.
    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "rational with zero denominator");
        Self::from_big(BigRational::new(num, den))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Self::ZERO;
        }
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs());
        // |num|, |den| < 2^127 here, so the quotients are representable.
        let (mut n, mut d) = (num / g as i128, den / g as i128);
        if d < 0 {
            n = -n;
            d = -d;
        }
        if fits_small(n) && fits_small(d) {
            Rational(Repr::Small(n as i64, d as i64))
        } else {
            Rational(Repr::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))))
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational keeps itself reduced with a positive denominator.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(Box::new(r))),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => (**r).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    /// True when the value is held inline rather than as a big fraction.
    pub fn is_small(&self) -> bool {
        matches!(self.0, Repr::Small(..))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(r) => {
                if r.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Largest integer not exceeding `self`.
    pub fn floor(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => Self::from_integer(n.div_euclid(*d)),
            Repr::Big(r) => Self::from_big(r.floor()),
        }
    }

    /// `self mod m`, in `[0, m)`. Panics unless `m > 0`.
    pub fn rem_euclid(&self, m: &Rational) -> Self {
        assert!(m.is_positive(), "modulus must be positive");
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &m.0) {
            // a/b mod c/d = ((a*d) mod (c*b)) / (b*d)
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            return Self::from_i128((a * d).rem_euclid(c * b), b * d);
        }
        self - &(m * &(self / m).floor())
    }

    /// Fractional part, in `[0, 1)`.
    pub fn fract(&self) -> Self {
        self - &self.floor()
    }

    /// Value as an integer, if it is one and fits.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            Repr::Small(..) => None,
            Repr::Big(r) if r.is_integer() => r.numer().to_i64(),
            Repr::Big(_) => None,
        }
    }

    /// Nearest `f64`. Display only: no analysis path goes through floats.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Decimal expansion truncated toward zero to `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        let neg = self.is_negative();
        let num = self.numer().abs();
        let den = self.denom();
        let (int_part, mut rem) = num.div_rem(&den);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        let int_str = int_part.to_string();
        out.push_str(&int_str);
        let mut used = if int_part.is_zero() { 0 } else { int_str.len() };
        if used >= digits || rem.is_zero() {
            if used > digits {
                // Keep the magnitude and zero the digits beyond the precision.
                let keep = &int_str[..digits];
                out.truncate(neg as usize);
                out.push_str(keep);
                out.extend(std::iter::repeat_n('0', used - digits));
            }
            return if out == "-0" { "0".to_string() } else { out };
        }
        out.push('.');
        let ten = BigInt::from(10);
        let mut frac = String::new();
        while used < digits && !rem.is_zero() {
            rem *= &ten;
            let (q, r) = rem.div_rem(&den);
            rem = r;
            let q = q.to_u8().unwrap_or(0);
            if used > 0 || q != 0 {
                used += 1;
            }
            frac.push((b'0' + q) as char);
        }
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            out.pop();
        } else {
            out.push_str(frac);
        }
        if out == "-0" {
            "0".to_string()
        } else {
            out
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self::from_big(r)
    }
}

impl From<&Rational> for BigRational {
    fn from(r: &Rational) -> Self {
        r.to_big()
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn add_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                Rational::from_i128(a + c, b)
            } else {
                Rational::from_i128(a * d + c * b, b * d)
            }
        }
        _ => Rational::from_big(x.to_big() + y.to_big()),
    }
}

fn sub_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                Rational::from_i128(a - c, b)
            } else {
                Rational::from_i128(a * d - c * b, b * d)
            }
        }
        _ => Rational::from_big(x.to_big() - y.to_big()),
    }
}

fn mul_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128),
        _ => Rational::from_big(x.to_big() * y.to_big()),
    }
}

fn div_ref(x: &Rational, y: &Rational) -> Rational {
    assert!(!y.is_zero(), "rational division by zero");
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => Rational::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128),
        _ => Rational::from_big(x.to_big() / y.to_big()),
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident, $imp:ident) => {
        impl $Trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $imp(self, rhs)
            }
        }
        impl $Trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $imp(&self, &rhs)
            }
        }
        impl $Trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $imp(&self, rhs)
            }
        }
        impl $Trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $imp(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            // num != i64::MIN, so negation cannot overflow.
            Repr::Small(n, d) => Rational(Repr::Small(-n, *d)),
            Repr::Big(r) => Rational::from_big(-(**r).clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::ZERO, |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::ZERO, |acc, x| acc + x)
    }
}

/// Always `num/den`, including integers (`"3/1"`, `"0/1"`).
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt, ParseRationalError> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRationalError::Malformed(whole.to_string()));
    }
    s.parse::<BigInt>().map_err(|_| ParseRationalError::Malformed(whole.to_string()))
}

fn parse_decimal(s: &str, whole: &str) -> Result<Rational, ParseRationalError> {
    let Some((int_part, frac_part)) = s.split_once('.') else {
        return Ok(Rational::from_bigints(parse_int(s, whole)?, BigInt::one()));
    };
    let neg = int_part.starts_with('-');
    let int_digits = int_part.strip_prefix(['+', '-']).unwrap_or(int_part);
    if (int_digits.is_empty() && frac_part.is_empty())
        || !int_digits.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(ParseRationalError::Malformed(whole.to_string()));
    }
    let all: String = format!("{int_digits}{frac_part}");
    let mut num: BigInt = all.parse().unwrap_or_else(|_| BigInt::zero());
    if neg {
        num = -num;
    }
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    Ok(Rational::from_bigints(num, den))
}

/// Accepts `"a/b"`, integers, and finite decimals such as `"0.3"`; decimals
/// convert exactly (`"0.3"` is `3/10`).
impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        match t.split_once('/') {
            Some((n, d)) => {
                let num = parse_int(n.trim(), t)?;
                let den = parse_int(d.trim(), t)?;
                if den.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator(t.to_string()));
                }
                Ok(Rational::from_bigints(num, den))
            }
            None => parse_decimal(t, t),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
