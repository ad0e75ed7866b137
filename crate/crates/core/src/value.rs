//! Index values: exact rationals or tolerance-compared floats.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default relative tie tolerance for float arithmetic.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Significant digits of the approximate decimal rendering.
pub const DECIMAL_DIGITS: usize = 10;

/// Arithmetic mode of a computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Rational,
    Float { eps: f64 },
}

impl Mode {
    pub fn is_exact(self) -> bool {
        matches!(self, Mode::Rational)
    }
}

/// `|a - b| <= eps * max(1, |a|, |b|)`.
pub fn float_tie(a: f64, b: f64, eps: f64) -> bool {
    (a - b).abs() <= eps * 1f64.max(a.abs()).max(b.abs())
}

/// Three-way comparison that reports `Equal` for values within tolerance.
pub fn float_cmp(a: f64, b: f64, eps: f64) -> Ordering {
    if float_tie(a, b, eps) {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

#[derive(Debug, Clone)]
pub enum Value {
    Rational(BigRational),
    Float { value: f64, eps: f64 },
}

impl Value {
    pub fn from_int(v: i64) -> Value {
        Value::Rational(BigRational::from_integer(v.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Value {
        Value::Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn zero(mode: Mode) -> Value {
        match mode {
            Mode::Rational => Value::Rational(BigRational::zero()),
            Mode::Float { eps } => Value::Float { value: 0.0, eps },
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Value::Rational(_) => Mode::Rational,
            Value::Float { eps, .. } => Mode::Float { eps: *eps },
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Value::Rational(r) => Some(r),
            Value::Float { .. } => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Rational(r) => rational_to_f64(r),
            Value::Float { value, .. } => *value,
        }
    }

    pub fn checked_add(&self, rhs: &Value) -> Result<Value> {
        match (self, rhs) {
            (Value::Rational(a), Value::Rational(b)) => Ok(Value::Rational(a + b)),
            (Value::Float { value: a, eps }, Value::Float { value: b, .. }) => Ok(Value::Float {
                value: a + b,
                eps: *eps,
            }),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn checked_sub(&self, rhs: &Value) -> Result<Value> {
        self.checked_add(&rhs.neg())
    }

    pub fn neg(&self) -> Value {
        match self {
            Value::Rational(r) => Value::Rational(-r),
            Value::Float { value, eps } => Value::Float {
                value: -value,
                eps: *eps,
            },
        }
    }

    pub fn scale(&self, k: i64) -> Value {
        match self {
            Value::Rational(r) => Value::Rational(r * BigRational::from_integer(k.into())),
            Value::Float { value, eps } => Value::Float {
                value: value * k as f64,
                eps: *eps,
            },
        }
    }

    /// Exact comparison for rationals; tolerance comparison for floats.
    pub fn compare(&self, rhs: &Value) -> Result<Ordering> {
        match (self, rhs) {
            (Value::Rational(a), Value::Rational(b)) => Ok(a.cmp(b)),
            (Value::Float { value: a, eps }, Value::Float { value: b, .. }) => {
                Ok(float_cmp(*a, *b, *eps))
            }
            _ => Err(Error::ModeMismatch),
        }
    }

    /// Equality in the value's own mode; values of different modes are never equal.
    pub fn tie(&self, rhs: &Value) -> bool {
        matches!(self.compare(rhs), Ok(Ordering::Equal))
    }

    /// Approximate decimal rendering with [`DECIMAL_DIGITS`] significant digits.
    pub fn decimal(&self) -> String {
        match self {
            Value::Rational(r) => decimal_string(r, DECIMAL_DIGITS),
            Value::Float { value, .. } => float_decimal(*value, DECIMAL_DIGITS),
        }
    }

    /// `"p/q"` for rationals, `None` for floats.
    pub fn exact(&self) -> Option<String> {
        self.as_rational().map(rational_string)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rational(r) => f.write_str(&rational_string(r)),
            Value::Float { value, .. } => write!(f, "{value}"),
        }
    }
}

/// `{"exact": "p/q", "decimal": "..."}` for rationals, `{"exact": null, "decimal": "..."}` for floats.
impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("exact", &self.exact())?;
        map.serialize_entry("decimal", &self.decimal())?;
        map.end()
    }
}

/// `p/q` in lowest terms, or `p` when the denominator is one.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `[+-]digits[/digits]`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let malformed = || Error::Document(format!("malformed rational '{s}'"));
    let text = s.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let parse_int = |t: &str, signed: bool| -> Result<BigInt> {
        let digits = if signed {
            t.strip_prefix(['+', '-']).unwrap_or(t)
        } else {
            t
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        t.parse::<BigInt>().map_err(|_| malformed())
    };
    let numer = parse_int(num, true)?;
    let denom = match den {
        Some(d) => parse_int(d, false)?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::Document(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(numer, denom))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Out of f64 range; fall back to the quotient's sign.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u8), k as usize)
}

/// Renders `r` in plain decimal notation rounded (half away from zero) to `sig`
/// significant digits. Trailing zeros are kept.
pub fn decimal_string(r: &BigRational, sig: usize) -> String {
    assert!(sig > 0);
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();

    // Estimate e = floor(log10(num / den)) from digit counts, then correct.
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ge = |e: i64| -> bool {
        // num/den >= 10^e
        if e >= 0 {
            num >= &den * pow10(e as u32)
        } else {
            &num * pow10((-e) as u32) >= den
        }
    };
    while !ge(e) {
        e -= 1;
    }
    while ge(e + 1) {
        e += 1;
    }

    // q = round(num/den * 10^(sig-1-e))
    let shift = sig as i64 - 1 - e;
    let (scaled_num, scaled_den) = if shift >= 0 {
        (&num * pow10(shift as u32), den)
    } else {
        (num, den * pow10((-shift) as u32))
    };
    let (mut q, rem) = scaled_num.div_rem(&scaled_den);
    if rem * 2u8 >= scaled_den {
        q += 1u8;
    }
    if q == pow10(sig as u32) {
        q /= 10u8;
        e += 1;
    }

    let digits = q.to_string();
    debug_assert_eq!(digits.len(), sig);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if e >= sig as i64 - 1 {
        out.push_str(&digits);
        out.extend(std::iter::repeat_n('0', (e - (sig as i64 - 1)) as usize));
    } else if e < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-e - 1) as usize));
        out.push_str(&digits);
    } else {
        let split = (e + 1) as usize;
        out.push_str(&digits[..split]);
        out.push('.');
        out.push_str(&digits[split..]);
    }
    out
}

pub fn float_decimal(v: f64, sig: usize) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    match BigRational::from_float(v) {
        Some(r) => decimal_string(&r, sig),
        None => v.to_string(),
    }
}
