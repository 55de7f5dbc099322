//! Rational helpers: parsing, formatting, exact square roots and quadratic surds.

use std::cmp::Ordering;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("invalid rational {0:?} (expected \"p/q\" or an integer)")]
    Rational(String),
    #[error("invalid divisor {0:?} (expected \"a,b\" meaning a*Theta + b*f)")]
    Divisor(String),
    #[error("invalid chern vector: {0}")]
    Chern(String),
    #[error("{0}")]
    Other(String),
}

/// `n/d` as a rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q`, `-p/q` or `p`. Decimal points and exponents are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let t = s.trim();
    let body = t.strip_prefix(['-', '+']).unwrap_or(t);
    let ok_shape = !body.is_empty()
        && body.chars().all(|c| c.is_ascii_digit() || c == '/')
        && body.matches('/').count() <= 1
        && !body.starts_with('/')
        && !body.ends_with('/');
    if !ok_shape {
        return Err(ParseError::Rational(s.to_string()));
    }
    Rational::from_str(t).map_err(|_| ParseError::Rational(s.to_string()))
}

/// Canonical text form: `p/q` in lowest terms, or `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_positive() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    })
}

pub fn is_integer(q: &Rational) -> bool {
    q.is_integer()
}

/// Exact square root when `q` is the square of a rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Rational enclosure `lo <= sqrt(q) <= hi` with `hi - lo <= 2^-bits`.
pub fn sqrt_enclosure(q: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(!q.is_negative(), "sqrt of a negative rational");
    if let Some(s) = rational_sqrt(q) {
        return (s.clone(), s);
    }
    // sqrt(n/d) = sqrt(n*d)/d; scale by 2^bits before taking the integer root.
    let scale = BigInt::one() << bits;
    let radicand = q.numer() * q.denom() * &scale * &scale;
    let root = radicand.sqrt();
    let denom = q.denom() * &scale;
    (
        Rational::new(root.clone(), denom.clone()),
        Rational::new(root + BigInt::one(), denom),
    )
}

/// Floor of a rational as a `BigInt`.
pub fn floor(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

/// A number `a + b*sqrt(m)` with rational `a, b` and rational `m >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
    pub m: Rational,
}

impl Surd {
    pub fn new(a: Rational, b: Rational, m: Rational) -> Self {
        assert!(!m.is_negative(), "surd radicand must be non-negative");
        Surd { a, b, m }
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        // a + b*sqrt(m) vs q  <=>  b*sqrt(m) vs q - a
        let rhs = q - &self.a;
        let lhs_sign = if self.b.is_zero() || self.m.is_zero() {
            0
        } else if self.b.is_positive() {
            1
        } else {
            -1
        };
        let rhs_sign = sign(&rhs);
        if lhs_sign != rhs_sign {
            return lhs_sign.cmp(&rhs_sign);
        }
        if lhs_sign == 0 {
            return Ordering::Equal;
        }
        let l2 = &self.b * &self.b * &self.m;
        let r2 = &rhs * &rhs;
        if lhs_sign > 0 {
            l2.cmp(&r2)
        } else {
            r2.cmp(&l2)
        }
    }

    pub fn floor(&self) -> BigInt {
        let (lo, _) = self.enclosure(8);
        let mut k = floor(&lo) - BigInt::one();
        // Walk up to the certified floor: k <= x < k+1.
        loop {
            let next = Rational::from_integer(&k + BigInt::one());
            if self.cmp_rational(&next) == Ordering::Less {
                return k;
            }
            k += BigInt::one();
        }
    }

    /// Rational interval containing the value, of width at most `2^-bits * |b|`.
    pub fn enclosure(&self, bits: u32) -> (Rational, Rational) {
        let (lo, hi) = sqrt_enclosure(&self.m, bits);
        let x = &self.a + &self.b * &lo;
        let y = &self.a + &self.b * &hi;
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * to_f64(&self.m).sqrt()
    }
}

pub fn sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Compares `x / sqrt(sx)` with `y / sqrt(sy)` for positive `sx, sy`.
pub fn cmp_scaled(x: &Rational, sx: &Rational, y: &Rational, sy: &Rational) -> Ordering {
    let (gx, gy) = (sign(x), sign(y));
    if gx != gy {
        return gx.cmp(&gy);
    }
    if gx == 0 {
        return Ordering::Equal;
    }
    let lhs = x * x * sy;
    let rhs = y * y * sx;
    if gx > 0 {
        lhs.cmp(&rhs)
    } else {
        rhs.cmp(&lhs)
    }
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}
