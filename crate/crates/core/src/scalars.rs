//! Exact scalars: rationals and elements of real quadratic fields Q(√d).
//!
//! Everything downstream is generic over [`Field`], so the same quaternion
//! and matrix code runs over Q and over Q(√d) without change.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for an integral rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`. Panics when `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"n"` or `"p/q"`, with optional surrounding whitespace and sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical string form: `"n"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// The operations the quaternion and matrix layers need from a scalar
/// field of characteristic zero containing Q.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn inv(&self) -> Option<Self>;
    fn from_rational(q: Rational) -> Self;
    /// `Some` exactly when the value lies in Q.
    fn to_rational(&self) -> Option<Rational>;
    /// The extension this value needs, if it is not rational.
    fn field_parameter(&self) -> Option<i64> {
        None
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// `c0 + c1·√d` with `d > 1` squarefree.
///
/// A value with `c1 = 0` is an embedded rational and combines with any
/// field; internally such values may carry `d = 0` ("no extension chosen").
/// Mixing two values with different `d` and nonzero `c1` is a logic error
/// and panics in the operator impls; use [`QuadExt::checked_field`] at API
/// boundaries.
#[derive(Clone, Debug)]
pub struct QuadExt {
    d: i64,
    c0: Rational,
    c1: Rational,
}

impl QuadExt {
    pub fn new(d: i64, c0: Rational, c1: Rational) -> Result<Self> {
        check_field_parameter(d)?;
        Ok(QuadExt { d, c0, c1 })
    }

    /// `√d` itself.
    pub fn sqrt(d: i64) -> Result<Self> {
        Self::new(d, Rational::zero(), Rational::one())
    }

    pub fn c0(&self) -> &Rational {
        &self.c0
    }

    pub fn c1(&self) -> &Rational {
        &self.c1
    }

    /// The extension parameter, if one is attached.
    pub fn d(&self) -> Option<i64> {
        (self.d != 0).then_some(self.d)
    }

    /// Galois conjugate `c0 − c1·√d`.
    pub fn conj(&self) -> Self {
        QuadExt {
            d: self.d,
            c0: self.c0.clone(),
            c1: -self.c1.clone(),
        }
    }

    /// Field norm `c0² − d·c1²`.
    pub fn norm(&self) -> Rational {
        &self.c0 * &self.c0 - rat(self.d) * &self.c1 * &self.c1
    }

    /// The common field of two values, or an error when they are
    /// incompatible.
    pub fn checked_field(&self, other: &QuadExt) -> Result<i64> {
        merge_d(self, other).ok_or(Error::FieldMismatch(self.d, other.d))
    }

    /// Re-tags an embedded rational with the field parameter `d`.
    pub fn with_field(mut self, d: i64) -> Result<Self> {
        check_field_parameter(d)?;
        if self.d != 0 && self.d != d && !self.c1.is_zero() {
            return Err(Error::FieldMismatch(self.d, d));
        }
        self.d = d;
        Ok(self)
    }
}

fn check_field_parameter(d: i64) -> Result<()> {
    if d <= 1 || !arith::is_squarefree(d.unsigned_abs()) {
        return Err(Error::InvalidFieldParameter(d));
    }
    Ok(())
}

fn merge_d(x: &QuadExt, y: &QuadExt) -> Option<i64> {
    if x.d == y.d || y.d == 0 {
        Some(x.d)
    } else if x.d == 0 {
        Some(y.d)
    } else if y.c1.is_zero() {
        Some(x.d)
    } else if x.c1.is_zero() {
        Some(y.d)
    } else {
        None
    }
}

fn merged(x: &QuadExt, y: &QuadExt) -> i64 {
    match merge_d(x, y) {
        Some(d) => d,
        None => panic!("arithmetic across Q(√{}) and Q(√{})", x.d, y.d),
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        self.c0 == other.c0 && self.c1 == other.c1 && (self.c1.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadExt {}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c1.is_zero() {
            write!(f, "{}", self.c0)
        } else if self.c0.is_zero() {
            write!(f, "{}*sqrt({})", self.c1, self.d)
        } else if self.c1.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.c0, -self.c1.clone(), self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.c0, self.c1, self.d)
        }
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: QuadExt) -> QuadExt {
        let d = merged(&self, &rhs);
        QuadExt {
            d,
            c0: self.c0 + rhs.c0,
            c1: self.c1 + rhs.c1,
        }
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: QuadExt) -> QuadExt {
        let d = merged(&self, &rhs);
        QuadExt {
            d,
            c0: self.c0 - rhs.c0,
            c1: self.c1 - rhs.c1,
        }
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: QuadExt) -> QuadExt {
        let d = merged(&self, &rhs);
        let c0 = &self.c0 * &rhs.c0 + rat(d) * &self.c1 * &rhs.c1;
        let c1 = &self.c0 * &rhs.c1 + &self.c1 * &rhs.c0;
        QuadExt { d, c0, c1 }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            d: self.d,
            c0: -self.c0,
            c1: -self.c1,
        }
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt::from_rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt::from_rational(Rational::one())
    }
}

impl Field for QuadExt {
    fn inv(&self) -> Option<Self> {
        // d is never a rational square, so the norm vanishes only at zero.
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(QuadExt {
            d: self.d,
            c0: &self.c0 / &n,
            c1: -(&self.c1 / &n),
        })
    }
    fn from_rational(q: Rational) -> Self {
        QuadExt {
            d: 0,
            c0: q,
            c1: Rational::zero(),
        }
    }
    fn to_rational(&self) -> Option<Rational> {
        self.c1.is_zero().then(|| self.c0.clone())
    }
    fn field_parameter(&self) -> Option<i64> {
        (!self.c1.is_zero()).then_some(self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(format_rational(&frac(-3, 2)), "-3/2");
        assert_eq!(format_rational(&rat(7)), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn sqrt_squares_to_d() {
        let s = QuadExt::sqrt(3).unwrap();
        let sq = s.clone() * s;
        assert_eq!(sq.to_rational(), Some(rat(3)));
    }

    #[test]
    fn inverse_and_norm() {
        let x = QuadExt::new(2, rat(1), rat(1)).unwrap();
        assert_eq!(x.norm(), rat(-1));
        let y = x.inv().unwrap();
        assert!((x * y).is_one());
        // conjugation is an involution and the norm is multiplicative
        let z = QuadExt::new(2, frac(1, 3), rat(-2)).unwrap();
        assert_eq!(z.conj().conj(), z);
        let w = QuadExt::new(2, rat(5), frac(1, 2)).unwrap();
        assert_eq!((z.clone() * w.clone()).norm(), z.norm() * w.norm());
    }

    #[test]
    fn embedded_rationals_mix_with_any_field() {
        let half = QuadExt::from_rational(frac(1, 2));
        let r3 = QuadExt::sqrt(3).unwrap();
        let r5 = QuadExt::sqrt(5).unwrap();
        let _ = half.clone() * r3.clone();
        let _ = half * r5.clone();
        assert!(r3.checked_field(&r5).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(QuadExt::sqrt(1).is_err());
        assert!(QuadExt::sqrt(0).is_err());
        assert!(QuadExt::sqrt(8).is_err());
        assert!(QuadExt::sqrt(-3).is_err());
    }
}
