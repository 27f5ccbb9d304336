//! Places of Q and the quadratic Hilbert symbol.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::scalars::Rational;

/// A place of Q: a rational prime or the real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl Place {
    /// The finite place at `p`; rejects composites.
    pub fn finite(p: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(Place::Finite(p))
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Finite(p) => Some(*p),
            Place::Infinite => None,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => f.write_str("inf"),
        }
    }
}

/// `(a, b)_v ∈ {+1, −1}`: `+1` iff `z² = a·x² + b·y²` has a nontrivial
/// solution over the completion of Q at `v`.
pub fn hilbert_symbol(a: &Rational, b: &Rational, v: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    // num·den lies in the same square class as num/den.
    let a = a.numer() * a.denom();
    let b = b.numer() * b.denom();
    match v {
        Place::Infinite => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Finite(p) => {
            if !arith::is_prime(p) {
                return Err(Error::NotPrime(p.to_string()));
            }
            Ok(finite_symbol(&a, &b, p))
        }
    }
}

fn split_off(n: &BigInt, p: u64) -> (u32, BigInt) {
    let v = arith::valuation(n, p);
    let u = n / BigInt::from(p).pow(v);
    (v, u)
}

fn finite_symbol(a: &BigInt, b: &BigInt, p: u64) -> i8 {
    let (alpha, u) = split_off(a, p);
    let (beta, v) = split_off(b, p);
    let mut exponent: u64 = 0;
    let mut sign: i32 = 1;
    if p == 2 {
        let eps = |x: &BigInt| -> u64 { u64::from(x.mod_floor(&BigInt::from(4)) != BigInt::from(1)) };
        let omega = |x: &BigInt| -> u64 {
            let r = x.mod_floor(&BigInt::from(8));
            u64::from(r == BigInt::from(3) || r == BigInt::from(5))
        };
        exponent += eps(&u) * eps(&v);
        exponent += u64::from(alpha) * omega(&v);
        exponent += u64::from(beta) * omega(&u);
    } else {
        exponent += u64::from(alpha) * u64::from(beta) * ((p - 1) / 2);
        if beta % 2 == 1 {
            sign *= arith::legendre(&u, p);
        }
        if alpha % 2 == 1 {
            sign *= arith::legendre(&v, p);
        }
    }
    if exponent % 2 == 1 {
        sign = -sign;
    }
    sign as i8
}

/// The places at which a symbol `(a, b)_v` can be `−1`: the real place and
/// every prime dividing `2·num(ab)·den(ab)`.
pub fn candidate_places(a: &Rational, b: &Rational) -> Result<Vec<Place>> {
    let ab = a * b;
    if ab.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let n = BigInt::from(2) * ab.numer() * ab.denom();
    let mut places: Vec<Place> = arith::prime_divisors(&n)?
        .into_iter()
        .map(Place::Finite)
        .collect();
    places.push(Place::Infinite);
    Ok(places)
}
