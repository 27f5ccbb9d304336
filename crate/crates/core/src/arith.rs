//! Elementary integer arithmetic: trial-division factoring, valuations,
//! squarefree kernels, Legendre symbols.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalars::Rational;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factor_u64(n).iter().all(|&(_, e)| e == 1)
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        push(d, &mut n);
        d += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime factorization of `|n|`, ascending. `n` must fit in 64 bits.
pub fn factorize(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let m = n
        .abs()
        .to_u64()
        .ok_or_else(|| Error::TooLargeToFactor(n.to_string()))?;
    Ok(factor_u64(m))
}

/// Distinct primes dividing `|n|`.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>> {
    Ok(factorize(n)?.into_iter().map(|(p, _)| p).collect())
}

/// Exponent of `p` in a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `p`-adic valuation of a nonzero rational.
pub fn rational_valuation(q: &Rational, p: u64) -> i64 {
    valuation(q.numer(), p) as i64 - valuation(q.denom(), p) as i64
}

/// The unique squarefree positive integer `s` with `x = ±s·(rational square)`.
pub fn squarefree_kernel(x: &Rational) -> Result<BigInt> {
    Ok(signed_squarefree_part(x)?.abs())
}

/// Like [`squarefree_kernel`] but keeps the sign: `x = s·(rational square)`.
pub fn signed_squarefree_part(x: &Rational) -> Result<BigInt> {
    if x.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let n = x.numer() * x.denom();
    let mut s = BigInt::one();
    for (p, e) in factorize(&n)? {
        if e % 2 == 1 {
            s *= p;
        }
    }
    if x.is_negative() {
        s = -s;
    }
    Ok(s)
}

/// Exact square root of a rational square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// Exact square root of a nonnegative integer square.
pub fn integer_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Legendre symbol `(a/p)` for an odd prime `p`; 0 when `p | a`.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    let pb = BigInt::from(p);
    let a = a.mod_floor(&pb);
    if a.is_zero() {
        return 0;
    }
    let e = BigInt::from((p - 1) / 2);
    if a.modpow(&e, &pb).is_one() {
        1
    } else {
        -1
    }
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{frac, rat};

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn squarefree_kernel_examples() {
        assert_eq!(squarefree_kernel(&rat(1)).unwrap(), BigInt::from(1));
        assert_eq!(squarefree_kernel(&rat(-8)).unwrap(), BigInt::from(2));
        assert_eq!(squarefree_kernel(&rat(-23)).unwrap(), BigInt::from(23));
        assert_eq!(squarefree_kernel(&frac(3, 4)).unwrap(), BigInt::from(3));
        assert_eq!(squarefree_kernel(&frac(1, 6)).unwrap(), BigInt::from(6));
        assert!(squarefree_kernel(&rat(0)).is_err());
    }

    #[test]
    fn factorization_oracle() {
        // -23 has the single factor 23
        assert_eq!(factorize(&BigInt::from(-23)).unwrap(), vec![(23, 1)]);
        assert_eq!(factorize(&BigInt::from(92)).unwrap(), vec![(2, 2), (23, 1)]);
    }

    #[test]
    fn legendre_matches_euler() {
        // squares mod 7 are 1, 2, 4
        let qr: Vec<i32> = (1..7).map(|a| legendre(&BigInt::from(a), 7)).collect();
        assert_eq!(qr, vec![1, 1, -1, 1, -1, -1]);
        assert_eq!(legendre(&BigInt::from(-1), 23), -1);
    }

    #[test]
    fn sqrt_of_rational_squares() {
        assert_eq!(rational_sqrt(&frac(9, 4)), Some(frac(3, 2)));
        assert_eq!(rational_sqrt(&rat(2)), None);
        assert_eq!(rational_sqrt(&rat(-4)), None);
    }
}
