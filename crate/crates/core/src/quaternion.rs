//! Quaternion algebras `(a, b / Q)` and their elements.
//!
//! Elements are coordinate vectors over the basis `(1, i, j, ij)` with
//! `i² = a`, `j² = b`, `ij = −ji`. The coordinate field is generic so the
//! same code serves `H` and `H ⊗ Q(√d)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hilbert::{self, Place};
use crate::scalars::{Field, QuadExt, Rational};

#[derive(Debug, PartialEq, Eq, Hash)]
struct AlgebraParams {
    a: Rational,
    b: Rational,
}

/// The quaternion algebra `(a, b / Q)`. Cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuaternionAlgebra(Arc<AlgebraParams>);

impl QuaternionAlgebra {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroArgument);
        }
        Ok(QuaternionAlgebra(Arc::new(AlgebraParams { a, b })))
    }

    pub fn a(&self) -> &Rational {
        &self.0.a
    }

    pub fn b(&self) -> &Rational {
        &self.0.b
    }

    /// Places where the algebra ramifies, finite primes ascending, then the
    /// real place.
    pub fn ramified_places(&self) -> Result<Vec<Place>> {
        let mut out = Vec::new();
        for v in hilbert::candidate_places(self.a(), self.b())? {
            if hilbert::hilbert_symbol(self.a(), self.b(), v)? == -1 {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// Product of the finitely ramified primes.
    pub fn discriminant(&self) -> Result<BigInt> {
        Ok(self
            .ramified_places()?
            .iter()
            .filter_map(Place::prime)
            .fold(BigInt::one(), |acc, p| acc * p))
    }

    /// Ramified at the real place, i.e. the norm form is positive definite.
    pub fn is_definite(&self) -> bool {
        self.a().is_negative() && self.b().is_negative()
    }

    pub fn is_division(&self) -> Result<bool> {
        Ok(!self.ramified_places()?.is_empty())
    }

    /// Gram matrix of `⟨x, y⟩ = tr(x·ȳ)/2` on the basis `(1, i, j, ij)`.
    pub fn norm_gram(&self) -> Vec<Vec<Rational>> {
        let d = [
            Rational::one(),
            -self.a().clone(),
            -self.b().clone(),
            self.a() * self.b(),
        ];
        (0..4)
            .map(|r| {
                (0..4)
                    .map(|c| if r == c { d[r].clone() } else { Rational::zero() })
                    .collect()
            })
            .collect()
    }

    pub fn basis_element(&self, k: usize) -> Quaternion<Rational> {
        let mut c = [
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
        ];
        c[k] = Rational::one();
        Quaternion::new(self.clone(), c)
    }
}

/// Isomorphism test over Q: equal sets of ramified places.
pub fn algebras_isomorphic(h1: &QuaternionAlgebra, h2: &QuaternionAlgebra) -> Result<bool> {
    Ok(h1.ramified_places()? == h2.ramified_places()?)
}

/// `w + x·i + y·j + z·ij` over a coefficient field `F ⊇ Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quaternion<F> {
    algebra: QuaternionAlgebra,
    c: [F; 4],
}

impl<F: Field> Quaternion<F> {
    pub fn new(algebra: QuaternionAlgebra, c: [F; 4]) -> Self {
        Quaternion { algebra, c }
    }

    pub fn from_vec(algebra: QuaternionAlgebra, v: &[F]) -> Result<Self> {
        let c: [F; 4] = v
            .to_vec()
            .try_into()
            .map_err(|_| Error::DimensionMismatch(format!("{} coordinates, expected 4", v.len())))?;
        Ok(Self::new(algebra, c))
    }

    pub fn scalar(algebra: QuaternionAlgebra, s: F) -> Self {
        Self::new(algebra, [s, F::zero(), F::zero(), F::zero()])
    }

    pub fn zero(algebra: QuaternionAlgebra) -> Self {
        Self::scalar(algebra, F::zero())
    }

    pub fn one(algebra: QuaternionAlgebra) -> Self {
        Self::scalar(algebra, F::one())
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> &[F; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_scalar(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    /// `tr(q) = 2w`.
    pub fn trace(&self) -> F {
        self.c[0].clone() + self.c[0].clone()
    }

    /// `nrm(q) = w² − a·x² − b·y² + ab·z²`.
    pub fn norm(&self) -> F {
        let a = F::from_rational(self.algebra.a().clone());
        let b = F::from_rational(self.algebra.b().clone());
        let [w, x, y, z] = &self.c;
        w.clone() * w.clone() - a.clone() * x.clone() * x.clone() - b.clone() * y.clone() * y.clone()
            + a * b * z.clone() * z.clone()
    }

    pub fn is_pure(&self) -> bool {
        self.c[0].is_zero()
    }

    /// Standard involution `q̄ = tr(q) − q`.
    pub fn conj(&self) -> Self {
        let [w, x, y, z] = &self.c;
        Self::new(
            self.algebra.clone(),
            [w.clone(), -x.clone(), -y.clone(), -z.clone()],
        )
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm().inv()?;
        Some(self.conj().scale(&n))
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.algebra.clone(), self.c.clone().map(|x| x * s.clone()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self.zip(other, |x, y| x + y))
    }

    fn zip(&self, other: &Self, f: impl Fn(F, F) -> F) -> Self {
        let c = [0, 1, 2, 3].map(|k| f(self.c[k].clone(), other.c[k].clone()));
        Self::new(self.algebra.clone(), c)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let a = F::from_rational(self.algebra.a().clone());
        let b = F::from_rational(self.algebra.b().clone());
        let ab = a.clone() * b.clone();
        let [w1, x1, y1, z1] = self.c.clone();
        let [w2, x2, y2, z2] = other.c.clone();
        let w = w1.clone() * w2.clone() + a.clone() * x1.clone() * x2.clone()
            + b.clone() * y1.clone() * y2.clone()
            - ab * z1.clone() * z2.clone();
        let x = w1.clone() * x2.clone() + x1.clone() * w2.clone()
            - b.clone() * y1.clone() * z2.clone()
            + b * z1.clone() * y2.clone();
        let y = w1.clone() * y2.clone() + y1.clone() * w2.clone() + a.clone() * x1.clone() * z2.clone()
            - a * z1.clone() * x2.clone();
        let z = w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2;
        Self::new(self.algebra.clone(), [w, x, y, z])
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> Quaternion<G> {
        Quaternion::new(self.algebra.clone(), [0, 1, 2, 3].map(|k| f(&self.c[k])))
    }

    /// The same element with rational coordinates, if it has them.
    pub fn to_rational(&self) -> Option<Quaternion<Rational>> {
        let mut c = Vec::with_capacity(4);
        for x in &self.c {
            c.push(x.to_rational()?);
        }
        Quaternion::from_vec(self.algebra.clone(), &c).ok()
    }
}

impl Quaternion<Rational> {
    /// Lift into `H ⊗ Q(√d)` coordinates.
    pub fn to_ext(&self) -> Quaternion<QuadExt> {
        self.map_field(|x| QuadExt::from_rational(x.clone()))
    }

    pub fn lift<F: Field>(&self) -> Quaternion<F> {
        self.map_field(|x| F::from_rational(x.clone()))
    }
}

/// `p·q`; errors when the factors live in different algebras.
pub fn quat_mul<F: Field>(p: &Quaternion<F>, q: &Quaternion<F>) -> Result<Quaternion<F>> {
    p.checked_mul(q)
}

fn same_algebra<F>(p: &Quaternion<F>, q: &Quaternion<F>) {
    assert!(
        p.algebra == q.algebra,
        "quaternion arithmetic across different algebras"
    );
}

impl<F: Field> Mul for &Quaternion<F> {
    type Output = Quaternion<F>;
    fn mul(self, rhs: Self) -> Quaternion<F> {
        same_algebra(self, rhs);
        self.mul_unchecked(rhs)
    }
}

impl<F: Field> Mul for Quaternion<F> {
    type Output = Quaternion<F>;
    fn mul(self, rhs: Self) -> Quaternion<F> {
        &self * &rhs
    }
}

impl<F: Field> Add for &Quaternion<F> {
    type Output = Quaternion<F>;
    fn add(self, rhs: Self) -> Quaternion<F> {
        same_algebra(self, rhs);
        self.zip(rhs, |x, y| x + y)
    }
}

impl<F: Field> Add for Quaternion<F> {
    type Output = Quaternion<F>;
    fn add(self, rhs: Self) -> Quaternion<F> {
        &self + &rhs
    }
}

impl<F: Field> Sub for &Quaternion<F> {
    type Output = Quaternion<F>;
    fn sub(self, rhs: Self) -> Quaternion<F> {
        same_algebra(self, rhs);
        self.zip(rhs, |x, y| x - y)
    }
}

impl<F: Field> Sub for Quaternion<F> {
    type Output = Quaternion<F>;
    fn sub(self, rhs: Self) -> Quaternion<F> {
        &self - &rhs
    }
}

impl<F: Field> Neg for &Quaternion<F> {
    type Output = Quaternion<F>;
    fn neg(self) -> Quaternion<F> {
        Quaternion::new(self.algebra.clone(), self.c.clone().map(|x| -x))
    }
}

impl<F: Field> Neg for Quaternion<F> {
    type Output = Quaternion<F>;
    fn neg(self) -> Quaternion<F> {
        -&self
    }
}

impl<F: Field> fmt::Display for Quaternion<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "i", "j", "ij"];
        let mut first = true;
        for (x, name) in self.c.iter().zip(names) {
            if x.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (name, x.is_one()) {
                ("", _) => write!(f, "{x}")?,
                (n, true) => f.write_str(n)?,
                (n, false) => write!(f, "({x})*{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
