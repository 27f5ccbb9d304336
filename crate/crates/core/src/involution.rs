//! Orthogonal involutions `x‡ = μ·x̄·μ⁻¹` and the quinary form `q_H`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::lattice::IntegerLattice;
use crate::linalg::{self, Matrix};
use crate::quaternion::{Quaternion, QuaternionAlgebra};
use crate::scalars::{Field, Rational};

#[derive(Debug)]
struct InvolutionData {
    algebra: QuaternionAlgebra,
    mu: Quaternion<Rational>,
    /// `coords(x‡) = coords(x)·matrix` (row-vector convention).
    matrix: Matrix<Rational>,
    plus: [Quaternion<Rational>; 3],
    minus: Quaternion<Rational>,
    /// Inverse of the matrix with rows `plus ∪ {minus}`.
    split_inv: Matrix<Rational>,
}

/// An orthogonal involution of a quaternion algebra. Cheap to clone.
///
/// Two values are equal when they define the same map; `μ` is only
/// determined up to a rational scalar.
#[derive(Debug, Clone)]
pub struct Involution(Arc<InvolutionData>);

impl PartialEq for Involution {
    fn eq(&self, other: &Self) -> bool {
        self.0.algebra == other.0.algebra && self.0.matrix == other.0.matrix
    }
}

impl Eq for Involution {}

impl Involution {
    /// The involution `x ↦ μ·x̄·μ⁻¹` for a pure invertible `μ`.
    pub fn new(mu: Quaternion<Rational>) -> Result<Self> {
        if !mu.is_pure() {
            return Err(Error::NotPure(mu.to_string()));
        }
        let mu_inv = mu
            .inverse()
            .ok_or_else(|| Error::NotInvertible(mu.to_string()))?;
        let algebra = mu.algebra().clone();
        let matrix: Matrix<Rational> = (0..4)
            .map(|k| {
                let e = algebra.basis_element(k);
                (&(&mu * &e.conj()) * &mu_inv).coords().to_vec()
            })
            .collect();

        // H⁰ ∩ H⁺: x·(M − I) = 0 and x₀ = 0.
        let mut constraints = matrix.clone();
        for (r, row) in constraints.iter_mut().enumerate() {
            row[r] -= Rational::one();
            row.push(if r == 0 { Rational::one() } else { Rational::zero() });
        }
        let pure_plus = IntegerLattice::standard(4).intersect_subspace(&constraints)?;
        let pure_plus = pure_plus.basis();
        if pure_plus.len() != 2 {
            return Err(Error::Inconsistent(format!(
                "pure part of H+ has dimension {}",
                pure_plus.len()
            )));
        }
        let plus = [
            Quaternion::one(algebra.clone()),
            Quaternion::from_vec(algebra.clone(), &pure_plus[0])?,
            Quaternion::from_vec(algebra.clone(), &pure_plus[1])?,
        ];
        let minus_lattice = IntegerLattice::from_generators(&[mu.coords().to_vec()], 4)?;
        let minus_scaled = minus_lattice.integer_rows()[0]
            .iter()
            .map(|x| Rational::from_integer(x.clone()))
            .collect::<Vec<_>>();
        let minus = Quaternion::from_vec(algebra.clone(), &minus_scaled)?;
        let split: Matrix<Rational> = plus
            .iter()
            .chain(std::iter::once(&minus))
            .map(|q| q.coords().to_vec())
            .collect();
        let split_inv = linalg::inverse(&split)
            .ok_or_else(|| Error::Inconsistent("H+ and H- do not span H".into()))?;
        Ok(Involution(Arc::new(InvolutionData {
            algebra,
            mu,
            matrix,
            plus,
            minus,
            split_inv,
        })))
    }

    /// Recovers `μ` from a 4×4 matrix `M` acting on coordinate columns
    /// (`coords(x‡) = M·coords(x)`): `μ` spans the `−1` eigenspace. The
    /// result is checked against `M`.
    pub fn from_linear_map(algebra: &QuaternionAlgebra, map: &[Vec<Rational>]) -> Result<Self> {
        if map.len() != 4 || map.iter().any(|r| r.len() != 4) {
            return Err(Error::DimensionMismatch("involution map must be 4x4".into()));
        }
        let mut plus_id = map.to_vec();
        for (r, row) in plus_id.iter_mut().enumerate() {
            row[r] += Rational::one();
        }
        let kernel = linalg::kernel(&plus_id, 4);
        if kernel.len() != 1 {
            return Err(Error::NotAnInvolution(format!(
                "-1 eigenspace has dimension {}",
                kernel.len()
            )));
        }
        let mu = Quaternion::from_vec(algebra.clone(), &kernel[0])?;
        let inv = Involution::new(mu).map_err(|e| Error::NotAnInvolution(e.to_string()))?;
        if linalg::transpose(&inv.0.matrix) != map {
            return Err(Error::NotAnInvolution(
                "map is not of the form x -> mu conj(x) mu^-1".into(),
            ));
        }
        Ok(inv)
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.0.algebra
    }

    pub fn mu(&self) -> &Quaternion<Rational> {
        &self.0.mu
    }

    /// Matrix of `‡` on row coordinate vectors.
    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.0.matrix
    }

    /// `(1, e₂, e₃)`, with `e₂, e₃` the Hermite-reduced integral basis of
    /// the pure part of `H⁺`.
    pub fn plus_basis(&self) -> &[Quaternion<Rational>; 3] {
        &self.0.plus
    }

    /// Primitive integral generator of `H⁻ = Q·μ`.
    pub fn minus_basis(&self) -> &Quaternion<Rational> {
        &self.0.minus
    }

    /// `x‡`.
    pub fn apply<F: Field>(&self, x: &Quaternion<F>) -> Result<Quaternion<F>> {
        if x.algebra() != self.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked<F: Field>(&self, x: &Quaternion<F>) -> Quaternion<F> {
        let c = x.coords();
        let out = [0, 1, 2, 3].map(|col| {
            (0..4).fold(F::zero(), |acc, k| {
                let m = &self.0.matrix[k][col];
                if m.is_zero() || c[k].is_zero() {
                    acc
                } else {
                    acc + c[k].clone() * F::from_rational(m.clone())
                }
            })
        });
        Quaternion::new(x.algebra().clone(), out)
    }

    /// Coordinates of `x` in `plus_basis ∪ {minus_basis}`.
    pub fn split_coordinates<F: Field>(&self, x: &Quaternion<F>) -> [F; 4] {
        let c = x.coords();
        [0, 1, 2, 3].map(|col| {
            (0..4).fold(F::zero(), |acc, k| {
                acc + c[k].clone() * F::from_rational(self.0.split_inv[k][col].clone())
            })
        })
    }

    /// Coordinates over `plus_basis` when `x ∈ H⁺`.
    pub fn plus_coordinates<F: Field>(&self, x: &Quaternion<F>) -> Option<[F; 3]> {
        let [s0, s1, s2, s3] = self.split_coordinates(x);
        s3.is_zero().then_some([s0, s1, s2])
    }

    pub fn is_plus<F: Field>(&self, x: &Quaternion<F>) -> bool {
        x.algebra() == self.algebra() && self.apply_unchecked(x) == *x
    }

    pub fn is_minus<F: Field>(&self, x: &Quaternion<F>) -> bool {
        x.algebra() == self.algebra() && self.apply_unchecked(x) == -x
    }

    /// The element of `H⁺` with the given plus coordinates.
    pub fn from_plus_coordinates<F: Field>(&self, z: &[F; 3]) -> Quaternion<F> {
        let mut out = Quaternion::zero(self.algebra().clone());
        for (k, zk) in z.iter().enumerate() {
            out = &out + &self.0.plus[k].lift::<F>().scale(zk);
        }
        out
    }

    /// A representative of `disc(‡)`: `μ² = −nrm(μ)`.
    pub fn disc_representative(&self) -> Rational {
        -self.0.mu.norm()
    }

    /// `ι(disc ‡)`: the squarefree kernel of `μ²`.
    pub fn iota(&self) -> BigInt {
        arith::squarefree_kernel(&self.disc_representative()).expect("mu is invertible")
    }

    /// Gram matrix of `q_H(s, t, z) = st − nrm(z)` on coordinates
    /// `(s, t, z₁, z₂, z₃)` with `z` over `plus_basis`.
    pub fn gram_q_h(&self) -> Matrix<Rational> {
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let mut g = linalg::zeros::<Rational>(5, 5);
        g[0][1] = half.clone();
        g[1][0] = half.clone();
        for k in 0..3 {
            for l in 0..3 {
                let p = &self.0.plus[k];
                let q = &self.0.plus[l];
                // ⟨p, q⟩ = tr(p·q̄)/2
                let pair = (p * &q.conj()).trace() * &half;
                g[2 + k][2 + l] = -pair;
            }
        }
        g
    }

    /// `(positive, negative, zero)` counts of `q_H` over R.
    pub fn signature(&self) -> (usize, usize, usize) {
        linalg::inertia(&self.gram_q_h())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn alg(a: i64, b: i64) -> QuaternionAlgebra {
        QuaternionAlgebra::new(rat(a), rat(b)).unwrap()
    }

    fn q(h: &QuaternionAlgebra, c: [i64; 4]) -> Quaternion<Rational> {
        Quaternion::new(h.clone(), c.map(rat))
    }

    #[test]
    fn mu_ij_negates_ij() {
        let h = alg(-1, -23);
        let inv = Involution::new(h.basis_element(3)).unwrap();
        // (w + xi + yj + zij)‡ = w + xi + yj − zij
        let x = q(&h, [1, 2, 3, 4]);
        assert_eq!(inv.apply(&x).unwrap(), q(&h, [1, 2, 3, -4]));
        let plus: Vec<_> = inv.plus_basis().iter().map(|p| p.coords().clone()).collect();
        assert_eq!(plus, vec![[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]].into_iter().map(|c| c.map(rat)).collect::<Vec<_>>());
        assert_eq!(*inv.minus_basis(), h.basis_element(3));
    }

    #[test]
    fn matches_defining_formula() {
        let h = alg(-1, -23);
        let mu = q(&h, [0, 1, 2, -1]);
        let inv = Involution::new(mu.clone()).unwrap();
        let mu_inv = mu.inverse().unwrap();
        for k in 0..4 {
            let e = h.basis_element(k);
            let expect = &(&mu * &e.conj()) * &mu_inv;
            assert_eq!(inv.apply(&e).unwrap(), expect);
        }
    }

    #[test]
    fn recovers_mu_from_map() {
        let h = alg(-1, -23);
        // w + xi − yj + zij
        let map: Vec<Vec<Rational>> = (0..4)
            .map(|r| (0..4).map(|c| rat(if r != c { 0 } else if r == 2 { -1 } else { 1 })).collect())
            .collect();
        let inv = Involution::from_linear_map(&h, &map).unwrap();
        assert_eq!(*inv.minus_basis(), h.basis_element(2));
        assert_eq!(inv.iota(), BigInt::from(23));
        assert_eq!(inv.disc_representative(), rat(-23));
    }

    #[test]
    fn rejects_bad_mu() {
        let h = alg(-1, -23);
        assert!(matches!(Involution::new(q(&h, [1, 1, 0, 0])), Err(Error::NotPure(_))));
        let split = alg(1, 1);
        let null = q(&split, [0, 1, 0, 1]);
        assert_eq!(null.norm(), rat(0));
        assert!(matches!(Involution::new(null), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn standard_involution_map_is_rejected() {
        let h = alg(-1, -23);
        let map: Vec<Vec<Rational>> = (0..4)
            .map(|r| (0..4).map(|c| rat(if r != c { 0 } else if r == 0 { 1 } else { -1 })).collect())
            .collect();
        assert!(matches!(
            Involution::from_linear_map(&h, &map),
            Err(Error::NotAnInvolution(_))
        ));
    }

    #[test]
    fn q_h_gram() {
        let h = alg(-1, -23);
        let inv = Involution::new(h.basis_element(3)).unwrap();
        let g = inv.gram_q_h();
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(g[0][1], half);
        assert_eq!(g[0][0], rat(0));
        // −nrm on span(1, i, j): −(w² + x² + 23y²)
        assert_eq!(g[2][2], rat(-1));
        assert_eq!(g[3][3], rat(-1));
        assert_eq!(g[4][4], rat(-23));
        assert_eq!(inv.signature(), (1, 4, 0));
        assert!(!linalg::det(&g).is_zero());
    }
}
