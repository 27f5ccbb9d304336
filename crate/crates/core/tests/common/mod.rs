#![allow(dead_code)]

pub mod hilbert_oracle;
pub mod random;

use qvahlen::involution::Involution;
use qvahlen::order::OrderLattice;
use qvahlen::quaternion::{Quaternion, QuaternionAlgebra};
use qvahlen::scalars::{frac, rat, QuadExt, Rational};
use qvahlen::vahlen::{Mat2, VahlenMatrix};

pub fn alg(a: i64, b: i64) -> QuaternionAlgebra {
    QuaternionAlgebra::new(rat(a), rat(b)).unwrap()
}

/// Quaternion with coordinates `n[k] / den` over `(1, i, j, ij)`.
pub fn q(h: &QuaternionAlgebra, n: [i64; 4], den: i64) -> Quaternion<Rational> {
    Quaternion::new(h.clone(), n.map(|x| frac(x, den)))
}

pub fn order(h: &QuaternionAlgebra, gens: &[([i64; 4], i64)]) -> OrderLattice {
    let g: Vec<Quaternion<Rational>> = gens.iter().map(|&(n, d)| q(h, n, d)).collect();
    OrderLattice::from_quaternions(h, &g).unwrap()
}

/// `(−1, −23)`.
pub fn h23() -> QuaternionAlgebra {
    alg(-1, -23)
}

/// `w + xi + yj + zij ↦ w + xi − yj + zij`, i.e. `μ = j`.
pub fn inv_negating_j(h: &QuaternionAlgebra) -> Involution {
    Involution::new(h.basis_element(2)).unwrap()
}

/// `w + xi + yj + zij ↦ w + xi + yj − zij`, i.e. `μ = ij`.
pub fn inv_negating_ij(h: &QuaternionAlgebra) -> Involution {
    Involution::new(h.basis_element(3)).unwrap()
}

/// `Z ⊕ Zi ⊕ Z(1+j)/2 ⊕ Z(i+ij)/2`.
pub fn half_j_order(h: &QuaternionAlgebra) -> OrderLattice {
    order(h, &[([1, 0, 0, 0], 1), ([0, 1, 0, 0], 1), ([1, 0, 1, 0], 2), ([0, 1, 0, 1], 2)])
}

/// `Z ⊕ 3Zi ⊕ Z(1+j)/2 ⊕ Z(11i+ij)/6` in `(−1, −23)`.
pub fn twisted_order_23(h: &QuaternionAlgebra) -> OrderLattice {
    order(h, &[([1, 0, 0, 0], 1), ([0, 3, 0, 0], 1), ([1, 0, 1, 0], 2), ([0, 11, 0, 1], 6)])
}

/// `Z ⊕ Zi ⊕ Z(i+j)/2 ⊕ Z(1+ij)/2` in `(−1, −7)`.
pub fn swapped_order_7(h: &QuaternionAlgebra) -> OrderLattice {
    order(h, &[([1, 0, 0, 0], 1), ([0, 1, 0, 0], 1), ([0, 1, 1, 0], 2), ([1, 0, 0, 1], 2)])
}

fn ext(x: &Quaternion<Rational>, s: &QuadExt) -> Quaternion<QuadExt> {
    x.to_ext().scale(s)
}

/// The conjugator between the two orders of `(−1, −23)` over `Q(√3)`:
/// `((1−6i+j)/(2√3), (1+j)/(2√3); (1+6i+j)/(2√3), √3·i)`.
pub fn sqrt3_conjugator(inv: &Involution) -> Mat2<QuadExt> {
    let h = inv.algebra();
    let inv_2sqrt3 = QuadExt::new(3, rat(0), frac(1, 6)).unwrap();
    let sqrt3 = QuadExt::sqrt(3).unwrap();
    Mat2::new(
        ext(&q(h, [1, -6, 1, 0], 1), &inv_2sqrt3),
        ext(&q(h, [1, 0, 1, 0], 1), &inv_2sqrt3),
        ext(&q(h, [1, 6, 1, 0], 1), &inv_2sqrt3),
        ext(&q(h, [0, 1, 0, 0], 1), &sqrt3),
    )
    .unwrap()
}

/// `diag((1+i)/√2, (−1+i)/√2)`.
pub fn displayed_sqrt2_diagonal(h: &QuaternionAlgebra) -> Mat2<QuadExt> {
    let r = QuadExt::new(2, rat(0), frac(1, 2)).unwrap();
    let zero = Quaternion::zero(h.clone());
    Mat2::new(
        ext(&q(h, [1, 1, 0, 0], 1), &r),
        zero.clone(),
        zero,
        ext(&q(h, [-1, 1, 0, 0], 1), &r),
    )
    .unwrap()
}

pub fn member<F: qvahlen::scalars::Field>(inv: &Involution, m: Mat2<F>) -> VahlenMatrix<F> {
    VahlenMatrix::new(inv, m).unwrap()
}

/// `(p, q; r, s) ∈ Mat(2, Q)` as an element of `(1, 1)` under
/// `i ↦ diag(1, −1)`, `j ↦ (0, 1; 1, 0)`, `ij ↦ (0, 1; −1, 0)`.
pub fn split_matrix(h: &QuaternionAlgebra, m: [[Rational; 2]; 2]) -> Quaternion<Rational> {
    let [[p, q], [r, s]] = m;
    let half = frac(1, 2);
    Quaternion::new(
        h.clone(),
        [
            (&p + &s) * &half,
            (&p - &s) * &half,
            (&q + &r) * &half,
            (&q - &r) * &half,
        ],
    )
}

pub fn split_entries(x: &Quaternion<Rational>) -> [[Rational; 2]; 2] {
    let [w, a, b, c] = x.coords().clone();
    [[&w + &a, &b + &c], [&b - &c, &w - &a]]
}

/// `(a, b; c, d) ↦ (a, c/λ; bλ, d)` on `(1, 1) ≅ Mat(2, Q)`.
pub fn split_involution(h: &QuaternionAlgebra, lambda: i64) -> Involution {
    let l = rat(lambda);
    let mut columns = Vec::new();
    for k in 0..4 {
        let e = h.basis_element(k);
        let [[a, b], [c, d]] = split_entries(&e);
        let image = split_matrix(h, [[a, &c / &l], [&b * &l, d]]);
        columns.push(image.coords().to_vec());
    }
    // column convention: coords(x‡) = map · coords(x)
    let map: Vec<Vec<Rational>> = (0..4).map(|r| (0..4).map(|k| columns[k][r].clone()).collect()).collect();
    Involution::from_linear_map(h, &map).unwrap()
}

/// `Mat(2, Z)` inside `(1, 1)`.
pub fn split_integral_order(h: &QuaternionAlgebra) -> OrderLattice {
    let units: Vec<Quaternion<Rational>> = (0..4)
        .map(|k| {
            let mut m = [[rat(0), rat(0)], [rat(0), rat(0)]];
            m[k / 2][k % 2] = rat(1);
            split_matrix(h, m)
        })
        .collect();
    OrderLattice::from_quaternions(h, &units).unwrap()
}
