mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use qvahlen::arith::squarefree_kernel;
use qvahlen::involution::Involution;
use qvahlen::lattice::{lattice_canonicalize, lattice_index, IntegerLattice};
use qvahlen::quaternion::{Quaternion, QuaternionAlgebra};
use qvahlen::scalars::{frac, rat, Rational};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=4).prop_map(|(n, d)| frac(n, d))
}

fn quat(h: QuaternionAlgebra) -> impl Strategy<Value = Quaternion<Rational>> {
    proptest::array::uniform4(small_rational()).prop_map(move |c| Quaternion::new(h.clone(), c))
}

fn algebra() -> impl Strategy<Value = QuaternionAlgebra> {
    (prop::sample::select(vec![-1i64, -2, -3, 1, 2, 5]), prop::sample::select(vec![-1i64, -7, -23, 3, 1, 6]))
        .prop_map(|(a, b)| alg(a, b))
}

/// Algebra, a pure invertible `μ`, and two more elements.
fn setting() -> impl Strategy<Value = (QuaternionAlgebra, Quaternion<Rational>, Quaternion<Rational>, Quaternion<Rational>)> {
    algebra().prop_flat_map(|h| {
        let pure = proptest::array::uniform3(-3i64..=3).prop_filter_map("invertible", {
            let h = h.clone();
            move |[x, y, z]| {
                let mu = Quaternion::new(h.clone(), [rat(0), rat(x), rat(y), rat(z)]);
                (!mu.norm().is_zero()).then_some(mu)
            }
        });
        (Just(h.clone()), pure, quat(h.clone()), quat(h))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn norm_is_multiplicative((h, _, x, y) in setting()) {
        let _ = h;
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        prop_assert_eq!((&x * &y).conj(), &y.conj() * &x.conj());
    }

    #[test]
    fn involution_is_an_anti_automorphism_of_order_two((_, mu, x, y) in setting()) {
        let inv = Involution::new(mu).unwrap();
        let s = |q: &Quaternion<Rational>| inv.apply(q).unwrap();
        prop_assert_eq!(s(&(&x * &y)), &s(&y) * &s(&x));
        prop_assert_eq!(s(&s(&x)), x.clone());
        prop_assert_eq!(s(&(&x + &y)), &s(&x) + &s(&y));
        prop_assert_ne!(inv.matrix().clone(), qvahlen::linalg::identity::<Rational>(4));
    }

    #[test]
    fn plus_and_minus_parts_split_the_algebra((_, mu, x, _y) in setting()) {
        let inv = Involution::new(mu).unwrap();
        let s = inv.apply(&x).unwrap();
        let half = frac(1, 2);
        let plus = (&x + &s).scale(&half);
        let minus = (&x - &s).scale(&half);
        prop_assert!(inv.is_plus(&plus));
        prop_assert!(inv.is_minus(&minus));
        prop_assert_eq!(&plus + &minus, x.clone());
        let c = inv.split_coordinates(&x);
        let rebuilt = &inv.from_plus_coordinates(&[c[0].clone(), c[1].clone(), c[2].clone()])
            + &inv.minus_basis().scale(&c[3]);
        prop_assert_eq!(rebuilt, x);
        for p in inv.plus_basis() {
            prop_assert!(inv.is_plus(p));
        }
        prop_assert!(inv.is_minus(inv.minus_basis()));
    }

    #[test]
    fn discriminant_class_is_invariant_under_scaling_and_conjugation((_, mu, x, _y) in setting(), s in 1i64..6, t in 1i64..6) {
        let inv = Involution::new(mu.clone()).unwrap();
        let scaled = Involution::new(mu.scale(&frac(s, t))).unwrap();
        prop_assert_eq!(&scaled, &inv);
        prop_assert_eq!(scaled.iota(), inv.iota());
        if let Some(xi) = x.inverse() {
            let conj = Involution::new(&(&x * &mu) * &xi).unwrap();
            prop_assert_eq!(conj.iota(), inv.iota());
        }
        prop_assert_eq!(inv.iota(), squarefree_kernel(&(&mu * &mu).coords()[0]).unwrap());
    }

    #[test]
    fn squarefree_kernel_ignores_squares(n in 1i64..500, m in 1i64..30, k in 1i64..30) {
        let x = frac(n, 1);
        let y = frac(n * m * m, k * k);
        prop_assert_eq!(squarefree_kernel(&x).unwrap(), squarefree_kernel(&y).unwrap());
        prop_assert_eq!(squarefree_kernel(&(-x)).unwrap(), squarefree_kernel(&y).unwrap());
    }
}

fn rows() -> impl Strategy<Value = Vec<Vec<Rational>>> {
    proptest::collection::vec(proptest::collection::vec(small_rational(), 3), 3..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_form_is_idempotent_and_order_free(mut gens in rows()) {
        let Ok(l) = IntegerLattice::from_generators(&gens, 3) else { return Ok(()) };
        let again = IntegerLattice::from_generators(&l.basis(), 3).unwrap();
        prop_assert_eq!(&again, &l);
        gens.reverse();
        let swapped = IntegerLattice::from_generators(&gens, 3).unwrap();
        prop_assert_eq!(&swapped, &l);
        for g in &gens {
            prop_assert!(l.contains(g));
        }
    }

    #[test]
    fn index_of_scaled_lattice(gens in rows(), k in 2i64..5) {
        let Ok(l) = lattice_canonicalize(&gens, 3) else { return Ok(()) };
        let scaled = l.scale(&rat(k)).unwrap();
        prop_assert!(l.contains_lattice(&scaled));
        prop_assert_eq!(lattice_index(&scaled, &l).unwrap(), rat(k * k * k));
        let both = l.intersection(&scaled).unwrap();
        prop_assert_eq!(&both, &scaled);
        prop_assert_eq!(l.sum(&scaled).unwrap(), l);
    }
}

#[test]
fn rank_deficient_generators_are_rejected() {
    let gens = vec![vec![rat(1), rat(2), rat(0)], vec![rat(2), rat(4), rat(0)]];
    assert!(lattice_canonicalize(&gens, 3).is_err());
    assert_eq!(IntegerLattice::from_generators(&gens, 3).unwrap().rank(), 1);
}

#[test]
fn quadratic_space_of_the_negated_ij_involution() {
    let h = h23();
    let inv = inv_negating_ij(&h);
    let g = inv.gram_q_h();
    let half = frac(1, 2);
    assert_eq!(g[0][1], half);
    let diag: Vec<Rational> = (2..5).map(|k| g[k][k].clone()).collect();
    assert_eq!(diag, vec![rat(-1), rat(-1), rat(-23)]);
    assert_eq!(inv.signature(), (1, 4, 0));
    assert_eq!(inv.iota(), 23.into());
}
