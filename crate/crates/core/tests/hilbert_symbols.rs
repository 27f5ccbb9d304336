mod common;

use common::hilbert_oracle::HilbertOracle;
use proptest::prelude::*;
use qvahlen::arith::is_prime;
use qvahlen::hilbert::{candidate_places, hilbert_symbol, Place};
use qvahlen::scalars::{frac, rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn closed_form_matches_search_for_small_primes() {
    let mut oracle = HilbertOracle::default();
    let mut checked = 0;
    for p in (2..=50).filter(|&p| is_prime(p)) {
        for a in (-30..=30).filter(|&a| a != 0) {
            for b in (-30..=30).filter(|&b| b != 0) {
                let closed = hilbert_symbol(&rat(a), &rat(b), Place::finite(p).unwrap()).unwrap();
                assert_eq!(closed, oracle.symbol(a, b, p), "({a}, {b})_{p}");
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 15 * 60 * 60);
}

#[test]
fn real_place_matches_sign_rule() {
    let mut oracle = HilbertOracle::default();
    for (a, b) in [(-1, -1), (-1, 1), (2, -3), (-5, -7)] {
        assert_eq!(
            hilbert_symbol(&rat(a), &rat(b), Place::Infinite).unwrap(),
            oracle.symbol(a, b, 0)
        );
    }
}

#[test]
fn reciprocity_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let mut pick = || loop {
            let n: i64 = rng.gen_range(-5000..=5000);
            if n != 0 {
                break n;
            }
        };
        let (a, b) = (rat(pick()), rat(pick()));
        let product: i8 = candidate_places(&a, &b)
            .unwrap()
            .into_iter()
            .map(|v| hilbert_symbol(&a, &b, v).unwrap())
            .product();
        assert_eq!(product, 1, "a = {a}, b = {b}");
    }
}

proptest! {
    #[test]
    fn symbol_ignores_square_factors(a in -40i64..40, b in -40i64..40, s in 1i64..6, t in 1i64..6, p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        prop_assume!(a != 0 && b != 0);
        let place = Place::finite(p).unwrap();
        let base = hilbert_symbol(&rat(a), &rat(b), place).unwrap();
        let scaled = hilbert_symbol(&frac(a * s * s, t * t), &rat(b * t * t), place).unwrap();
        prop_assert_eq!(base, scaled);
    }

    #[test]
    fn symbol_is_symmetric_and_bimultiplicative(a in 1i64..60, a2 in 1i64..60, b in -60i64..60, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assume!(b != 0);
        let place = Place::finite(p).unwrap();
        let h = |x: i64, y: i64| hilbert_symbol(&rat(x), &rat(y), place).unwrap();
        prop_assert_eq!(h(a, b), h(b, a));
        prop_assert_eq!(h(a * a2, b), h(a, b) * h(a2, b));
    }

    #[test]
    fn x_and_minus_x_pair_trivially(x in -200i64..200, p in prop::sample::select(vec![2u64, 3, 5, 13])) {
        prop_assume!(x != 0);
        prop_assert_eq!(hilbert_symbol(&rat(x), &rat(-x), Place::finite(p).unwrap()).unwrap(), 1);
    }
}
