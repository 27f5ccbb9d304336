use rand::Rng;
use rand_chacha::ChaCha8Rng;

use qvahlen::involution::Involution;
use qvahlen::quaternion::Quaternion;
use qvahlen::scalars::{frac, Rational};
use qvahlen::vahlen::Generator;

/// An element of `H⁺` with small coefficients over the plus basis; the
/// denominator is 1 or 2.
pub fn plus_element(inv: &Involution, rng: &mut ChaCha8Rng) -> Quaternion<Rational> {
    let den = rng.gen_range(1..=2);
    let c = [0, 1, 2].map(|_| frac(rng.gen_range(-3..=3), den));
    inv.from_plus_coordinates(&c)
}

pub fn word(inv: &Involution, rng: &mut ChaCha8Rng, len: usize) -> Vec<Generator> {
    (0..len)
        .map(|_| {
            let z = plus_element(inv, rng);
            if rng.gen_bool(0.5) {
                Generator::Upper(z)
            } else {
                Generator::Lower(z)
            }
        })
        .collect()
}

/// A quaternion with integer coordinates in `[-height, height]` and
/// nonzero norm.
pub fn invertible(h: &qvahlen::QuaternionAlgebra, rng: &mut ChaCha8Rng, height: i64) -> Quaternion<Rational> {
    loop {
        let c = [0, 1, 2, 3].map(|_| frac(rng.gen_range(-height..=height), 1));
        let q = Quaternion::new(h.clone(), c);
        if !num_traits::Zero::is_zero(&q.norm()) {
            return q;
        }
    }
}
