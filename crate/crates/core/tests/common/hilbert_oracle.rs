//! Hilbert symbols by searching for solutions of `a·x² + b·y² = z²`.
//!
//! After removing square factors every coefficient has `p`-adic valuation
//! 0 or 1, and at most one has valuation 1. Then a primitive solution over
//! `Z_p` exists iff
//! - odd `p`: some solution mod `p` has a nonzero gradient (Hensel), since
//!   a primitive solution cannot vanish on all unit-coefficient variables;
//! - `p = 2`: some primitive solution mod 32 exists, since every primitive
//!   solution has a gradient entry of valuation at most 2 and `2·2 + 1 = 5`.

use std::collections::HashMap;

#[derive(Default)]
pub struct HilbertOracle {
    cache: HashMap<(u64, [i64; 3]), bool>,
}

fn strip(mut n: i64, p: i64) -> (i64, u32) {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (n, v)
}

fn reduce(n: i64, p: i64) -> i64 {
    let (u, v) = strip(n, p);
    if v % 2 == 1 {
        u * p
    } else {
        u
    }
}

fn rem(x: i64, m: i64) -> i64 {
    ((x % m) + m) % m
}

impl HilbertOracle {
    /// `(a, b)_∞` when `p = 0`, else `(a, b)_p`.
    pub fn symbol(&mut self, a: i64, b: i64, p: u64) -> i8 {
        assert!(a != 0 && b != 0);
        if p == 0 {
            return if a < 0 && b < 0 { -1 } else { 1 };
        }
        let pi = p as i64;
        let (a1, b1) = (reduce(a, pi), reduce(b, pi));
        let mut c = [a1, b1, -1];
        if a1 % pi == 0 && b1 % pi == 0 {
            c = [a1 / pi, b1 / pi, -pi];
        }
        let key_c = if p == 2 {
            c.map(|x| rem(x, 32))
        } else {
            c.map(|x| square_class(rem(x, pi), pi))
        };
        let found = *self
            .cache
            .entry((p, key_c))
            .or_insert_with(|| if p == 2 { search_two(key_c) } else { search_odd(key_c, pi) });
        if found {
            1
        } else {
            -1
        }
    }
}

/// 0, 1, or the least non-residue, by listing squares.
fn square_class(x: i64, p: i64) -> i64 {
    if x == 0 {
        return 0;
    }
    let squares: Vec<i64> = (1..p).map(|t| t * t % p).collect();
    if squares.contains(&x) {
        1
    } else {
        (2..p).find(|n| !squares.contains(n)).expect("a non-residue exists")
    }
}

fn search_odd(c: [i64; 3], p: i64) -> bool {
    for x in 0..p {
        for y in 0..p {
            for z in 0..p {
                let v = [x, y, z];
                let f: i64 = (0..3).map(|k| c[k] * v[k] * v[k]).sum();
                if rem(f, p) != 0 {
                    continue;
                }
                if (0..3).any(|k| rem(c[k] * v[k], p) != 0) {
                    return true;
                }
            }
        }
    }
    false
}

fn search_two(c: [i64; 3]) -> bool {
    for x in 0..32i64 {
        for y in 0..32i64 {
            for z in 0..32i64 {
                if x % 2 == 0 && y % 2 == 0 && z % 2 == 0 {
                    continue;
                }
                if rem(c[0] * x * x + c[1] * y * y + c[2] * z * z, 32) == 0 {
                    return true;
                }
            }
        }
    }
    false
}
