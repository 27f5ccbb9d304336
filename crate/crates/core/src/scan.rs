//! Exhaustive search for ‡-stable superorders, an independent check on
//! the discriminant criterion in [`crate::order::is_maximal_sharp_order`].
//!
//! Any order `L ⊋ O` with `pL ⊆ O` has the form `O + (1/p)·Ṽ` where `V` is a
//! two-sided ideal of `O/pO` (the ideal property is exactly `O·L·O ⊆ L`).
//! Such ideals are sums of principal ones, so enumerating principal ideals
//! and closing under sums finds every candidate. Each candidate is then
//! verified exactly.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith;
use crate::error::{Error, Result};
use crate::involution::Involution;
use crate::order::{is_sharp_stable, OrderLattice};
use crate::scalars::Rational;

/// Largest prime the scan accepts unless told otherwise.
pub const DEFAULT_SCAN_PRIME_BOUND: u64 = 100;

/// Maximal elements among all ‡-stable orders reachable from `order` by
/// chains of prime-index-power steps. Empty when `order` has no
/// ‡-stable superorder.
pub fn sharp_superorder_scan(
    order: &OrderLattice,
    inv: &Involution,
    prime_bound: u64,
) -> Result<Vec<OrderLattice>> {
    if !is_sharp_stable(order, inv)? {
        return Err(Error::NotSharpStable);
    }
    let mut seen: BTreeSet<Key> = BTreeSet::new();
    let mut stack = vec![order.clone()];
    let mut maximal = Vec::new();
    seen.insert(key(order));
    while let Some(o) = stack.pop() {
        let ups = immediate_superorders(&o, inv, prime_bound)?;
        if ups.is_empty() {
            if o != *order {
                maximal.push(o);
            }
            continue;
        }
        for up in ups {
            if seen.insert(key(&up)) {
                stack.push(up);
            }
        }
    }
    maximal.sort_by(|a, b| a.lattice().cmp(b.lattice()));
    Ok(maximal)
}

type Key = crate::lattice::IntegerLattice;

fn key(o: &OrderLattice) -> Key {
    o.lattice().clone()
}

/// ‡-stable orders `L` with `O ⊊ L ⊆ (1/p)·O` for primes `p | disc(O)`.
pub fn immediate_superorders(
    order: &OrderLattice,
    inv: &Involution,
    prime_bound: u64,
) -> Result<Vec<OrderLattice>> {
    let mut out = Vec::new();
    for p in arith::prime_divisors(order.reduced_discriminant())? {
        if p > prime_bound {
            return Err(Error::ScanPrimeTooLarge {
                p,
                bound: prime_bound,
            });
        }
        for v in two_sided_ideals(order, p) {
            if v.is_empty() || v.len() == 4 {
                continue;
            }
            if let Some(l) = candidate(order, inv, p, &v)? {
                out.push(l);
            }
        }
    }
    out.sort_by(|a, b| a.lattice().cmp(b.lattice()));
    out.dedup();
    Ok(out)
}

fn candidate(order: &OrderLattice, inv: &Involution, p: u64, v: &[Vec<u64>]) -> Result<Option<OrderLattice>> {
    let basis = order.basis();
    let mut gens: Vec<Vec<Rational>> = basis.iter().map(|q| q.coords().to_vec()).collect();
    let inv_p = Rational::new(BigInt::from(1), BigInt::from(p));
    for row in v {
        let mut g = vec![Rational::from_integer(BigInt::from(0)); 4];
        for (k, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (gi, bi) in g.iter_mut().zip(basis[k].coords()) {
                *gi += bi * Rational::from_integer(BigInt::from(c)) * &inv_p;
            }
        }
        gens.push(g);
    }
    let l = match OrderLattice::new(order.algebra(), &gens) {
        Ok(l) => l,
        Err(Error::NotAnOrder(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(is_sharp_stable(&l, inv)?.then_some(l))
}

/// Structure constants of `O` reduced mod `p`: `eᵢ·eⱼ = Σ c[i][j][k]·e_k`.
fn structure_mod(order: &OrderLattice, p: u64) -> [[[u64; 4]; 4]; 4] {
    let basis = order.basis();
    let mut c = [[[0u64; 4]; 4]; 4];
    let pb = BigInt::from(p);
    for i in 0..4 {
        for j in 0..4 {
            let prod = &basis[i] * &basis[j];
            let coords = order
                .lattice()
                .coordinates(prod.coords())
                .expect("order is closed under products");
            for k in 0..4 {
                let r = ((&coords[k] % &pb) + &pb) % &pb;
                c[i][j][k] = r.to_u64().expect("reduced mod p");
            }
        }
    }
    c
}

fn mul_mod(c: &[[[u64; 4]; 4]; 4], x: &[u64; 4], y: &[u64; 4], p: u64) -> [u64; 4] {
    let mut out = [0u64; 4];
    for i in 0..4 {
        if x[i] == 0 {
            continue;
        }
        for j in 0..4 {
            if y[j] == 0 {
                continue;
            }
            let s = x[i] * y[j] % p;
            for k in 0..4 {
                out[k] = (out[k] + s * c[i][j][k]) % p;
            }
        }
    }
    out
}

/// All two-sided ideals of `O/pO`, each as a reduced echelon basis over
/// `F_p`.
pub(crate) fn two_sided_ideals(order: &OrderLattice, p: u64) -> BTreeSet<Vec<Vec<u64>>> {
    let c = structure_mod(order, p);
    let units: Vec<[u64; 4]> = (0..4)
        .map(|k| {
            let mut e = [0u64; 4];
            e[k] = 1;
            e
        })
        .collect();
    let mut principal: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
    for v in projective_points(p) {
        let mut gens = Vec::with_capacity(16);
        for l in &units {
            let lv = mul_mod(&c, l, &v, p);
            for r in &units {
                gens.push(mul_mod(&c, &lv, r, p).to_vec());
            }
        }
        principal.insert(rref_mod(gens, p));
    }
    let mut all = principal.clone();
    loop {
        let mut added = Vec::new();
        for a in &all {
            for b in &principal {
                let mut rows = a.clone();
                rows.extend(b.iter().cloned());
                let s = rref_mod(rows, p);
                if !all.contains(&s) {
                    added.push(s);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        all.extend(added);
    }
    all
}

/// One representative per line of `F_p⁴`, normalized with leading 1.
fn projective_points(p: u64) -> Vec<[u64; 4]> {
    let mut out = Vec::new();
    for lead in 0..4 {
        let free = 3 - lead;
        let count = p.pow(free as u32);
        for mut n in 0..count {
            let mut v = [0u64; 4];
            v[lead] = 1;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = n % p;
                n /= p;
            }
            out.push(v);
        }
    }
    out
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime and a ≠ 0 mod p
    let mut r = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    r
}

/// Reduced row echelon form over `F_p`, zero rows dropped.
fn rref_mod(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::QuaternionAlgebra;
    use crate::scalars::rat;

    #[test]
    fn rref_over_fp() {
        let r = rref_mod(vec![vec![2, 4, 1], vec![1, 2, 0]], 5);
        assert_eq!(rref_mod(vec![vec![2, 4, 1], vec![1, 2, 3]], 5), vec![vec![1, 2, 3]]);
        assert_eq!(r, vec![vec![1, 2, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn projective_point_count() {
        assert_eq!(projective_points(3).len(), 40);
    }

    #[test]
    fn standard_order_grows() {
        let h = QuaternionAlgebra::new(rat(-1), rat(-23)).unwrap();
        let inv = Involution::new(h.basis_element(3)).unwrap();
        let o = OrderLattice::standard(&h).unwrap();
        let found = sharp_superorder_scan(&o, &inv, DEFAULT_SCAN_PRIME_BOUND).unwrap();
        assert!(!found.is_empty());
        for l in &found {
            assert_eq!(*l.reduced_discriminant(), BigInt::from(23));
        }
    }

    #[test]
    fn prime_guard() {
        let h = QuaternionAlgebra::new(rat(-1), rat(-23)).unwrap();
        let inv = Involution::new(h.basis_element(3)).unwrap();
        let o = OrderLattice::standard(&h).unwrap();
        assert_eq!(
            sharp_superorder_scan(&o, &inv, 10),
            Err(Error::ScanPrimeTooLarge { p: 23, bound: 10 })
        );
    }
}
