//! Finitely generated Z-submodules of Qⁿ in canonical form.
//!
//! A lattice is stored as `(m, H)` where `m` is the least positive integer
//! with `m·L ⊆ Zⁿ` and `H` is the row Hermite normal form of `m·L`. The pair
//! is unique per lattice, so lattice equality is structural equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalars::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerLattice {
    ambient: usize,
    denom: BigInt,
    rows: Vec<Vec<BigInt>>,
}

/// Canonical form of a full-rank lattice; rejects generators of lower rank.
pub fn lattice_canonicalize(rows: &[Vec<Rational>], n: usize) -> Result<IntegerLattice> {
    let l = IntegerLattice::from_generators(rows, n)?;
    if l.rank() < n {
        return Err(Error::RankDeficient {
            rank: l.rank(),
            expected: n,
        });
    }
    Ok(l)
}

/// `|det(sub)| / |det(sup)|`; an integer when `sub ⊆ sup`.
pub fn lattice_index(sub: &IntegerLattice, sup: &IntegerLattice) -> Result<Rational> {
    if sub.ambient != sup.ambient {
        return Err(Error::DimensionMismatch(format!(
            "ambient ranks {} and {}",
            sub.ambient, sup.ambient
        )));
    }
    Ok(sub.covolume()? / sup.covolume()?)
}

impl IntegerLattice {
    /// The Z-span of arbitrary rational generators (any rank).
    pub fn from_generators(rows: &[Vec<Rational>], n: usize) -> Result<Self> {
        let mut denom = BigInt::one();
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "generator of length {}, expected {n}",
                    row.len()
                )));
            }
            for x in row {
                denom = denom.lcm(x.denom());
            }
        }
        let ints: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| x.numer() * (&denom / x.denom()))
                    .collect()
            })
            .collect();
        Ok(Self::from_scaled(ints, denom, n))
    }

    /// The Z-span of integer generators.
    pub fn from_integer_rows(rows: Vec<Vec<BigInt>>, n: usize) -> Self {
        Self::from_scaled(rows, BigInt::one(), n)
    }

    fn from_scaled(rows: Vec<Vec<BigInt>>, denom: BigInt, n: usize) -> Self {
        let mut h = hnf(rows, n);
        let mut content = BigInt::zero();
        for row in &h {
            for x in row {
                content = content.gcd(x);
            }
        }
        let g = denom.gcd(&content);
        let denom = if g.is_zero() || g.is_one() {
            if h.is_empty() {
                BigInt::one()
            } else {
                denom
            }
        } else {
            for row in h.iter_mut() {
                for x in row.iter_mut() {
                    *x = &*x / &g;
                }
            }
            denom / g
        };
        IntegerLattice {
            ambient: n,
            denom,
            rows: h,
        }
    }

    /// The standard lattice Zⁿ.
    pub fn standard(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Self::from_integer_rows(rows, n)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient
    }

    /// Least positive `m` with `m·L ⊆ Zⁿ`.
    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    /// Hermite normal form rows of `m·L`.
    pub fn integer_rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// The canonical basis as rational vectors.
    pub fn basis(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| Rational::new(x.clone(), self.denom.clone()))
                    .collect()
            })
            .collect()
    }

    /// `|det|` of the basis; requires full rank.
    pub fn covolume(&self) -> Result<Rational> {
        if !self.is_full_rank() {
            return Err(Error::RankDeficient {
                rank: self.rank(),
                expected: self.ambient,
            });
        }
        // HNF is upper triangular with positive pivots.
        let mut d = Rational::one();
        for (i, row) in self.rows.iter().enumerate() {
            d *= Rational::new(row[i].clone(), self.denom.clone());
        }
        Ok(d)
    }

    /// Integer coordinates of `v` in the canonical basis, if `v ∈ L`.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient {
            return None;
        }
        let mut w = Vec::with_capacity(v.len());
        for x in v {
            let y = x * Rational::from_integer(self.denom.clone());
            if !y.is_integer() {
                return None;
            }
            w.push(y.to_integer());
        }
        let mut coords = Vec::with_capacity(self.rows.len());
        let mut col = 0;
        for row in &self.rows {
            let pivot_col = (col..self.ambient).find(|&c| !row[c].is_zero())?;
            if w[col..pivot_col].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = w[pivot_col].div_rem(&row[pivot_col]);
            if !r.is_zero() {
                return None;
            }
            for (wj, rj) in w.iter_mut().zip(row) {
                *wj -= &q * rj;
            }
            coords.push(q);
            col = pivot_col + 1;
        }
        w.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &IntegerLattice) -> bool {
        other.basis().iter().all(|v| self.contains(v))
    }

    /// `L₁ + L₂`.
    pub fn sum(&self, other: &IntegerLattice) -> Result<IntegerLattice> {
        let mut gens = self.basis();
        gens.extend(other.basis());
        Self::from_generators(&gens, self.ambient)
    }

    /// `q·L`.
    pub fn scale(&self, q: &Rational) -> Result<IntegerLattice> {
        let gens: Vec<Vec<Rational>> = self
            .basis()
            .into_iter()
            .map(|row| row.into_iter().map(|x| x * q).collect())
            .collect();
        Self::from_generators(&gens, self.ambient)
    }

    /// `L₁ ∩ L₂`.
    pub fn intersection(&self, other: &IntegerLattice) -> Result<IntegerLattice> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch("intersection".into()));
        }
        // u·B₁ = v·B₂ with u, v integral: left kernel of [B₁; −B₂].
        let b1 = self.basis();
        let b2 = other.basis();
        let mut stacked = b1.clone();
        stacked.extend(b2.iter().map(|r| r.iter().map(|x| -x.clone()).collect()));
        let kernel = integer_left_kernel(&stacked);
        let gens: Vec<Vec<Rational>> = kernel
            .iter()
            .map(|k| {
                let u: Vec<Rational> = k[..b1.len()]
                    .iter()
                    .map(|x| Rational::from_integer(x.clone()))
                    .collect();
                linalg::vec_mat(&u, &b1)
            })
            .collect();
        Self::from_generators(&gens, self.ambient)
    }

    /// `{x ∈ L : x·C = 0}` for a rational `n × k` constraint matrix `C`.
    pub fn intersect_subspace(&self, constraints: &[Vec<Rational>]) -> Result<IntegerLattice> {
        if constraints.len() != self.ambient {
            return Err(Error::DimensionMismatch("constraint matrix".into()));
        }
        let b = self.basis();
        let image = linalg::mat_mul(&b, constraints);
        let kernel = integer_left_kernel(&image);
        let gens: Vec<Vec<Rational>> = kernel
            .iter()
            .map(|k| {
                let u: Vec<Rational> = k
                    .iter()
                    .map(|x| Rational::from_integer(x.clone()))
                    .collect();
                linalg::vec_mat(&u, &b)
            })
            .collect();
        Self::from_generators(&gens, self.ambient)
    }

    /// Elementary divisors of this lattice relative to `base`, ascending:
    /// the `dᵢ` with bases `(fᵢ)` of `base` and `(dᵢ fᵢ)` of `self`.
    pub fn elementary_divisors(&self, base: &IntegerLattice) -> Result<Vec<Rational>> {
        if !self.is_full_rank() || !base.is_full_rank() || self.ambient != base.ambient {
            return Err(Error::DimensionMismatch(
                "elementary divisors need full-rank lattices of equal ambient rank".into(),
            ));
        }
        let inv = linalg::inverse(&base.basis())
            .ok_or_else(|| Error::Inconsistent("singular lattice basis".into()))?;
        let t = linalg::mat_mul(&self.basis(), &inv);
        let mut d = BigInt::one();
        for row in &t {
            for x in row {
                d = d.lcm(x.denom());
            }
        }
        let dt: Vec<Vec<BigInt>> = t
            .iter()
            .map(|row| row.iter().map(|x| x.numer() * (&d / x.denom())).collect())
            .collect();
        let invariants = smith_invariants(&dt);
        let dq = Rational::from_integer(d);
        Ok(invariants
            .into_iter()
            .map(|s| Rational::from_integer(s) / &dq)
            .collect())
    }
}

/// Row Hermite normal form of an integer matrix with `n` columns: rows in
/// echelon form, positive pivots, entries above each pivot in `[0, pivot)`,
/// zero rows dropped.
pub fn hnf(mut rows: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut r = 0;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        loop {
            let Some(p) = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()))
            else {
                break;
            };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = rows[r].clone();
        for k in 0..r {
            let q = rows[k][c].div_floor(&pivot_row[c]);
            if !q.is_zero() {
                for (x, y) in rows[k].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows.retain(|row| row.iter().any(|x| !x.is_zero()));
    rows
}

/// Z-basis of `{u ∈ Zᵐ : u·A = 0}` for a rational `m × n` matrix `A`.
pub fn integer_left_kernel(a: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    let m = a.len();
    if m == 0 {
        return Vec::new();
    }
    let n = a[0].len();
    let mut d = BigInt::one();
    for row in a {
        for x in row {
            d = d.lcm(x.denom());
        }
    }
    let aug: Vec<Vec<BigInt>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&d / x.denom())).collect();
            out.extend((0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            out
        })
        .collect();
    hnf(aug, n + m)
        .into_iter()
        .filter(|row| row[..n].iter().all(Zero::is_zero))
        .map(|row| row[n..].to_vec())
        .collect()
}

/// Smith invariants of a square nonsingular integer matrix via
/// determinantal divisors.
fn smith_invariants(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    let q: Vec<Vec<Rational>> = m
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let mut divisors = vec![BigInt::one()];
    for k in 1..=n {
        let mut g = BigInt::zero();
        for rows in combinations(n, k) {
            for cols in combinations(n, k) {
                let minor: Vec<Vec<Rational>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| q[i][j].clone()).collect())
                    .collect();
                g = g.gcd(&linalg::det(&minor).to_integer());
            }
        }
        divisors.push(g);
    }
    (1..=n).map(|k| &divisors[k] / &divisors[k - 1]).collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
