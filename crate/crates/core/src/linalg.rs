//! Dense exact linear algebra over any [`Field`].
//!
//! Matrices are `Vec<Vec<F>>` in row-major order. Sizes here never exceed
//! 32, so plain Gaussian elimination is fine.

use num_traits::{Signed, Zero};

use crate::scalars::{Field, Rational};

pub type Matrix<F> = Vec<Vec<F>>;

pub fn zeros<F: Field>(rows: usize, cols: usize) -> Matrix<F> {
    vec![vec![F::zero(); cols]; rows]
}

pub fn identity<F: Field>(n: usize) -> Matrix<F> {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = F::one();
    }
    m
}

pub fn transpose<F: Field>(m: &[Vec<F>]) -> Matrix<F> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Matrix<F> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    let mut acc = F::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = acc + row[k].clone() * b[k][j].clone();
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat<F: Field>(v: &[F], m: &[Vec<F>]) -> Vec<F> {
    mat_mul(&[v.to_vec()], m).remove(0)
}

/// Matrix times column vector.
pub fn mat_vec<F: Field>(m: &[Vec<F>], v: &[F]) -> Vec<F> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
        .collect()
}

pub fn dot<F: Field>(u: &[F], v: &[F]) -> F {
    u.iter()
        .zip(v)
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = m[r][j].clone();
                    m[i][j] = m[i][j].clone() - f.clone() * t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    let mut m = m.to_vec();
    rref(&mut m).len()
}

/// Basis of the right null space `{x : m·x = 0}`.
pub fn kernel<F: Field>(m: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut r = m.to_vec();
    let pivots = rref(&mut r);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![F::zero(); cols];
            x[f] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = -r[row][f].clone();
            }
            x
        })
        .collect()
}

pub fn det<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return F::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let inv = a[c][c].inv().expect("nonzero pivot");
        d = d * a[c][c].clone();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() * inv.clone();
            for j in c..n {
                let t = a[c][j].clone();
                a[i][j] = a[i][j].clone() - f.clone() * t;
            }
        }
    }
    d
}

pub fn inverse<F: Field>(m: &[Vec<F>]) -> Option<Matrix<F>> {
    let n = m.len();
    let mut aug: Matrix<F> = m
        .iter()
        .zip(identity::<F>(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `x·m = v` for a row vector `x`, if a solution exists.
pub fn solve_left<F: Field>(m: &[Vec<F>], v: &[F]) -> Option<Vec<F>> {
    // x·m = v  ⇔  mᵀ·xᵀ = vᵀ
    let mt = transpose(m);
    let rows = m.len();
    let mut aug: Matrix<F> = mt
        .into_iter()
        .zip(v)
        .map(|(mut row, x)| {
            row.push(x.clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&rows) {
        return None;
    }
    let mut x = vec![F::zero(); rows];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][rows].clone();
    }
    Some(x)
}

/// Counts of positive, negative and zero eigenvalues of a real symmetric
/// rational matrix, by exact congruence diagonalization.
pub fn inertia(m: &[Vec<Rational>]) -> (usize, usize, usize) {
    let n = m.len();
    let mut a = m.to_vec();
    let mut diag = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            if let Some(p) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                swap_sym(&mut a, k, p);
            } else if let Some(p) = (k + 1..n).find(|&i| !a[k][i].is_zero()) {
                // e_k ← e_k + e_p gives diagonal 2·a[k][p] ≠ 0
                add_sym(&mut a, k, p);
            } else {
                diag.push(Rational::zero());
                k += 1;
                continue;
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
            for j in k..n {
                let t = &f * &a[j][k];
                a[j][i] -= t;
            }
        }
        diag.push(pivot);
        k += 1;
    }
    let pos = diag.iter().filter(|x| x.is_positive()).count();
    let neg = diag.iter().filter(|x| x.is_negative()).count();
    (pos, neg, n - pos - neg)
}

fn swap_sym(a: &mut Matrix<Rational>, i: usize, j: usize) {
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn add_sym(a: &mut Matrix<Rational>, k: usize, p: usize) {
    let n = a.len();
    for j in 0..n {
        let t = a[p][j].clone();
        a[k][j] += t;
    }
    for row in a.iter_mut().take(n) {
        let t = row[p].clone();
        row[k] += t;
    }
}
