//! The group `SL‡(2, H)` of 2×2 quaternion matrices `(a, b; c, d)` with
//! `ab‡ ∈ H⁺`, `cd‡ ∈ H⁺` and `ad‡ − bc‡ = 1`, and its spinor map onto
//! `SO(q_H)`.

use std::fmt;

use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::involution::Involution;
use crate::linalg::Matrix;
use crate::quaternion::{Quaternion, QuaternionAlgebra};
use crate::scalars::{Field, QuadExt, Rational};

pub const CLAUSE_AB: &str = "ab‡ ∉ H⁺";
pub const CLAUSE_CD: &str = "cd‡ ∉ H⁺";
pub const CLAUSE_DET: &str = "ad‡ − bc‡ ≠ 1";

/// A 2×2 matrix over `H` (or `H ⊗ Q(√d)`), with no group condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat2<F> {
    pub a: Quaternion<F>,
    pub b: Quaternion<F>,
    pub c: Quaternion<F>,
    pub d: Quaternion<F>,
}

impl<F: Field> Mat2<F> {
    pub fn new(a: Quaternion<F>, b: Quaternion<F>, c: Quaternion<F>, d: Quaternion<F>) -> Result<Self> {
        let alg = a.algebra();
        if b.algebra() != alg || c.algebra() != alg || d.algebra() != alg {
            return Err(Error::AlgebraMismatch);
        }
        let m = Mat2 { a, b, c, d };
        m.field_parameter()?;
        Ok(m)
    }

    pub fn identity(algebra: &QuaternionAlgebra) -> Self {
        let one = Quaternion::one(algebra.clone());
        let zero = Quaternion::zero(algebra.clone());
        Mat2 {
            a: one.clone(),
            b: zero.clone(),
            c: zero,
            d: one,
        }
    }

    /// Matrix with quaternion `x` at row `r`, column `c`, zeros elsewhere.
    pub fn unit(algebra: &QuaternionAlgebra, r: usize, c: usize, x: Quaternion<F>) -> Self {
        let zero = Quaternion::zero(algebra.clone());
        let mut e = [zero.clone(), zero.clone(), zero.clone(), zero];
        e[2 * r + c] = x;
        let [a, b, c, d] = e;
        Mat2 { a, b, c, d }
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        self.a.algebra()
    }

    pub fn entries(&self) -> [&Quaternion<F>; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// The quadratic field all entries live in, if any entry is
    /// irrational; errors when entries disagree.
    pub fn field_parameter(&self) -> Result<Option<i64>> {
        let mut found: Option<i64> = None;
        for q in self.entries() {
            for x in q.coords() {
                if let Some(d) = x.field_parameter() {
                    match found {
                        None => found = Some(d),
                        Some(e) if e != d => return Err(Error::FieldMismatch(e, d)),
                        _ => {}
                    }
                }
            }
        }
        Ok(found)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Mat2 {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        if self.algebra() != o.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if let (Some(d1), Some(d2)) = (self.field_parameter()?, o.field_parameter()?) {
            if d1 != d2 {
                return Err(Error::FieldMismatch(d1, d2));
            }
        }
        Ok(self.mul(o))
    }

    pub fn neg(&self) -> Self {
        Mat2 {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Mat2 {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            c: &self.c + &o.c,
            d: &self.d + &o.d,
        }
    }

    /// `γ̄ᵀ = (ā, c̄; b̄, d̄)`.
    pub fn conj_transpose(&self) -> Self {
        Mat2 {
            a: self.a.conj(),
            b: self.c.conj(),
            c: self.b.conj(),
            d: self.d.conj(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.algebra())
    }

    /// Entries with rational coordinates, if they all have them.
    pub fn to_rational(&self) -> Option<Mat2<Rational>> {
        Some(Mat2 {
            a: self.a.to_rational()?,
            b: self.b.to_rational()?,
            c: self.c.to_rational()?,
            d: self.d.to_rational()?,
        })
    }

    /// Coordinates in row-major order: 4 quaternions × 4 coordinates.
    pub fn coords16(&self) -> Vec<F> {
        self.entries()
            .iter()
            .flat_map(|q| q.coords().iter().cloned())
            .collect()
    }

    pub fn from_coords16(algebra: &QuaternionAlgebra, v: &[F]) -> Result<Self> {
        if v.len() != 16 {
            return Err(Error::DimensionMismatch(format!("{} coordinates, expected 16", v.len())));
        }
        let q = |k: usize| Quaternion::from_vec(algebra.clone(), &v[4 * k..4 * k + 4]);
        Mat2::new(q(0)?, q(1)?, q(2)?, q(3)?)
    }
}

impl Mat2<Rational> {
    pub fn lift<F: Field>(&self) -> Mat2<F> {
        Mat2 {
            a: self.a.lift(),
            b: self.b.lift(),
            c: self.c.lift(),
            d: self.d.lift(),
        }
    }
}

impl<F: Field> fmt::Display for Mat2<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Result of checking the three defining conditions of `SL‡(2, H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipReport {
    pub member: bool,
    pub violations: Vec<String>,
}

/// Checks `ab‡ ∈ H⁺`, `cd‡ ∈ H⁺`, `ad‡ − bc‡ = 1`, listing each failure.
pub fn is_member<F: Field>(inv: &Involution, m: &Mat2<F>) -> Result<MembershipReport> {
    if m.algebra() != inv.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    m.field_parameter()?;
    let sharp = |x: &Quaternion<F>| inv.apply_unchecked(x);
    let mut violations = Vec::new();
    if !inv.is_plus(&(&m.a * &sharp(&m.b))) {
        violations.push(CLAUSE_AB.to_string());
    }
    if !inv.is_plus(&(&m.c * &sharp(&m.d))) {
        violations.push(CLAUSE_CD.to_string());
    }
    let det = &(&m.a * &sharp(&m.d)) - &(&m.b * &sharp(&m.c));
    if det != Quaternion::one(m.algebra().clone()) {
        violations.push(CLAUSE_DET.to_string());
    }
    Ok(MembershipReport {
        member: violations.is_empty(),
        violations,
    })
}

/// An element of `SL‡(2, H ⊗ F)`; membership is checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct VahlenMatrix<F> {
    m: Mat2<F>,
    inv: Involution,
}

impl<F: Field> VahlenMatrix<F> {
    pub fn new(inv: &Involution, m: Mat2<F>) -> Result<Self> {
        let report = is_member(inv, &m)?;
        if !report.member {
            return Err(Error::NotMember(report.violations));
        }
        Ok(VahlenMatrix {
            m,
            inv: inv.clone(),
        })
    }

    pub fn from_entries(
        inv: &Involution,
        a: Quaternion<F>,
        b: Quaternion<F>,
        c: Quaternion<F>,
        d: Quaternion<F>,
    ) -> Result<Self> {
        Self::new(inv, Mat2::new(a, b, c, d)?)
    }

    pub fn identity(inv: &Involution) -> Self {
        VahlenMatrix {
            m: Mat2::identity(inv.algebra()),
            inv: inv.clone(),
        }
    }

    pub fn matrix(&self) -> &Mat2<F> {
        &self.m
    }

    pub fn involution(&self) -> &Involution {
        &self.inv
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_identity()
    }

    pub fn neg(&self) -> Self {
        VahlenMatrix {
            m: self.m.neg(),
            inv: self.inv.clone(),
        }
    }

    /// `U(z) = (1, z; 0, 1)` for `z ∈ H⁺`.
    pub fn upper(inv: &Involution, z: &Quaternion<F>) -> Result<Self> {
        Self::unipotent(inv, z, true)
    }

    /// `L(z) = (1, 0; z, 1)` for `z ∈ H⁺`.
    pub fn lower(inv: &Involution, z: &Quaternion<F>) -> Result<Self> {
        Self::unipotent(inv, z, false)
    }

    fn unipotent(inv: &Involution, z: &Quaternion<F>, upper: bool) -> Result<Self> {
        if z.algebra() != inv.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if !inv.is_plus(z) {
            return Err(Error::NotInPlusSpace(z.to_string()));
        }
        let mut m = Mat2::identity(inv.algebra());
        if upper {
            m.b = z.clone();
        } else {
            m.c = z.clone();
        }
        Self::new(inv, m)
    }

    /// `diag(u, (u⁻¹)‡)`.
    pub fn diagonal(inv: &Involution, u: &Quaternion<F>) -> Result<Self> {
        let u_inv = u
            .inverse()
            .ok_or_else(|| Error::NotInvertible(u.to_string()))?;
        let zero = Quaternion::zero(inv.algebra().clone());
        Self::from_entries(inv, u.clone(), zero.clone(), zero, inv.apply(&u_inv)?)
    }

    /// Product of two members; the result is checked again.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.inv != other.inv {
            return Err(Error::InvolutionMismatch);
        }
        Self::new(&self.inv, self.m.checked_mul(&other.m)?)
    }

    /// `(d‡, −b‡; −c‡, a‡)`.
    pub fn inverse(&self) -> Self {
        let s = |x: &Quaternion<F>| self.inv.apply_unchecked(x);
        VahlenMatrix {
            m: Mat2 {
                a: s(&self.m.d),
                b: -s(&self.m.b),
                c: -s(&self.m.c),
                d: s(&self.m.a),
            },
            inv: self.inv.clone(),
        }
    }

    /// `γ·x·γ⁻¹` for an arbitrary matrix `x`.
    pub fn conjugate(&self, x: &Mat2<F>) -> Result<Mat2<F>> {
        let left = self.m.checked_mul(x)?;
        left.checked_mul(&self.inverse().m)
    }
}

impl VahlenMatrix<Rational> {
    pub fn lift<F: Field>(&self) -> VahlenMatrix<F> {
        VahlenMatrix {
            m: self.m.lift(),
            inv: self.inv.clone(),
        }
    }
}

/// `multiply(m₁, m₂)` as a free function.
pub fn multiply<F: Field>(m1: &VahlenMatrix<F>, m2: &VahlenMatrix<F>) -> Result<VahlenMatrix<F>> {
    m1.multiply(m2)
}

/// Closed-form inverse.
pub fn inverse<F: Field>(m: &VahlenMatrix<F>) -> VahlenMatrix<F> {
    m.inverse()
}

pub fn gen_upper<F: Field>(inv: &Involution, z: &Quaternion<F>) -> Result<VahlenMatrix<F>> {
    VahlenMatrix::upper(inv, z)
}

pub fn gen_lower<F: Field>(inv: &Involution, z: &Quaternion<F>) -> Result<VahlenMatrix<F>> {
    VahlenMatrix::lower(inv, z)
}

/// A unipotent generator of `SL‡(2, H)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Upper(Quaternion<Rational>),
    Lower(Quaternion<Rational>),
}

impl Generator {
    pub fn to_matrix(&self, inv: &Involution) -> Result<VahlenMatrix<Rational>> {
        match self {
            Generator::Upper(z) => VahlenMatrix::upper(inv, z),
            Generator::Lower(z) => VahlenMatrix::lower(inv, z),
        }
    }

    pub fn parameter(&self) -> &Quaternion<Rational> {
        match self {
            Generator::Upper(z) | Generator::Lower(z) => z,
        }
    }
}

/// Product of a generator word, left to right.
pub fn evaluate_word(inv: &Involution, word: &[Generator]) -> Result<VahlenMatrix<Rational>> {
    let mut acc = VahlenMatrix::identity(inv);
    for g in word {
        acc = acc.multiply(&g.to_matrix(inv)?)?;
    }
    Ok(acc)
}

/// `x, y ∈ H⁺` with `1 + x·y = u`.
///
/// `y = x⁻¹(u − 1)` lies in `H⁺` iff the `H⁻` component of `x̄·(u − 1)`
/// vanishes, a single linear condition on `x ∈ H⁺`. Its solution space has
/// dimension at least 2, and `nrm` restricted to `H⁺` is a nondegenerate
/// ternary form, so no 2-dimensional subspace is totally isotropic: one of
/// `k₁, k₂, k₁ + k₂` for a kernel basis has nonzero norm.
pub fn write_unit_as_one_plus_xy(
    inv: &Involution,
    u: &Quaternion<Rational>,
) -> Result<(Quaternion<Rational>, Quaternion<Rational>)> {
    if u.algebra() != inv.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    if u.norm().is_zero() {
        return Err(Error::NotInvertible(u.to_string()));
    }
    let alg = inv.algebra().clone();
    let w = u - &Quaternion::one(alg.clone());
    if w.is_zero() {
        return Ok((Quaternion::zero(alg.clone()), Quaternion::zero(alg)));
    }
    // λ_k = H⁻ coordinate of p̄_k·w
    let row: Vec<Rational> = inv
        .plus_basis()
        .iter()
        .map(|p| inv.split_coordinates(&(&p.conj() * &w))[3].clone())
        .collect();
    let kernel = crate::linalg::kernel(&[row], 3);
    let mut candidates: Vec<Vec<Rational>> = kernel.clone();
    for i in 0..kernel.len() {
        for j in i + 1..kernel.len() {
            candidates.push(kernel[i].iter().zip(&kernel[j]).map(|(a, b)| a + b).collect());
        }
    }
    for t in candidates {
        let x = inv.from_plus_coordinates(&[t[0].clone(), t[1].clone(), t[2].clone()]);
        let n = x.norm();
        if n.is_zero() {
            continue;
        }
        let y = (&x.conj() * &w).scale(&n.recip());
        if !inv.is_plus(&y) {
            return Err(Error::Inconsistent(format!("y = {y} left H+")));
        }
        if &Quaternion::one(alg.clone()) + &(&x * &y) != *u {
            return Err(Error::Inconsistent("1 + xy != u".into()));
        }
        return Ok((x, y));
    }
    Err(Error::SearchExhausted(format!("no anisotropic x for u = {u}")))
}

/// A word in upper and lower unipotent generators whose product is `m`.
///
/// With `d` invertible, `m = U(bd⁻¹)·diag(u, (u⁻¹)‡)·L(d⁻¹c)` where
/// `u = a − bd⁻¹c`, and with `u = 1 + xy`,
/// `diag(u, (u⁻¹)‡) = L(−y(1+xy)⁻¹)·U(x)·L(y)·U(−(1+xy)⁻¹x)`.
/// Otherwise `m` is first replaced by `L(z₀)·m` for a small `z₀ ∈ H⁺`
/// making the new `d` entry invertible. Identity factors are dropped.
pub fn decompose(m: &VahlenMatrix<Rational>) -> Result<Vec<Generator>> {
    let inv = m.involution();
    let word = if !m.matrix().d.norm().is_zero() {
        decompose_invertible_d(m)?
    } else {
        let mut word = None;
        for z0 in perturbations(inv) {
            let shifted = VahlenMatrix::lower(inv, &z0)?.multiply(m)?;
            if shifted.matrix().d.norm().is_zero() {
                continue;
            }
            let mut w = vec![Generator::Lower(-&z0)];
            w.extend(decompose_invertible_d(&shifted)?);
            word = Some(w);
            break;
        }
        word.ok_or_else(|| {
            Error::SearchExhausted(format!("no perturbation makes d invertible for {}", m.matrix()))
        })?
    };
    let word: Vec<Generator> = word.into_iter().filter(|g| !g.parameter().is_zero()).collect();
    if evaluate_word(inv, &word)?.matrix() != m.matrix() {
        return Err(Error::Inconsistent("decomposition does not multiply back".into()));
    }
    Ok(word)
}

/// `0, ±pᵢ, ±(pᵢ + pⱼ)` over the plus basis.
fn perturbations(inv: &Involution) -> Vec<Quaternion<Rational>> {
    let p = inv.plus_basis();
    let mut out = vec![Quaternion::zero(inv.algebra().clone())];
    for x in p {
        out.push(x.clone());
        out.push(-x);
    }
    for i in 0..3 {
        for j in i + 1..3 {
            let s = &p[i] + &p[j];
            out.push(s.clone());
            out.push(-s);
        }
    }
    out
}

fn decompose_invertible_d(m: &VahlenMatrix<Rational>) -> Result<Vec<Generator>> {
    let inv = m.involution();
    let Mat2 { a, b, c, d } = m.matrix();
    let d_inv = d.inverse().ok_or_else(|| Error::NotInvertible(d.to_string()))?;
    let upper = b * &d_inv;
    let lower = &d_inv * c;
    let u = a - &(&upper * c);
    let (x, y) = write_unit_as_one_plus_xy(inv, &u)?;
    let u_inv = u.inverse().ok_or_else(|| Error::NotInvertible(u.to_string()))?;
    Ok(vec![
        Generator::Upper(upper),
        Generator::Lower(-&(&y * &u_inv)),
        Generator::Upper(x.clone()),
        Generator::Lower(y),
        Generator::Upper(-&(&u_inv * &x)),
        Generator::Lower(lower),
    ])
}

/// A point `(s, t, z)` of `F² ⊕ H⁺`, standing for the matrix
/// `(s, z; z̄, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianPoint {
    pub s: Rational,
    pub t: Rational,
    /// Coordinates of `z` over the plus basis.
    pub z: [Rational; 3],
}

impl HermitianPoint {
    pub fn to_matrix(&self, inv: &Involution) -> Mat2<Rational> {
        let alg = inv.algebra().clone();
        let z = inv.from_plus_coordinates(&self.z);
        Mat2 {
            a: Quaternion::scalar(alg.clone(), self.s.clone()),
            b: z.clone(),
            c: z.conj(),
            d: Quaternion::scalar(alg, self.t.clone()),
        }
    }

    /// Reads `(s, z; z̄, t)` back; errors if `m` is not of that shape.
    pub fn from_matrix(inv: &Involution, m: &Mat2<Rational>) -> Result<Self> {
        let shape = |what: &str| Error::Inconsistent(format!("{what} in {m}"));
        if !m.a.is_scalar() || !m.d.is_scalar() {
            return Err(shape("non-scalar diagonal"));
        }
        if m.c != m.b.conj() {
            return Err(shape("off-diagonal entries not conjugate"));
        }
        let z = inv
            .plus_coordinates(&m.b)
            .ok_or_else(|| shape("off-diagonal entry outside H+"))?;
        Ok(HermitianPoint {
            s: m.a.coords()[0].clone(),
            t: m.d.coords()[0].clone(),
            z,
        })
    }

    /// `q_H(s, t, z) = st − nrm(z)`.
    pub fn q_h(&self, inv: &Involution) -> Rational {
        &self.s * &self.t - inv.from_plus_coordinates(&self.z).norm()
    }

    pub fn coords(&self) -> [Rational; 5] {
        [
            self.s.clone(),
            self.t.clone(),
            self.z[0].clone(),
            self.z[1].clone(),
            self.z[2].clone(),
        ]
    }
}

/// Matrix of `M ↦ γ·M·γ̄ᵀ` on coordinates `(s, t, z₁, z₂, z₃)`; column `k`
/// is the image of the `k`-th coordinate point.
pub fn spinor_matrix(m: &VahlenMatrix<Rational>) -> Result<Matrix<Rational>> {
    let inv = m.involution();
    let g = m.matrix();
    let gt = g.conj_transpose();
    let mut cols = Vec::with_capacity(5);
    for k in 0..5 {
        let mut c = [
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
        ];
        c[k] = Rational::one();
        let [s, t, z1, z2, z3] = c;
        let p = HermitianPoint { s, t, z: [z1, z2, z3] };
        let image = g.mul(&p.to_matrix(inv)).mul(&gt);
        cols.push(HermitianPoint::from_matrix(inv, &image)?.coords());
    }
    Ok((0..5)
        .map(|r| (0..5).map(|k| cols[k][r].clone()).collect())
        .collect())
}

/// `diag(u′, (u′⁻¹)‡)` with `u′ = u/√nrm(u)`, over `Q(√s)` for the
/// squarefree part `s` of `nrm(u)` (over Q when the norm is a square).
pub fn build_diag_conjugator(inv: &Involution, u: &Quaternion<Rational>) -> Result<VahlenMatrix<QuadExt>> {
    let n = u.norm();
    if n.is_zero() {
        return Err(Error::NotInvertible(u.to_string()));
    }
    let s = arith::signed_squarefree_part(&n)?;
    let s_i64: i64 = s
        .to_string()
        .parse()
        .map_err(|_| Error::TooLargeToFactor(s.to_string()))?;
    if s_i64 < 0 {
        return Err(Error::ImaginaryExtension(n.to_string()));
    }
    let r = arith::rational_sqrt(&(&n / Rational::from_integer(s.clone())))
        .ok_or_else(|| Error::Inconsistent(format!("{n} / {s} is not a square")))?;
    // 1/√n = 1/(r·√s) = √s/(r·s)
    let inv_sqrt = if s_i64 == 1 {
        QuadExt::from_rational(r.recip())
    } else {
        QuadExt::new(
            s_i64,
            Rational::zero(),
            (r * Rational::from_integer(s)).recip(),
        )?
    };
    let u_prime = u.to_ext().scale(&inv_sqrt);
    VahlenMatrix::diagonal(inv, &u_prime)
}
