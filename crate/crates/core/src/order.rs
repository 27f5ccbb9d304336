//! Orders of a quaternion algebra as rank-4 lattices.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::hilbert::Place;
use crate::involution::Involution;
use crate::lattice::{lattice_canonicalize, IntegerLattice};
use crate::linalg::{self, Matrix};
use crate::quaternion::{Quaternion, QuaternionAlgebra};
use crate::scalars::{Field, Rational};

/// A full-rank subring of `H` containing 1, with coordinates over
/// `(1, i, j, ij)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderLattice {
    algebra: QuaternionAlgebra,
    lattice: IntegerLattice,
    reduced_discriminant: BigInt,
}

/// Why a lattice fails to be an order.
#[derive(Debug, Clone, PartialEq)]
pub enum OrderViolation {
    MissingOne,
    /// `basis[left]·basis[right]` lies outside the lattice.
    Product {
        left: usize,
        right: usize,
        product: Quaternion<Rational>,
    },
}

impl fmt::Display for OrderViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderViolation::MissingOne => f.write_str("1 is not in the lattice"),
            OrderViolation::Product {
                left,
                right,
                product,
            } => write!(
                f,
                "product of basis vectors {left} and {right} is {product}, outside the lattice"
            ),
        }
    }
}

/// Checks that a rank-4 lattice contains 1 and is closed under
/// multiplication; returns the first violation found, if any.
pub fn is_order(algebra: &QuaternionAlgebra, lattice: &IntegerLattice) -> Result<Option<OrderViolation>> {
    if lattice.ambient() != 4 || !lattice.is_full_rank() {
        return Err(Error::RankDeficient {
            rank: lattice.rank(),
            expected: 4,
        });
    }
    if !lattice.contains(Quaternion::<Rational>::one(algebra.clone()).coords()) {
        return Ok(Some(OrderViolation::MissingOne));
    }
    let basis = quaternion_basis(algebra, lattice);
    for (l, x) in basis.iter().enumerate() {
        for (r, y) in basis.iter().enumerate() {
            let p = x * y;
            if !lattice.contains(p.coords()) {
                return Ok(Some(OrderViolation::Product {
                    left: l,
                    right: r,
                    product: p,
                }));
            }
        }
    }
    Ok(None)
}

fn quaternion_basis(algebra: &QuaternionAlgebra, lattice: &IntegerLattice) -> Vec<Quaternion<Rational>> {
    lattice
        .basis()
        .iter()
        .map(|row| Quaternion::from_vec(algebra.clone(), row).expect("rank-4 rows"))
        .collect()
}

impl OrderLattice {
    /// The order spanned by `basis` (any generating set of full rank).
    pub fn new(algebra: &QuaternionAlgebra, basis: &[Vec<Rational>]) -> Result<Self> {
        let lattice = lattice_canonicalize(basis, 4)?;
        Self::from_lattice(algebra, lattice)
    }

    pub fn from_quaternions(algebra: &QuaternionAlgebra, gens: &[Quaternion<Rational>]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = gens.iter().map(|q| q.coords().to_vec()).collect();
        Self::new(algebra, &rows)
    }

    pub fn from_lattice(algebra: &QuaternionAlgebra, lattice: IntegerLattice) -> Result<Self> {
        if let Some(v) = is_order(algebra, &lattice)? {
            return Err(Error::NotAnOrder(v.to_string()));
        }
        let basis = quaternion_basis(algebra, &lattice);
        for e in &basis {
            if !e.trace().is_integer() || !e.norm().is_integer() {
                return Err(Error::NotAnOrder(format!("{e} is not integral")));
            }
        }
        let reduced_discriminant = discriminant_of(&basis)?;
        Ok(OrderLattice {
            algebra: algebra.clone(),
            lattice,
            reduced_discriminant,
        })
    }

    /// `Z⟨1, i, j, ij⟩`.
    pub fn standard(algebra: &QuaternionAlgebra) -> Result<Self> {
        Self::from_lattice(algebra, IntegerLattice::standard(4))
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.algebra
    }

    pub fn lattice(&self) -> &IntegerLattice {
        &self.lattice
    }

    pub fn basis(&self) -> Vec<Quaternion<Rational>> {
        quaternion_basis(&self.algebra, &self.lattice)
    }

    pub fn contains(&self, x: &Quaternion<Rational>) -> bool {
        x.algebra() == &self.algebra && self.lattice.contains(x.coords())
    }

    /// Positive square root of `|det(tr(eᵢ·ēⱼ))|`.
    pub fn reduced_discriminant(&self) -> &BigInt {
        &self.reduced_discriminant
    }
}

fn discriminant_of(basis: &[Quaternion<Rational>]) -> Result<BigInt> {
    let gram: Matrix<Rational> = basis
        .iter()
        .map(|x| basis.iter().map(|y| (x * &y.conj()).trace()).collect())
        .collect();
    let d = linalg::det(&gram).abs();
    if !d.is_integer() {
        return Err(Error::Inconsistent(format!("trace-form determinant {d} is not an integer")));
    }
    arith::integer_sqrt_exact(&d.to_integer())
        .ok_or_else(|| Error::Inconsistent(format!("trace-form determinant {d} is not a square")))
}

/// `reduced_discriminant(O)`, as a free function.
pub fn reduced_discriminant(order: &OrderLattice) -> BigInt {
    order.reduced_discriminant.clone()
}

fn check_algebra(order: &OrderLattice, inv: &Involution) -> Result<()> {
    if order.algebra() != inv.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(())
}

/// True iff `eᵢ‡ ∈ O` for every basis vector.
pub fn is_sharp_stable(order: &OrderLattice, inv: &Involution) -> Result<bool> {
    check_algebra(order, inv)?;
    Ok(order
        .basis()
        .iter()
        .all(|e| order.contains(&inv.apply_unchecked(e))))
}

/// `O‡`.
pub fn sharp_image(order: &OrderLattice, inv: &Involution) -> Result<OrderLattice> {
    check_algebra(order, inv)?;
    let images: Vec<Quaternion<Rational>> =
        order.basis().iter().map(|e| inv.apply_unchecked(e)).collect();
    OrderLattice::from_quaternions(order.algebra(), &images)
}

/// `O ∩ O‡`, always a ‡-stable order.
pub fn sharp_core(order: &OrderLattice, inv: &Involution) -> Result<OrderLattice> {
    let image = sharp_image(order, inv)?;
    let lattice = order.lattice().intersection(image.lattice())?;
    OrderLattice::from_lattice(order.algebra(), lattice)
}

/// Outcome of the discriminant criterion for maximal ‡-orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalityCertificate {
    pub sharp_stable: bool,
    /// `disc(H)`.
    pub algebra_discriminant: BigInt,
    /// `ι(disc ‡)`.
    pub involution_iota: BigInt,
    /// `lcm(disc(H), ι(disc ‡))`, the required reduced discriminant.
    pub target: BigInt,
    pub order_discriminant: BigInt,
    pub maximal: bool,
    pub note: String,
}

/// A ‡-order is maximal iff its reduced discriminant equals
/// `lcm(disc(H), ι(disc ‡))`.
pub fn is_maximal_sharp_order(order: &OrderLattice, inv: &Involution) -> Result<MaximalityCertificate> {
    let sharp_stable = is_sharp_stable(order, inv)?;
    let algebra_discriminant = order.algebra().discriminant()?;
    let involution_iota = inv.iota();
    let target = arith::lcm(&algebra_discriminant, &involution_iota);
    let order_discriminant = order.reduced_discriminant().clone();
    let maximal = sharp_stable && order_discriminant == target;
    let note = if !sharp_stable {
        "order is not stable under the involution".to_string()
    } else if maximal {
        format!(
            "stable under the involution with squarefree reduced discriminant {target}; \
             squarefree discriminant makes the order hereditary, hence Eichler"
        )
    } else {
        format!("reduced discriminant {order_discriminant} differs from the target {target}")
    };
    Ok(MaximalityCertificate {
        sharp_stable,
        algebra_discriminant,
        involution_iota,
        target,
        order_discriminant,
        maximal,
        note,
    })
}

/// `O ∩ H⁺` as a rank-3 lattice.
pub fn plus_part(order: &OrderLattice, inv: &Involution) -> Result<IntegerLattice> {
    check_algebra(order, inv)?;
    let mut constraints = inv.matrix().clone();
    for (r, row) in constraints.iter_mut().enumerate() {
        row[r] -= Rational::one();
    }
    order.lattice().intersect_subspace(&constraints)
}

/// Nonnegative generator of the ideal `tr(O ∩ H⁺) ⊆ Z`.
pub fn trace_ideal_plus_part(order: &OrderLattice, inv: &Involution) -> Result<BigInt> {
    let plus = plus_part(order, inv)?;
    let mut g = BigInt::zero();
    for row in plus.basis() {
        let t = &row[0] + &row[0];
        if !t.is_integer() {
            return Err(Error::Inconsistent(format!("non-integral trace {t}")));
        }
        g = g.gcd(&t.to_integer());
    }
    Ok(g)
}

/// `u·O·u⁻¹`; every conjugated basis vector must have rational
/// coordinates.
pub fn conjugate_order<F: Field>(u: &Quaternion<F>, order: &OrderLattice) -> Result<OrderLattice> {
    if u.algebra() != order.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let u_inv = u
        .inverse()
        .ok_or_else(|| Error::NotInvertible(u.to_string()))?;
    let mut images = Vec::with_capacity(4);
    for e in order.basis() {
        let c = &(u * &e.lift::<F>()) * &u_inv;
        let r = c.to_rational().ok_or_else(|| {
            Error::NotRational(format!("conjugate of basis vector {e} is {c}"))
        })?;
        images.push(r);
    }
    OrderLattice::from_quaternions(order.algebra(), &images)
}

/// All elements of reduced norm 1 in an order of a definite algebra,
/// sorted by coordinates.
pub fn unit_group(order: &OrderLattice) -> Result<Vec<Quaternion<Rational>>> {
    if !order.algebra().is_definite() {
        return Err(Error::IndefiniteAlgebra);
    }
    let basis = order.basis();
    let b: Matrix<Rational> = basis.iter().map(|q| q.coords().to_vec()).collect();
    let gram = linalg::mat_mul(
        &linalg::mat_mul(&b, &order.algebra().norm_gram()),
        &linalg::transpose(&b),
    );
    let coords = short_vectors(&gram, &Rational::one());
    let mut units: Vec<Quaternion<Rational>> = coords
        .into_iter()
        .map(|c| {
            let v: Vec<Rational> = c.into_iter().map(Rational::from_integer).collect();
            let x = linalg::vec_mat(&v, &b);
            Quaternion::from_vec(order.algebra().clone(), &x).expect("4 coordinates")
        })
        .filter(|q| q.norm().is_one())
        .collect();
    units.sort_by(|x, y| x.coords().cmp(y.coords()));
    Ok(units)
}

/// Integer vectors `c` with `cᵀ·G·c ≤ bound` for a positive definite
/// rational Gram matrix, by exact Fincke–Pohst enumeration.
pub fn short_vectors(gram: &[Vec<Rational>], bound: &Rational) -> Vec<Vec<BigInt>> {
    let n = gram.len();
    // q(c) = Σᵢ d[i][i]·(cᵢ + Σ_{j>i} d[i][j]·c_j)²
    let mut d = gram.to_vec();
    for i in 0..n {
        for j in i + 1..n {
            d[j][i] = d[i][j].clone();
            d[i][j] = &d[i][j] / &d[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let t = &d[k][i] * &d[i][l];
                d[k][l] -= t;
            }
        }
    }
    let mut out = Vec::new();
    let mut c = vec![BigInt::zero(); n];
    enumerate(&d, n, bound.clone(), &mut c, &mut out);
    out
}

fn enumerate(d: &Matrix<Rational>, i: usize, rem: Rational, c: &mut Vec<BigInt>, out: &mut Vec<Vec<BigInt>>) {
    if i == 0 {
        out.push(c.clone());
        return;
    }
    let i = i - 1;
    let n = d.len();
    let mut shift = Rational::zero();
    for j in i + 1..n {
        shift += &d[i][j] * Rational::from_integer(c[j].clone());
    }
    let cost = |x: &BigInt| {
        let t = Rational::from_integer(x.clone()) + &shift;
        &d[i][i] * &t * &t
    };
    let start = (-shift.clone()).floor().to_integer();
    let mut x = start.clone();
    loop {
        let q = cost(&x);
        if q > rem {
            break;
        }
        c[i] = x.clone();
        enumerate(d, i, &rem - q, c, out);
        x -= 1;
    }
    let mut x = start + 1;
    loop {
        let q = cost(&x);
        if q > rem {
            break;
        }
        c[i] = x.clone();
        enumerate(d, i, &rem - q, c, out);
        x += 1;
    }
    c[i] = BigInt::zero();
}

/// Invariants of a ‡-order that are preserved by isomorphisms of
/// orders with involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub ramified_places: Vec<Place>,
    pub reduced_discriminant: BigInt,
    pub maximal: bool,
    /// `None` for indefinite algebras, where the group is infinite.
    pub unit_group_order: Option<usize>,
    pub trace_ideal_plus_part: BigInt,
    /// `v_p(reduced discriminant)` for each prime dividing it.
    pub local_discriminant_valuations: BTreeMap<u64, u32>,
}

impl InvariantReport {
    /// Names of the fields on which two reports disagree.
    pub fn differences(&self, other: &InvariantReport) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.ramified_places != other.ramified_places {
            out.push("ramified_places");
        }
        if self.reduced_discriminant != other.reduced_discriminant {
            out.push("reduced_discriminant");
        }
        if self.maximal != other.maximal {
            out.push("maximal");
        }
        if self.unit_group_order != other.unit_group_order {
            out.push("unit_group_order");
        }
        if self.trace_ideal_plus_part != other.trace_ideal_plus_part {
            out.push("trace_ideal_plus_part");
        }
        if self.local_discriminant_valuations != other.local_discriminant_valuations {
            out.push("local_discriminant_valuations");
        }
        out
    }
}

pub fn invariant_report(order: &OrderLattice, inv: &Involution) -> Result<InvariantReport> {
    let ramified_places = order.algebra().ramified_places()?;
    let maximal = is_maximal_sharp_order(order, inv)?.maximal;
    let unit_group_order = if order.algebra().is_definite() {
        Some(unit_group(order)?.len())
    } else {
        None
    };
    let disc = order.reduced_discriminant().clone();
    let local_discriminant_valuations = arith::factorize(&disc)?.into_iter().collect();
    Ok(InvariantReport {
        ramified_places,
        reduced_discriminant: disc,
        maximal,
        unit_group_order,
        trace_ideal_plus_part: trace_ideal_plus_part(order, inv)?,
        local_discriminant_valuations,
    })
}
