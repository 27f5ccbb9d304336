//! Arithmetic subgroups `SL‡(2, O) = Mat(2, O) ∩ SL‡(2, H)`: integral
//! membership, the matrix ring a generator set spans, conjugacy
//! certificates, and local comparison data for pairs of orders.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::involution::Involution;
use crate::lattice::IntegerLattice;
use crate::linalg;
use crate::order::{is_sharp_stable, plus_part, OrderLattice};
use crate::quaternion::{Quaternion, QuaternionAlgebra};
use crate::scalars::{Field, QuadExt, Rational};
use crate::vahlen::{is_member, Mat2, VahlenMatrix};

/// A lattice in `Mat(2, H) ≅ Q¹⁶`, coordinates row-major over the four
/// entries, each over `(1, i, j, ij)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRingLattice {
    algebra: QuaternionAlgebra,
    lattice: IntegerLattice,
}

impl MatrixRingLattice {
    /// `Mat(2, O)`.
    pub fn full(order: &OrderLattice) -> Result<Self> {
        let mut gens = Vec::with_capacity(16);
        for slot in 0..4 {
            for e in order.basis() {
                let m = Mat2::unit(order.algebra(), slot / 2, slot % 2, e);
                gens.push(m.coords16());
            }
        }
        Ok(MatrixRingLattice {
            algebra: order.algebra().clone(),
            lattice: IntegerLattice::from_generators(&gens, 16)?,
        })
    }

    /// The Z-span of the given matrices.
    pub fn span(algebra: &QuaternionAlgebra, mats: &[Mat2<Rational>]) -> Result<Self> {
        let gens: Vec<Vec<Rational>> = mats.iter().map(Mat2::coords16).collect();
        Ok(MatrixRingLattice {
            algebra: algebra.clone(),
            lattice: IntegerLattice::from_generators(&gens, 16)?,
        })
    }

    pub fn lattice(&self) -> &IntegerLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn contains(&self, m: &Mat2<Rational>) -> bool {
        self.lattice.contains(&m.coords16())
    }

    pub fn basis(&self) -> Vec<Mat2<Rational>> {
        self.lattice
            .basis()
            .iter()
            .map(|row| Mat2::from_coords16(&self.algebra, row).expect("16 coordinates"))
            .collect()
    }

    pub fn is_multiplicatively_closed(&self) -> bool {
        let b = self.basis();
        b.iter()
            .all(|x| b.iter().all(|y| self.contains(&x.mul(y))))
    }
}

/// True iff `m ∈ SL‡(2, H)` and all entries lie in `O`. Entries must be
/// rational.
pub fn is_integral_member<F: Field>(m: &VahlenMatrix<F>, order: &OrderLattice) -> Result<bool> {
    if m.matrix().algebra() != order.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let r = m
        .matrix()
        .to_rational()
        .ok_or_else(|| Error::NotRational(format!("entries of {}", m.matrix())))?;
    Ok(is_member(m.involution(), &r)?.member && r.entries().iter().all(|q| order.contains(q)))
}

/// Outcome of [`generate_matrix_ring`].
#[derive(Debug, Clone, PartialEq)]
pub struct RingGeneration {
    pub ring: MatrixRingLattice,
    /// Number of product-closure rounds before the fixpoint.
    pub rounds: usize,
    /// Rank of the lattice after each round, starting with the span of
    /// `1` and the generators.
    pub ranks: Vec<usize>,
    pub equals_full: bool,
}

/// The smallest subring of `Mat(2, O)` containing `1` and `gens`, compared
/// against `Mat(2, O)`. Every generator must have entries in `O`.
pub fn generate_matrix_ring(gens: &[Mat2<Rational>], order: &OrderLattice) -> Result<RingGeneration> {
    let full = MatrixRingLattice::full(order)?;
    for g in gens {
        if g.algebra() != order.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if !full.contains(g) {
            return Err(Error::NotIntegral(format!("generator {g} has entries outside the order")));
        }
    }
    let mut start = vec![Mat2::identity(order.algebra())];
    start.extend(gens.iter().cloned());
    let mut ring = MatrixRingLattice::span(order.algebra(), &start)?;
    let mut ranks = vec![ring.rank()];
    let mut rounds = 0;
    loop {
        let b = ring.basis();
        let mut next = b.clone();
        for x in &b {
            for y in &b {
                let p = x.mul(y);
                if !ring.contains(&p) {
                    next.push(p);
                }
            }
        }
        if next.len() == b.len() {
            break;
        }
        ring = MatrixRingLattice::span(order.algebra(), &next)?;
        ranks.push(ring.rank());
        rounds += 1;
    }
    let equals_full = ring == full;
    Ok(RingGeneration {
        ring,
        rounds,
        ranks,
        equals_full,
    })
}

/// `E₁₂·e` for each basis vector `e` of `O`, and `E₂₁`. Together with `1`
/// these generate `Mat(2, O)` as a ring:
/// `E₁₂x·E₂₁ = E₁₁x`, `E₂₁·E₁₂x = E₂₂x`, `E₂₁·E₁₁x = E₂₁x`.
pub fn matrix_ring_generators(order: &OrderLattice) -> Vec<Mat2<Rational>> {
    let alg = order.algebra();
    let mut out: Vec<Mat2<Rational>> = order
        .basis()
        .into_iter()
        .map(|e| Mat2::unit(alg, 0, 1, e))
        .collect();
    out.push(Mat2::unit(alg, 1, 0, Quaternion::one(alg.clone())));
    out
}

/// An explicit `γ` claimed to satisfy `γ·SL‡(2, O₁)·γ⁻¹ = SL‡(2, O₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugacyCertificate {
    gamma: VahlenMatrix<QuadExt>,
    source: OrderLattice,
    target: OrderLattice,
}

impl ConjugacyCertificate {
    pub fn new(gamma: VahlenMatrix<QuadExt>, source: OrderLattice, target: OrderLattice) -> Result<Self> {
        let alg = gamma.involution().algebra();
        if source.algebra() != alg || target.algebra() != alg {
            return Err(Error::AlgebraMismatch);
        }
        Ok(ConjugacyCertificate {
            gamma,
            source,
            target,
        })
    }

    pub fn gamma(&self) -> &VahlenMatrix<QuadExt> {
        &self.gamma
    }

    pub fn source(&self) -> &OrderLattice {
        &self.source
    }

    pub fn target(&self) -> &OrderLattice {
        &self.target
    }

    pub fn involution(&self) -> &Involution {
        self.gamma.involution()
    }

    /// `d` with `γ` defined over `Q(√d)`; `None` when `γ` is rational.
    pub fn field(&self) -> Option<i64> {
        self.gamma.matrix().field_parameter().ok().flatten()
    }

    /// `(γ⁻¹, O₂, O₁)`.
    pub fn inverse(&self) -> Self {
        ConjugacyCertificate {
            gamma: self.gamma.inverse(),
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Direction {
    /// `γ·g·γ⁻¹` for `g` generating `Mat(2, O₁)`, checked against `O₂`.
    Forward,
    /// `γ⁻¹·g·γ` for `g` generating `Mat(2, O₂)`, checked against `O₁`.
    Backward,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorCheck {
    pub direction: Direction,
    pub generator: Mat2<Rational>,
    /// The conjugate, when it has rational entries.
    pub image: Option<Mat2<Rational>>,
    pub passed: bool,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub checks: Vec<GeneratorCheck>,
    pub valid: bool,
}

impl CertificateReport {
    pub fn first_failure(&self) -> Option<&GeneratorCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Conjugates ring generators of `Mat(2, O₁)` by `γ` and of `Mat(2, O₂)` by
/// `γ⁻¹`. When every conjugate is rational and lands in the other matrix
/// ring, `γ·Mat(2, O₁)·γ⁻¹ = Mat(2, O₂)`; intersecting with `SL‡(2, H)`
/// gives `γ·SL‡(2, O₁)·γ⁻¹ = SL‡(2, O₂)`.
pub fn verify_conjugacy_certificate(cert: &ConjugacyCertificate) -> Result<CertificateReport> {
    let mut checks = one_direction(cert.gamma(), cert.source(), cert.target(), Direction::Forward)?;
    checks.extend(one_direction(
        &cert.gamma().inverse(),
        cert.target(),
        cert.source(),
        Direction::Backward,
    )?);
    let valid = checks.iter().all(|c| c.passed);
    Ok(CertificateReport { checks, valid })
}

fn one_direction(
    gamma: &VahlenMatrix<QuadExt>,
    from: &OrderLattice,
    to: &OrderLattice,
    direction: Direction,
) -> Result<Vec<GeneratorCheck>> {
    let gens = matrix_ring_generators(from);
    let generated = generate_matrix_ring(&gens, from)?;
    if !generated.equals_full {
        return Err(Error::Inconsistent("ring generators do not span Mat(2, O)".into()));
    }
    let target = MatrixRingLattice::full(to)?;
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        let conj = gamma.conjugate(&g.lift())?;
        let (image, passed, reason) = match conj.to_rational() {
            None => (None, false, Some(format!("conjugate {conj} has irrational entries"))),
            Some(r) if target.contains(&r) => (Some(r), true, None),
            Some(r) => {
                let reason = format!("conjugate {r} has entries outside the target order");
                (Some(r), false, Some(reason))
            }
        };
        out.push(GeneratorCheck {
            direction,
            generator: g,
            image,
            passed,
            reason,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult<F> {
    pub probe: Mat2<Rational>,
    pub image: Mat2<F>,
    /// Every entry of the image is a rational scalar.
    pub scalar: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaseGroupReport<F> {
    pub probes: Vec<ProbeResult<F>>,
    pub fixed: bool,
}

/// Whether `γ·SL(2, Q)·γ⁻¹ = SL(2, Q)`, decided on the probes
/// `(1, 1; 0, 1)`, `(1, 0; 1, 1)` and `diag(2, 1/2)`: the two unipotents
/// force `γ` diagonal, and then the torus element forces `u·u‡` central.
pub fn fixes_base_group<F: Field>(gamma: &VahlenMatrix<F>) -> Result<BaseGroupReport<F>> {
    let alg = gamma.involution().algebra();
    let one = Quaternion::<Rational>::one(alg.clone());
    let zero = Quaternion::<Rational>::zero(alg.clone());
    let two = Rational::from_integer(2.into());
    let probes = [
        Mat2::new(one.clone(), one.clone(), zero.clone(), one.clone())?,
        Mat2::new(one.clone(), zero.clone(), one.clone(), one.clone())?,
        Mat2::new(
            one.scale(&two),
            zero.clone(),
            zero,
            one.scale(&two.recip()),
        )?,
    ];
    let mut out = Vec::with_capacity(3);
    for probe in probes {
        let image = gamma.conjugate(&probe.lift())?;
        let scalar = image
            .entries()
            .iter()
            .all(|q| q.is_scalar() && q.to_rational().is_some());
        out.push(ProbeResult {
            probe,
            image,
            scalar,
        });
    }
    let fixed = out.iter().all(|p| p.scalar);
    Ok(BaseGroupReport { probes: out, fixed })
}

/// Comparison of two orders at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalComparison {
    pub p: u64,
    pub disc_valuation_source: u32,
    pub disc_valuation_target: u32,
    /// `p`-parts of the elementary divisors of `O₁` relative to `O₂`.
    pub local_elementary_divisors: Vec<Rational>,
    /// The two orders coincide after tensoring with `Z_p`.
    pub lattices_agree: bool,
}

impl LocalComparison {
    pub fn agrees(&self) -> bool {
        self.lattices_agree && self.disc_valuation_source == self.disc_valuation_target
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalInvariantReport {
    /// Elementary divisors of `O₁` relative to `O₂`, ascending.
    pub elementary_divisors: Vec<Rational>,
    pub primes: Vec<LocalComparison>,
}

impl LocalInvariantReport {
    pub fn differing_primes(&self) -> Vec<u64> {
        self.primes.iter().filter(|c| !c.agrees()).map(|c| c.p).collect()
    }
}

/// Per-prime comparison of two ‡-orders, over the primes dividing
/// `disc(O₁)·disc(O₂)·disc(H)` and those dividing an elementary divisor of
/// the pair (where the lattices themselves differ).
pub fn local_invariant_report(
    o1: &OrderLattice,
    o2: &OrderLattice,
    inv: &Involution,
) -> Result<LocalInvariantReport> {
    if o1.algebra() != o2.algebra() || o1.algebra() != inv.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    if !is_sharp_stable(o1, inv)? || !is_sharp_stable(o2, inv)? {
        return Err(Error::NotSharpStable);
    }
    let divisors = o1.lattice().elementary_divisors(o2.lattice())?;
    let mut primes = BTreeSet::new();
    let disc_h = o1.algebra().discriminant()?;
    for n in [o1.reduced_discriminant(), o2.reduced_discriminant(), &disc_h] {
        primes.extend(arith::prime_divisors(n)?);
    }
    for d in &divisors {
        primes.extend(arith::prime_divisors(d.numer())?);
        primes.extend(arith::prime_divisors(d.denom())?);
    }
    let mut out = Vec::with_capacity(primes.len());
    for p in primes {
        let local: Vec<Rational> = divisors
            .iter()
            .map(|d| p_part(d, p))
            .collect();
        let lattices_agree = local.iter().all(One::is_one);
        out.push(LocalComparison {
            p,
            disc_valuation_source: arith::valuation(o1.reduced_discriminant(), p),
            disc_valuation_target: arith::valuation(o2.reduced_discriminant(), p),
            local_elementary_divisors: local,
            lattices_agree,
        });
    }
    Ok(LocalInvariantReport {
        elementary_divisors: divisors,
        primes: out,
    })
}

fn p_part(x: &Rational, p: u64) -> Rational {
    let v = arith::rational_valuation(x, p);
    let pp = Rational::from_integer(p.into());
    if v >= 0 {
        num_traits::pow(pp, v as usize)
    } else {
        num_traits::pow(pp.recip(), (-v) as usize)
    }
}

/// True iff `v·z·v‡ ∈ O₂` for every `z` in a Z-basis of `O₁ ∩ H⁺`.
pub fn plus_part_conjugation_constraint(
    v: &Quaternion<Rational>,
    o1: &OrderLattice,
    o2: &OrderLattice,
    inv: &Involution,
) -> Result<bool> {
    let images = plus_part_images(v, o1, o2, inv)?;
    Ok(images.iter().all(|x| o2.contains(x)))
}

/// The same constraint checked only at `p`: each `v·z·v‡` must have
/// `p`-integral coordinates over the basis of `O₂`.
pub fn plus_part_conjugation_constraint_at(
    v: &Quaternion<Rational>,
    o1: &OrderLattice,
    o2: &OrderLattice,
    inv: &Involution,
    p: u64,
) -> Result<bool> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let images = plus_part_images(v, o1, o2, inv)?;
    for x in images {
        let coords = rational_coordinates(o2, &x)?;
        if coords
            .iter()
            .any(|c| !c.is_zero() && arith::rational_valuation(c, p) < 0)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

fn plus_part_images(
    v: &Quaternion<Rational>,
    o1: &OrderLattice,
    o2: &OrderLattice,
    inv: &Involution,
) -> Result<Vec<Quaternion<Rational>>> {
    if v.algebra() != inv.algebra() || o2.algebra() != inv.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let v_sharp = inv.apply(v)?;
    plus_part(o1, inv)?
        .basis()
        .iter()
        .map(|z| {
            let z = Quaternion::from_vec(inv.algebra().clone(), z)?;
            Ok(&(v * &z) * &v_sharp)
        })
        .collect()
}

/// Coordinates of `x` over the canonical basis of `O`.
pub fn rational_coordinates(order: &OrderLattice, x: &Quaternion<Rational>) -> Result<Vec<Rational>> {
    let b: Vec<Vec<Rational>> = order.lattice().basis();
    linalg::solve_left(&b, x.coords())
        .ok_or_else(|| Error::Inconsistent("order basis is singular".into()))
}
