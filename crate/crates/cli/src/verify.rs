//! `verify paper-examples`: replays the worked examples shipped under
//! `fixtures/paper/`. Items run in parallel; output is ordered by name.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::Value;

use qvahlen::groups::{
    generate_matrix_ring, plus_part_conjugation_constraint_at,
    verify_conjugacy_certificate, ConjugacyCertificate, Direction,
};
use qvahlen::json::*;
use qvahlen::order::{
    conjugate_order, invariant_report, is_maximal_sharp_order, is_order, plus_part,
    trace_ideal_plus_part, unit_group, OrderLattice,
};
use qvahlen::quaternion::Quaternion;
use qvahlen::scalars::{frac, rat, Rational};
use qvahlen::scan::{sharp_superorder_scan, DEFAULT_SCAN_PRIME_BOUND};
use qvahlen::vahlen::{build_diag_conjugator, is_member, spinor_matrix, VahlenMatrix};
use qvahlen::{linalg, Error, Involution, QuaternionAlgebra};

use crate::{read_json, CliError, CliResult};

macro_rules! embedded {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../fixtures/paper/", $name)))),*]
    };
}

const EMBEDDED: &[(&str, &str)] = embedded!(
    "conjugate_groups_sqrt3/certificate.json",
    "involution_twisted_orders/algebra.json",
    "involution_twisted_orders/conjugating_element.json",
    "involution_twisted_orders/involution.json",
    "involution_twisted_orders/order_o1.json",
    "involution_twisted_orders/order_o2.json",
    "involution_twisted_orders/printed_certificate.json",
    "local_nonconjugacy/algebra.json",
    "local_nonconjugacy/conjugating_element.json",
    "local_nonconjugacy/involution.json",
    "local_nonconjugacy/order_o1.json",
    "local_nonconjugacy/params.json",
    "nonisomorphic_orders/algebra.json",
    "nonisomorphic_orders/involution.json",
    "nonisomorphic_orders/order_o1.json",
    "nonisomorphic_orders/order_o2.json",
    "spinor_kernel/minus_identity.json",
);

/// Fixture source: a directory laid out like `fixtures/paper/`, or the
/// copy compiled into the binary.
#[derive(Debug, Clone)]
pub struct Fixtures {
    dir: Option<PathBuf>,
    scan_bound: u64,
}

impl Fixtures {
    pub fn embedded() -> Self {
        Fixtures {
            dir: None,
            scan_bound: DEFAULT_SCAN_PRIME_BOUND,
        }
    }

    pub fn from_dir(dir: impl Into<PathBuf>) -> Self {
        Fixtures {
            dir: Some(dir.into()),
            scan_bound: DEFAULT_SCAN_PRIME_BOUND,
        }
    }

    pub fn with_scan_bound(mut self, bound: u64) -> Self {
        self.scan_bound = bound;
        self
    }

    pub fn get(&self, name: &str) -> CliResult<Value> {
        match &self.dir {
            Some(dir) => read_json(&dir.join(name)),
            None => {
                let text = EMBEDDED
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, t)| *t)
                    .ok_or_else(|| CliError::Input(format!("no embedded fixture {name}")))?;
                Ok(parse_str(text)?)
            }
        }
    }

    fn algebra(&self, group: &str) -> CliResult<QuaternionAlgebra> {
        Ok(algebra_from_json(&self.get(&format!("{group}/algebra.json"))?)?)
    }

    fn involution(&self, group: &str, h: &QuaternionAlgebra) -> CliResult<Involution> {
        Ok(involution_from_json(h, &self.get(&format!("{group}/involution.json"))?)?)
    }

    /// An order file; fails with `NotAnOrder` if the lattice is not closed.
    fn order(&self, group: &str, file: &str, h: &QuaternionAlgebra) -> CliResult<OrderLattice> {
        let (h2, lattice) = order_file_from_json(&self.get(&format!("{group}/{file}"))?)?;
        if h2 != *h {
            return Err(Error::AlgebraMismatch.into());
        }
        if let Some(v) = is_order(h, &lattice)? {
            return Err(Error::NotAnOrder(v.to_string()).into());
        }
        Ok(OrderLattice::from_lattice(h, lattice)?)
    }

    fn element(&self, group: &str, h: &QuaternionAlgebra) -> CliResult<Quaternion<Rational>> {
        let v = self.get(&format!("{group}/conjugating_element.json"))?;
        let u = v.get("u").ok_or_else(|| Error::Parse("missing field \"u\"".into()))?;
        Ok(quaternion_from_json(h, u)?)
    }

    fn certificate(&self, name: &str) -> CliResult<ConjugacyCertificate> {
        Ok(certificate_from_json(&self.get(name)?)?)
    }
}

/// Outcome of one verifier item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&Fixtures) -> CliResult<(bool, String)>;

const ITEMS: &[(&str, Check)] = &[
    ("conjugate_groups_sqrt3/certificate_backward", sqrt3_backward),
    ("conjugate_groups_sqrt3/certificate_forward", sqrt3_forward),
    ("conjugate_groups_sqrt3/gamma_member", sqrt3_member),
    ("conjugate_groups_sqrt3/orders_nonisomorphic", sqrt3_orders_differ),
    ("involution_twisted_orders/conjugate_order", twisted_conjugate_order),
    ("involution_twisted_orders/constructed_conjugator_certifies", twisted_constructed),
    ("involution_twisted_orders/printed_conjugator_certifies", twisted_printed),
    ("involution_twisted_orders/scan_empty", twisted_scan),
    ("involution_twisted_orders/trace_ideals", twisted_trace_ideals),
    ("local_nonconjugacy/congruence_sample_holds", local_congruence_sample),
    ("local_nonconjugacy/grid_fails", local_grid),
    ("local_nonconjugacy/image_not_integral", local_image),
    ("nonisomorphic_orders/group_ring_witness", noniso_group_ring),
    ("nonisomorphic_orders/invariants_differ", noniso_invariants),
    ("nonisomorphic_orders/o1_maximal", noniso_o1_maximal),
    ("nonisomorphic_orders/o2_maximal", noniso_o2_maximal),
    ("nonisomorphic_orders/scan_empty", noniso_scan),
    ("nonisomorphic_orders/unit_counts", noniso_units),
    ("spinor_kernel/minus_identity", spinor_minus_identity),
];

pub fn item_names() -> Vec<&'static str> {
    ITEMS.iter().map(|(n, _)| *n).collect()
}

/// Runs every item; the result is sorted by item name.
pub fn run_all(fixtures: &Fixtures) -> Vec<ItemResult> {
    let mut out: Vec<ItemResult> = ITEMS
        .par_iter()
        .map(|(name, check)| {
            match check(fixtures) {
                Ok((passed, detail)) => ItemResult { name, passed, detail },
                Err(e) => ItemResult {
                    name,
                    passed: false,
                    detail: format!("error: {e}"),
                },
            }
        })
        .collect();
    out.sort_by_key(|r| r.name);
    out
}

/// One `PASS`/`FAIL` line per item, then a summary line.
pub fn render(results: &[ItemResult]) -> String {
    let mut s = String::new();
    for r in results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("{tag} {}: {}\n", r.name, r.detail));
    }
    let passed = results.iter().filter(|r| r.passed).count();
    s.push_str(&format!("{passed}/{} items passed\n", results.len()));
    if let Some(first) = results.iter().find(|r| !r.passed) {
        s.push_str(&format!("first failure: {}\n", first.name));
    }
    s
}

pub fn run_from(dir: Option<&Path>, scan_bound: u64) -> Vec<ItemResult> {
    let fixtures = dir.map_or_else(Fixtures::embedded, Fixtures::from_dir);
    run_all(&fixtures.with_scan_bound(scan_bound))
}

const NONISO: &str = "nonisomorphic_orders";
const TWISTED: &str = "involution_twisted_orders";
const LOCAL: &str = "local_nonconjugacy";
const SQRT3: &str = "conjugate_groups_sqrt3/certificate.json";
const PRINTED: &str = "involution_twisted_orders/printed_certificate.json";

fn noniso_setup(f: &Fixtures) -> CliResult<(Involution, OrderLattice, OrderLattice)> {
    let h = f.algebra(NONISO)?;
    let inv = f.involution(NONISO, &h)?;
    Ok((inv, f.order(NONISO, "order_o1.json", &h)?, f.order(NONISO, "order_o2.json", &h)?))
}

fn maximal_item(order: &OrderLattice, inv: &Involution) -> CliResult<(bool, String)> {
    let c = is_maximal_sharp_order(order, inv)?;
    Ok((
        c.maximal,
        format!(
            "sharp-stable {}, reduced discriminant {}, target {}",
            c.sharp_stable, c.order_discriminant, c.target
        ),
    ))
}

fn noniso_o1_maximal(f: &Fixtures) -> CliResult<(bool, String)> {
    let (inv, o1, _) = noniso_setup(f)?;
    maximal_item(&o1, &inv)
}

fn noniso_o2_maximal(f: &Fixtures) -> CliResult<(bool, String)> {
    let (inv, _, o2) = noniso_setup(f)?;
    maximal_item(&o2, &inv)
}

fn noniso_units(f: &Fixtures) -> CliResult<(bool, String)> {
    let (_, o1, o2) = noniso_setup(f)?;
    let (n1, n2) = (unit_group(&o1)?.len(), unit_group(&o2)?.len());
    Ok((n1 == 4 && n2 == 2, format!("|O1^x| = {n1}, |O2^x| = {n2} (expected 4, 2)")))
}

fn noniso_invariants(f: &Fixtures) -> CliResult<(bool, String)> {
    let (inv, o1, o2) = noniso_setup(f)?;
    let diff = invariant_report(&o1, &inv)?.differences(&invariant_report(&o2, &inv)?);
    Ok((!diff.is_empty(), format!("reports differ in {diff:?}")))
}

fn scan_pair(f: &Fixtures, inv: &Involution, o1: &OrderLattice, o2: &OrderLattice) -> CliResult<(bool, String)> {
    let n1 = sharp_superorder_scan(o1, inv, f.scan_bound)?.len();
    let n2 = sharp_superorder_scan(o2, inv, f.scan_bound)?.len();
    Ok((n1 == 0 && n2 == 0, format!("sharp superorders found: O1 {n1}, O2 {n2}")))
}

fn noniso_scan(f: &Fixtures) -> CliResult<(bool, String)> {
    let (inv, o1, o2) = noniso_setup(f)?;
    scan_pair(f, &inv, &o1, &o2)
}

/// `U(z)`, `L(z)` for `z` running over a basis of `O₁ ∩ H⁺`, plus
/// `diag(i, (i⁻¹)‡)`, generate `Mat(2, O₁)` as a ring.
fn noniso_group_ring(f: &Fixtures) -> CliResult<(bool, String)> {
    let (inv, o1, _) = noniso_setup(f)?;
    let h = o1.algebra().clone();
    let mut gens = Vec::new();
    for row in plus_part(&o1, &inv)?.basis() {
        let z = Quaternion::from_vec(h.clone(), &row)?;
        gens.push(VahlenMatrix::upper(&inv, &z)?.matrix().clone());
        gens.push(VahlenMatrix::lower(&inv, &z)?.matrix().clone());
    }
    gens.push(VahlenMatrix::diagonal(&inv, &h.basis_element(1))?.matrix().clone());
    let g = generate_matrix_ring(&gens, &o1)?;
    Ok((
        g.equals_full,
        format!("{} generators, ranks {:?}, equals Mat(2,O1): {}", gens.len(), g.ranks, g.equals_full),
    ))
}

fn certificate_direction(f: &Fixtures, dir: Direction) -> CliResult<(bool, String)> {
    let cert = f.certificate(SQRT3)?;
    let report = verify_conjugacy_certificate(&cert)?;
    let checks: Vec<_> = report.checks.iter().filter(|c| c.direction == dir).collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    let ok = !checks.is_empty() && passed == checks.len();
    let mut detail = format!("{passed}/{} generator images integral", checks.len());
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        detail.push_str(&format!("; first failure: {}", c.reason.as_deref().unwrap_or("not integral")));
    }
    Ok((ok, detail))
}

fn sqrt3_forward(f: &Fixtures) -> CliResult<(bool, String)> {
    certificate_direction(f, Direction::Forward)
}

fn sqrt3_backward(f: &Fixtures) -> CliResult<(bool, String)> {
    certificate_direction(f, Direction::Backward)
}

fn sqrt3_member(f: &Fixtures) -> CliResult<(bool, String)> {
    let file = matrix_file_from_json(&gamma_as_matrix_file(&f.get(SQRT3)?)?)?;
    let r = is_member(&file.involution, &file.matrix)?;
    let detail = if r.member {
        "all three clauses hold over Q(sqrt 3)".to_string()
    } else {
        format!("violated: {}", r.violations.join("; "))
    };
    Ok((r.member, detail))
}

/// Reads the `gamma` of a certificate file as a matrix file, so that
/// membership can be reported clause by clause.
fn gamma_as_matrix_file(cert: &Value) -> CliResult<Value> {
    let mut m = serde_json::Map::new();
    for key in ["algebra", "involution", "field"] {
        if let Some(v) = cert.get(key) {
            m.insert(key.into(), v.clone());
        }
    }
    let gamma = cert
        .get("gamma")
        .ok_or_else(|| Error::Parse("missing field \"gamma\"".into()))?;
    m.insert("matrix".into(), gamma.clone());
    Ok(Value::Object(m))
}

fn sqrt3_orders_differ(f: &Fixtures) -> CliResult<(bool, String)> {
    let cert = f.certificate(SQRT3)?;
    let inv = cert.involution();
    let r1 = invariant_report(cert.source(), inv)?;
    let r2 = invariant_report(cert.target(), inv)?;
    let diff = r1.differences(&r2);
    let ok = r1.maximal && r2.maximal && !diff.is_empty();
    Ok((
        ok,
        format!("groups conjugate over Q(sqrt 3), orders non-isomorphic (reports differ in {diff:?})"),
    ))
}

fn twisted_setup(f: &Fixtures) -> CliResult<(Involution, OrderLattice, OrderLattice)> {
    let h = f.algebra(TWISTED)?;
    let inv = f.involution(TWISTED, &h)?;
    Ok((inv, f.order(TWISTED, "order_o1.json", &h)?, f.order(TWISTED, "order_o2.json", &h)?))
}

fn twisted_trace_ideals(f: &Fixtures) -> CliResult<(bool, String)> {
    let (inv, o1, o2) = twisted_setup(f)?;
    let t1 = trace_ideal_plus_part(&o1, &inv)?;
    let t2 = trace_ideal_plus_part(&o2, &inv)?;
    Ok((
        t1 == BigInt::from(1) && t2 == BigInt::from(2),
        format!("trace ideals of O1, O2 generated by {t1}, {t2} (expected 1, 2)"),
    ))
}

fn twisted_conjugate_order(f: &Fixtures) -> CliResult<(bool, String)> {
    let (_, o1, o2) = twisted_setup(f)?;
    let u = f.element(TWISTED, o1.algebra())?;
    let c = conjugate_order(&u, &o1)?;
    Ok((c == o2, format!("u O1 u^-1 = O2 for u = {u}: {}", c == o2)))
}

fn twisted_scan(f: &Fixtures) -> CliResult<(bool, String)> {
    let (inv, o1, o2) = twisted_setup(f)?;
    scan_pair(f, &inv, &o1, &o2)
}

fn both_ways(cert: &ConjugacyCertificate) -> CliResult<(bool, String)> {
    let r = verify_conjugacy_certificate(cert)?;
    let back = verify_conjugacy_certificate(&cert.inverse())?;
    let passed = r.checks.iter().filter(|c| c.passed).count();
    Ok((
        r.valid && back.valid,
        format!("{passed}/{} generator checks pass; inverse certificate valid: {}", r.checks.len(), back.valid),
    ))
}

fn twisted_constructed(f: &Fixtures) -> CliResult<(bool, String)> {
    let (inv, o1, o2) = twisted_setup(f)?;
    let u = f.element(TWISTED, o1.algebra())?;
    let gamma = build_diag_conjugator(&inv, &u)?;
    let (ok, detail) = both_ways(&ConjugacyCertificate::new(gamma, o1, o2)?)?;
    Ok((ok, format!("diag(u/sqrt 2, (u^-1)^‡ sqrt 2): {detail}")))
}

/// The diagonal matrix as displayed alongside the twisted orders. It
/// fails `ad‡ − bc‡ = 1`, so this item fails honestly; the constructed
/// conjugator above is the corrected one.
fn twisted_printed(f: &Fixtures) -> CliResult<(bool, String)> {
    let raw = f.get(PRINTED)?;
    let file = matrix_file_from_json(&gamma_as_matrix_file(&raw)?)?;
    let r = is_member(&file.involution, &file.matrix)?;
    if !r.member {
        return Ok((false, format!("displayed matrix is not a member: {}", r.violations.join("; "))));
    }
    both_ways(&certificate_from_json(&raw)?)
}

fn local_setup(f: &Fixtures) -> CliResult<(Involution, OrderLattice, OrderLattice, Quaternion<Rational>, u64)> {
    let h = f.algebra(LOCAL)?;
    let inv = f.involution(LOCAL, &h)?;
    let o1 = f.order(LOCAL, "order_o1.json", &h)?;
    let u = f.element(LOCAL, &h)?;
    let o2 = conjugate_order(&u, &o1)?;
    let p = f
        .get(&format!("{LOCAL}/params.json"))?
        .get("p")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("params.json needs an integer \"p\"".into()))?;
    Ok((inv, o1, o2, u, p))
}

fn local_image(f: &Fixtures) -> CliResult<(bool, String)> {
    let (_, o1, _, u, _) = local_setup(f)?;
    let e11 = Quaternion::from_vec(o1.algebra().clone(), &fixture_basis(f)?[0])?;
    let uinv = u
        .inverse()
        .ok_or_else(|| Error::NotInvertible(u.to_string()))?;
    let image = &(&u * &e11) * &uinv;
    let outside = !o1.contains(&image);
    Ok((outside, format!("u E11 u^-1 = {image}; in O1: {}", !outside)))
}

/// The basis exactly as listed in the fixture (the lattice object keeps
/// a canonical basis instead).
fn fixture_basis(f: &Fixtures) -> CliResult<Vec<Vec<Rational>>> {
    let v = f.get(&format!("{LOCAL}/order_o1.json"))?;
    let rows = v
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing field \"basis\"".into()))?;
    Ok(rows
        .iter()
        .map(|r| rational_vec_from_json(r, "basis row", 4))
        .collect::<qvahlen::Result<_>>()?)
}

fn fixture_combination(f: &Fixtures, o: &OrderLattice, c: [Rational; 4]) -> CliResult<Quaternion<Rational>> {
    let basis = fixture_basis(f)?;
    let h = o.algebra().clone();
    let mut v = Quaternion::zero(h.clone());
    for (row, ck) in basis.iter().zip(c) {
        v = &v + &Quaternion::from_vec(h.clone(), row)?.scale(&ck);
    }
    Ok(v)
}

/// Every `v = Σ c_k e_k / p` with `0 ≤ c_k < p`, not all zero, violates
/// the `p`-local constraint.
fn local_grid(f: &Fixtures) -> CliResult<(bool, String)> {
    let (inv, o1, o2, _, p) = local_setup(f)?;
    let pi = p as i64;
    let total = pi.pow(4);
    let mut holds = Vec::new();
    for n in 1..total {
        let c = [n % pi, (n / pi) % pi, (n / (pi * pi)) % pi, (n / (pi * pi * pi)) % pi];
        let v = fixture_combination(f, &o1, c.map(|x| frac(x, pi)))?;
        if plus_part_conjugation_constraint_at(&v, &o1, &o2, &inv, p)? {
            holds.push(c);
        }
    }
    let detail = format!("{} of {} grid points satisfy the {p}-local constraint (expected 0)", holds.len(), total - 1);
    Ok((holds.is_empty(), detail))
}

/// Integral `v` with `v₃ ≡ −v₁`, `v₄ ≡ −v₂ (mod p)` satisfy the constraint.
fn local_congruence_sample(f: &Fixtures) -> CliResult<(bool, String)> {
    let (inv, o1, o2, _, p) = local_setup(f)?;
    let pi = p as i64;
    let mut checked = 0;
    let mut failed = 0;
    for v1 in -2..=2 {
        for v2 in -2..=2 {
            for t1 in -1..=1 {
                for t2 in -1..=1 {
                    let c = [v1, v2, -v1 + pi * t1, -v2 + pi * t2].map(rat);
                    let v = fixture_combination(f, &o1, c)?;
                    checked += 1;
                    if !o1.contains(&v) || !plus_part_conjugation_constraint_at(&v, &o1, &o2, &inv, p)? {
                        failed += 1;
                    }
                }
            }
        }
    }
    Ok((failed == 0, format!("{} of {checked} congruent samples satisfy the constraint", checked - failed)))
}

fn spinor_minus_identity(f: &Fixtures) -> CliResult<(bool, String)> {
    let file = matrix_file_from_json(&f.get("spinor_kernel/minus_identity.json")?)?;
    let m = file
        .rational()
        .ok_or_else(|| CliError::Input("spinor fixture must be rational".into()))?;
    let m = VahlenMatrix::new(&file.involution, m)?;
    let g = spinor_matrix(&m)?;
    let ok = g == linalg::identity(5);
    Ok((ok, format!("spinor image of -I is the 5x5 identity: {ok}")))
}

