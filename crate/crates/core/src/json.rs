//! JSON encodings of algebras, involutions, orders, matrices and
//! certificates. Rationals travel as strings (`"3"`, `"-1/2"`); JSON
//! integers are accepted on input. Objects are emitted with sorted keys.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::groups::{
    BaseGroupReport, CertificateReport, ConjugacyCertificate, LocalInvariantReport,
};
use crate::involution::Involution;
use crate::lattice::IntegerLattice;
use crate::order::{InvariantReport, MaximalityCertificate, OrderLattice};
use crate::quaternion::{Quaternion, QuaternionAlgebra};
use crate::scalars::{format_rational, parse_rational, Field, QuadExt, Rational};
use crate::vahlen::{Generator, Mat2, VahlenMatrix};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, what: &str, len: Option<usize>) -> Result<&'a Vec<Value>> {
    let a = v
        .as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array")))?;
    if let Some(n) = len {
        if a.len() != n {
            return Err(parse_err(format!("{what} must have {n} entries, got {}", a.len())));
        }
    }
    Ok(a)
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap_or(0).into())),
        _ => Err(parse_err(format!("expected a rational string, got {v}"))),
    }
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

/// A rational, or `{"d", "c0", "c1"}` for `c0 + c1·√d`. `d` may be omitted
/// when `default_d` supplies it.
pub fn ext_scalar_from_json(v: &Value, default_d: Option<i64>) -> Result<QuadExt> {
    if !v.is_object() {
        return Ok(QuadExt::from_rational(rational_from_json(v)?));
    }
    let d = match v.get("d") {
        Some(d) => d
            .as_i64()
            .ok_or_else(|| parse_err("field parameter \"d\" must be an integer"))?,
        None => default_d.ok_or_else(|| parse_err("missing field \"d\""))?,
    };
    if let Some(expected) = default_d {
        if expected != d {
            return Err(Error::FieldMismatch(expected, d));
        }
    }
    let c0 = v.get("c0").map(rational_from_json).transpose()?.unwrap_or_default();
    let c1 = v.get("c1").map(rational_from_json).transpose()?.unwrap_or_default();
    QuadExt::new(d, c0, c1)
}

pub fn ext_scalar_to_json(x: &QuadExt) -> Value {
    match x.field_parameter() {
        Some(d) => json!({
            "d": d,
            "c0": rational_to_json(x.c0()),
            "c1": rational_to_json(x.c1()),
        }),
        None => rational_to_json(x.c0()),
    }
}

pub fn algebra_from_json(v: &Value) -> Result<QuaternionAlgebra> {
    QuaternionAlgebra::new(rational_from_json(field(v, "a")?)?, rational_from_json(field(v, "b")?)?)
}

pub fn algebra_to_json(h: &QuaternionAlgebra) -> Value {
    json!({"a": rational_to_json(h.a()), "b": rational_to_json(h.b())})
}

pub fn rational_vec_from_json(v: &Value, what: &str, len: usize) -> Result<Vec<Rational>> {
    array(v, what, Some(len))?.iter().map(rational_from_json).collect()
}

pub fn quaternion_from_json(h: &QuaternionAlgebra, v: &Value) -> Result<Quaternion<Rational>> {
    Quaternion::from_vec(h.clone(), &rational_vec_from_json(v, "quaternion", 4)?)
}

pub fn quaternion_to_json(x: &Quaternion<Rational>) -> Value {
    Value::Array(x.coords().iter().map(rational_to_json).collect())
}

pub fn ext_quaternion_from_json(
    h: &QuaternionAlgebra,
    v: &Value,
    default_d: Option<i64>,
) -> Result<Quaternion<QuadExt>> {
    let coords: Vec<QuadExt> = array(v, "quaternion", Some(4))?
        .iter()
        .map(|c| ext_scalar_from_json(c, default_d))
        .collect::<Result<_>>()?;
    Quaternion::from_vec(h.clone(), &coords)
}

pub fn ext_quaternion_to_json(x: &Quaternion<QuadExt>) -> Value {
    Value::Array(x.coords().iter().map(ext_scalar_to_json).collect())
}

/// `{"mu": [4]}` or `{"map": 4×4}` (column convention: the image of
/// `x` has coordinates `map · coords(x)`).
pub fn involution_from_json(h: &QuaternionAlgebra, v: &Value) -> Result<Involution> {
    match (v.get("mu"), v.get("map")) {
        (Some(mu), None) => Involution::new(quaternion_from_json(h, mu)?),
        (None, Some(map)) => {
            let rows: Vec<Vec<Rational>> = array(map, "map", Some(4))?
                .iter()
                .map(|r| rational_vec_from_json(r, "map row", 4))
                .collect::<Result<_>>()?;
            Involution::from_linear_map(h, &rows)
        }
        _ => Err(parse_err("involution needs exactly one of \"mu\" or \"map\"")),
    }
}

pub fn involution_to_json(inv: &Involution) -> Value {
    json!({"mu": quaternion_to_json(inv.mu())})
}

/// A rank-4 lattice from basis rows; rank deficiency is an input error.
pub fn basis_from_json(v: &Value) -> Result<IntegerLattice> {
    let rows: Vec<Vec<Rational>> = array(v, "basis", None)?
        .iter()
        .map(|r| rational_vec_from_json(r, "basis vector", 4))
        .collect::<Result<_>>()?;
    crate::lattice::lattice_canonicalize(&rows, 4)
}

pub fn lattice_to_json(l: &IntegerLattice) -> Value {
    Value::Array(
        l.basis()
            .iter()
            .map(|r| Value::Array(r.iter().map(rational_to_json).collect()))
            .collect(),
    )
}

/// `{"algebra", "basis"}`: the algebra and the canonical lattice, which
/// may still fail to be an order.
pub fn order_file_from_json(v: &Value) -> Result<(QuaternionAlgebra, IntegerLattice)> {
    Ok((algebra_from_json(field(v, "algebra")?)?, basis_from_json(field(v, "basis")?)?))
}

pub fn order_from_json(h: &QuaternionAlgebra, basis: &Value) -> Result<OrderLattice> {
    OrderLattice::from_lattice(h, basis_from_json(basis)?)
}

pub fn order_to_json(o: &OrderLattice) -> Value {
    json!({"algebra": algebra_to_json(o.algebra()), "basis": lattice_to_json(o.lattice())})
}

pub fn mat2_from_json(h: &QuaternionAlgebra, v: &Value, default_d: Option<i64>) -> Result<Mat2<QuadExt>> {
    let rows = array(v, "matrix", Some(2))?;
    let mut entries = Vec::with_capacity(4);
    for r in rows {
        for e in array(r, "matrix row", Some(2))? {
            entries.push(ext_quaternion_from_json(h, e, default_d)?);
        }
    }
    let [a, b, c, d]: [Quaternion<QuadExt>; 4] = entries
        .try_into()
        .map_err(|_| parse_err("matrix must be 2×2"))?;
    Mat2::new(a, b, c, d)
}

pub fn mat2_to_json(m: &Mat2<Rational>) -> Value {
    json!([
        [quaternion_to_json(&m.a), quaternion_to_json(&m.b)],
        [quaternion_to_json(&m.c), quaternion_to_json(&m.d)],
    ])
}

pub fn ext_mat2_to_json(m: &Mat2<QuadExt>) -> Value {
    json!([
        [ext_quaternion_to_json(&m.a), ext_quaternion_to_json(&m.b)],
        [ext_quaternion_to_json(&m.c), ext_quaternion_to_json(&m.d)],
    ])
}

/// Generic-field matrix output: rational entries as strings, others as
/// extension objects.
pub fn any_mat2_to_json<F: Field>(m: &Mat2<F>) -> Value {
    match m.to_rational() {
        Some(r) => mat2_to_json(&r),
        None => {
            let lift = |q: &Quaternion<F>| {
                Value::Array(
                    q.coords()
                        .iter()
                        .map(|c| match c.to_rational() {
                            Some(r) => rational_to_json(&r),
                            None => Value::String(c.to_string()),
                        })
                        .collect(),
                )
            };
            json!([[lift(&m.a), lift(&m.b)], [lift(&m.c), lift(&m.d)]])
        }
    }
}

/// A matrix file `{"algebra", "involution", "matrix"}`; the matrix need
/// not be a member.
pub struct MatrixFile {
    pub involution: Involution,
    pub matrix: Mat2<QuadExt>,
}

impl MatrixFile {
    pub fn rational(&self) -> Option<Mat2<Rational>> {
        self.matrix.to_rational()
    }
}

pub fn matrix_file_from_json(v: &Value) -> Result<MatrixFile> {
    let h = algebra_from_json(field(v, "algebra")?)?;
    let involution = involution_from_json(&h, field(v, "involution")?)?;
    let d = v
        .get("field")
        .map(|f| field(f, "d")?.as_i64().ok_or_else(|| parse_err("\"d\" must be an integer")))
        .transpose()?;
    let matrix = mat2_from_json(&h, field(v, "matrix")?, d)?;
    Ok(MatrixFile { involution, matrix })
}

pub fn vahlen_to_json(m: &VahlenMatrix<Rational>) -> Value {
    json!({
        "algebra": algebra_to_json(m.involution().algebra()),
        "involution": involution_to_json(m.involution()),
        "matrix": mat2_to_json(m.matrix()),
    })
}

pub fn word_to_json(word: &[Generator]) -> Value {
    Value::Array(
        word.iter()
            .map(|g| match g {
                Generator::Upper(z) => json!({"upper": quaternion_to_json(z)}),
                Generator::Lower(z) => json!({"lower": quaternion_to_json(z)}),
            })
            .collect(),
    )
}

pub fn word_from_json(h: &QuaternionAlgebra, v: &Value) -> Result<Vec<Generator>> {
    array(v, "word", None)?
        .iter()
        .map(|g| match (g.get("upper"), g.get("lower")) {
            (Some(z), None) => Ok(Generator::Upper(quaternion_from_json(h, z)?)),
            (None, Some(z)) => Ok(Generator::Lower(quaternion_from_json(h, z)?)),
            _ => Err(parse_err("generator needs exactly one of \"upper\" or \"lower\"")),
        })
        .collect()
}

pub fn matrix_to_json(m: &[Vec<Rational>]) -> Value {
    Value::Array(
        m.iter()
            .map(|r| Value::Array(r.iter().map(rational_to_json).collect()))
            .collect(),
    )
}

/// `{"algebra", "involution", "field": {"d"}, "gamma", "source_order",
/// "target_order"}` with the orders given as basis arrays.
pub fn certificate_from_json(v: &Value) -> Result<ConjugacyCertificate> {
    let h = algebra_from_json(field(v, "algebra")?)?;
    let inv = involution_from_json(&h, field(v, "involution")?)?;
    let d = match v.get("field") {
        Some(f) => Some(
            field(f, "d")?
                .as_i64()
                .ok_or_else(|| parse_err("\"d\" must be an integer"))?,
        ),
        None => None,
    };
    let gamma = mat2_from_json(&h, field(v, "gamma")?, d)?;
    let gamma = VahlenMatrix::new(&inv, gamma)?;
    let source = order_from_json(&h, field(v, "source_order")?)?;
    let target = order_from_json(&h, field(v, "target_order")?)?;
    ConjugacyCertificate::new(gamma, source, target)
}

pub fn certificate_to_json(c: &ConjugacyCertificate) -> Value {
    let mut m = Map::new();
    m.insert("algebra".into(), algebra_to_json(c.source().algebra()));
    m.insert("involution".into(), involution_to_json(c.involution()));
    if let Some(d) = c.field() {
        m.insert("field".into(), json!({"d": d}));
    }
    m.insert("gamma".into(), ext_mat2_to_json(c.gamma().matrix()));
    m.insert("source_order".into(), lattice_to_json(c.source().lattice()));
    m.insert("target_order".into(), lattice_to_json(c.target().lattice()));
    Value::Object(m)
}

pub fn certificate_report_to_json(r: &CertificateReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("direction".into(), json!(c.direction.as_str()));
            m.insert("generator".into(), mat2_to_json(&c.generator));
            m.insert(
                "image".into(),
                c.image.as_ref().map_or(Value::Null, mat2_to_json),
            );
            m.insert("passed".into(), json!(c.passed));
            if let Some(reason) = &c.reason {
                m.insert("reason".into(), json!(reason));
            }
            Value::Object(m)
        })
        .collect();
    json!({"generators": checks, "valid": r.valid})
}

pub fn base_group_report_to_json<F: Field>(r: &BaseGroupReport<F>) -> Value {
    let probes: Vec<Value> = r
        .probes
        .iter()
        .map(|p| {
            json!({
                "probe": mat2_to_json(&p.probe),
                "image": any_mat2_to_json(&p.image),
                "scalar": p.scalar,
            })
        })
        .collect();
    json!({"fixed": r.fixed, "probes": probes})
}

pub fn local_report_to_json(r: &LocalInvariantReport) -> Value {
    let primes: Vec<Value> = r
        .primes
        .iter()
        .map(|c| {
            json!({
                "p": c.p,
                "disc_valuation_source": c.disc_valuation_source,
                "disc_valuation_target": c.disc_valuation_target,
                "local_elementary_divisors": c.local_elementary_divisors.iter().map(rational_to_json).collect::<Vec<_>>(),
                "lattices_agree": c.lattices_agree,
                "agrees": c.agrees(),
            })
        })
        .collect();
    json!({
        "elementary_divisors": r.elementary_divisors.iter().map(rational_to_json).collect::<Vec<_>>(),
        "primes": primes,
        "differing_primes": r.differing_primes(),
    })
}

pub fn maximality_to_json(c: &MaximalityCertificate) -> Value {
    json!({
        "sharp_stable": c.sharp_stable,
        "algebra_discriminant": c.algebra_discriminant.to_string(),
        "involution_iota": c.involution_iota.to_string(),
        "target": c.target.to_string(),
        "order_discriminant": c.order_discriminant.to_string(),
        "maximal": c.maximal,
        "note": c.note,
    })
}

pub fn invariant_report_to_json(r: &InvariantReport) -> Value {
    let local: Map<String, Value> = r
        .local_discriminant_valuations
        .iter()
        .map(|(p, e)| (p.to_string(), json!(e)))
        .collect();
    json!({
        "ramified_places": r.ramified_places.iter().map(|p| json!(p.to_string())).collect::<Vec<_>>(),
        "reduced_discriminant": r.reduced_discriminant.to_string(),
        "maximal": r.maximal,
        "unit_group_order": r.unit_group_order,
        "trace_ideal_plus_part": r.trace_ideal_plus_part.to_string(),
        "local_discriminant_valuations": Value::Object(local),
    })
}

/// Canonical text: pretty-printed with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn parse_str(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| parse_err(e.to_string()))
}
