//! Command implementations behind the `qvahlen` binary. Every command
//! returns a JSON report and a verdict; `main` maps verdicts and errors to
//! exit codes (0 success, 1 semantic failure, 2 input error).

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use qvahlen::groups::{fixes_base_group, verify_conjugacy_certificate};
use qvahlen::json::*;
use qvahlen::order::{
    is_maximal_sharp_order, is_order, is_sharp_stable, unit_group, OrderLattice,
};
use qvahlen::scan::{sharp_superorder_scan, DEFAULT_SCAN_PRIME_BOUND};
use qvahlen::vahlen::{decompose, evaluate_word, is_member, spinor_matrix, VahlenMatrix};
use qvahlen::{linalg, Error, QuadExt, Rational};

pub mod verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const SCAN_BOUND_VAR: &str = "QVAHLEN_SCAN_PRIME_BOUND";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Lib(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Input(_) => EXIT_INPUT,
            CliError::Lib(e) => {
                if is_input_error(e) {
                    EXIT_INPUT
                } else {
                    EXIT_FAILURE
                }
            }
        }
    }
}

/// Library errors caused by malformed or out-of-contract input, as
/// opposed to a mathematical predicate failing.
pub fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::RankDeficient { .. }
            | Error::DimensionMismatch(_)
            | Error::AlgebraMismatch
            | Error::InvolutionMismatch
            | Error::FieldMismatch(..)
            | Error::InvalidFieldParameter(_)
            | Error::NotPure(_)
            | Error::NotAnInvolution(_)
            | Error::ZeroArgument
            | Error::NotPrime(_)
            | Error::TooLargeToFactor(_)
            | Error::ScanPrimeTooLarge { .. }
            | Error::IndefiniteAlgebra
            | Error::NotInvertible(_)
    )
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// A JSON report and whether the command's predicate held.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub ok: bool,
}

impl Report {
    fn new(json: Value, ok: bool) -> Self {
        Report { json, ok }
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok {
            EXIT_OK
        } else {
            EXIT_FAILURE
        }
    }
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_str(&text)?)
}

/// Reads the superorder-scan prime bound from the environment.
pub fn scan_bound_from_env() -> CliResult<u64> {
    match std::env::var(SCAN_BOUND_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{SCAN_BOUND_VAR} must be a positive integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_SCAN_PRIME_BOUND),
    }
}

/// Integers as JSON numbers when they fit, strings otherwise.
pub fn int_json(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

/// `algebra info`: ramified places, discriminant, definiteness.
pub fn algebra_info(path: &Path) -> CliResult<Report> {
    let v = read_json(path)?;
    let h = algebra_from_json(v.get("algebra").unwrap_or(&v))?;
    let ramified: Vec<Value> = h
        .ramified_places()?
        .iter()
        .map(|p| match p.prime() {
            Some(q) => json!(q),
            None => json!("inf"),
        })
        .collect();
    let report = json!({
        "algebra": algebra_to_json(&h),
        "ramified": ramified,
        "disc": int_json(&h.discriminant()?),
        "definite": h.is_definite(),
        "division": h.is_division()?,
        "split": !h.is_division()?,
    });
    Ok(Report::new(report, true))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OrderFlags {
    pub maximal: bool,
    pub units: bool,
    pub scan: bool,
}

/// `order check`: order axioms, ‡-stability, and the requested extras.
/// Fails (exit 1) unless the lattice is a ‡-order and every requested
/// predicate holds.
pub fn order_check(order_path: &Path, inv_path: &Path, flags: OrderFlags, scan_bound: u64) -> CliResult<Report> {
    let (h, lattice) = order_file_from_json(&read_json(order_path)?)?;
    let inv = involution_from_json(&h, &read_json(inv_path)?)?;
    let mut out = Map::new();
    out.insert("basis".into(), lattice_to_json(&lattice));
    if let Some(violation) = is_order(&h, &lattice)? {
        out.insert("is_order".into(), json!(false));
        out.insert("order_violation".into(), json!(violation.to_string()));
        return Ok(Report::new(Value::Object(out), false));
    }
    let order = OrderLattice::from_lattice(&h, lattice)?;
    out.insert("is_order".into(), json!(true));
    let stable = is_sharp_stable(&order, &inv)?;
    out.insert("is_sharp_stable".into(), json!(stable));
    out.insert("reduced_discriminant".into(), int_json(order.reduced_discriminant()));
    let mut ok = stable;
    if flags.maximal {
        let cert = is_maximal_sharp_order(&order, &inv)?;
        ok &= cert.maximal;
        out.insert("maximal".into(), json!(cert.maximal));
        out.insert("maximality".into(), maximality_to_json(&cert));
    }
    if flags.units {
        let units = unit_group(&order)?;
        out.insert("units".into(), json!(units.len()));
        out.insert(
            "unit_elements".into(),
            Value::Array(units.iter().map(quaternion_to_json).collect()),
        );
    }
    if flags.scan {
        if stable {
            let found = sharp_superorder_scan(&order, &inv, scan_bound)?;
            ok &= found.is_empty();
            let listed: Vec<Value> = found
                .iter()
                .map(|o| {
                    json!({
                        "basis": lattice_to_json(o.lattice()),
                        "reduced_discriminant": int_json(o.reduced_discriminant()),
                    })
                })
                .collect();
            out.insert("superorders".into(), Value::Array(listed));
        } else {
            out.insert("superorders".into(), Value::Null);
        }
    }
    Ok(Report::new(Value::Object(out), ok))
}

fn matrix_file(path: &Path) -> CliResult<MatrixFile> {
    let v = read_json(path)?;
    if let Some(word) = v.get("word") {
        let h = algebra_from_json(v.get("algebra").ok_or_else(|| Error::Parse("missing field \"algebra\"".into()))?)?;
        let inv = involution_from_json(&h, v.get("involution").ok_or_else(|| Error::Parse("missing field \"involution\"".into()))?)?;
        let word = word_from_json(&h, word)?;
        let m = evaluate_word(&inv, &word)?;
        return Ok(MatrixFile {
            involution: inv,
            matrix: m.matrix().lift(),
        });
    }
    Ok(matrix_file_from_json(&v)?)
}

fn ext_vahlen_json(m: &VahlenMatrix<QuadExt>) -> Value {
    let mut out = Map::new();
    out.insert("algebra".into(), algebra_to_json(m.involution().algebra()));
    out.insert("involution".into(), involution_to_json(m.involution()));
    if let Ok(Some(d)) = m.matrix().field_parameter() {
        out.insert("field".into(), json!({ "d": d }));
    }
    out.insert("matrix".into(), ext_mat2_to_json(m.matrix()));
    Value::Object(out)
}

fn member_from_file(path: &Path) -> CliResult<VahlenMatrix<QuadExt>> {
    let f = matrix_file(path)?;
    Ok(VahlenMatrix::new(&f.involution, f.matrix)?)
}

fn rational_member(path: &Path) -> CliResult<VahlenMatrix<Rational>> {
    let f = matrix_file(path)?;
    let m = f
        .rational()
        .ok_or_else(|| CliError::Input("this command needs a matrix with rational entries".into()))?;
    Ok(VahlenMatrix::new(&f.involution, m)?)
}

/// `vahlen member`: the three defining clauses, with the failing ones named.
pub fn vahlen_member(path: &Path) -> CliResult<Report> {
    let f = matrix_file(path)?;
    let r = is_member(&f.involution, &f.matrix)?;
    Ok(Report::new(
        json!({"member": r.member, "violations": r.violations}),
        r.member,
    ))
}

pub fn vahlen_mul(left: &Path, right: &Path) -> CliResult<Report> {
    let a = member_from_file(left)?;
    let b = member_from_file(right)?;
    Ok(Report::new(ext_vahlen_json(&a.multiply(&b)?), true))
}

pub fn vahlen_inv(path: &Path) -> CliResult<Report> {
    let m = member_from_file(path)?;
    Ok(Report::new(ext_vahlen_json(&m.inverse()), true))
}

/// `vahlen decompose`: a word in `U(z)`, `L(z)` whose product is the input,
/// re-multiplied before it is printed.
pub fn vahlen_decompose(path: &Path) -> CliResult<Report> {
    let m = rational_member(path)?;
    let word = decompose(&m)?;
    let verified = evaluate_word(m.involution(), &word)? == m;
    Ok(Report::new(
        json!({"word": word_to_json(&word), "length": word.len(), "verified": verified}),
        verified,
    ))
}

/// `vahlen spin`: the 5×5 matrix of `M ↦ γ·M·γ̄ᵀ` on `(s, t, z)`.
pub fn vahlen_spin(path: &Path) -> CliResult<Report> {
    let m = rational_member(path)?;
    let g = spinor_matrix(&m)?;
    let q = m.involution().gram_q_h();
    let preserves = linalg::mat_mul(&linalg::mat_mul(&linalg::transpose(&g), &q), &g) == q;
    let det = linalg::det(&g);
    Ok(Report::new(
        json!({
            "spinor": matrix_to_json(&g),
            "preserves_q": preserves,
            "det": rational_to_json(&det),
            "gram_q_h": matrix_to_json(&q),
        }),
        true,
    ))
}

/// `group certify`: conjugates ring generators in both directions and
/// reports whether `γ` also normalizes `SL(2, Q)`.
pub fn group_certify(path: &Path) -> CliResult<Report> {
    let cert = certificate_from_json(&read_json(path)?)?;
    let report = verify_conjugacy_certificate(&cert)?;
    let base = fixes_base_group(cert.gamma())?;
    let mut out = Map::new();
    out.insert("certificate".into(), certificate_report_to_json(&report));
    out.insert("fixes_base_group".into(), base_group_report_to_json(&base));
    out.insert("field".into(), cert.field().map_or(Value::Null, |d| json!({ "d": d })));
    out.insert("valid".into(), json!(report.valid));
    Ok(Report::new(Value::Object(out), report.valid))
}
