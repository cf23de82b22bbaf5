//! JSON encodings. Rationals are strings `"p/q"` (or `"p"`), polynomials are
//! coefficient arrays lowest degree first, matrices are arrays of rows.

use num_rational::BigRational;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{ExactMatrix, RationalPoly};
use crate::galois::{CycleTypeSample, SpecReport};
use crate::groups::GroupReport;
use crate::quadform::{FormError, SymmetricForm, WittInvariants};
use crate::trace_form::Certificate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Form(#[from] FormError),
}

fn bad<T>(msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Format(msg.into()))
}

pub fn parse_rational(s: &str) -> Result<BigRational, IoError> {
    let s = s.trim();
    if let Some((_, d)) = s.split_once('/') {
        if d.trim().parse::<i64>() == Ok(0) {
            return bad(format!("zero denominator in {s:?}"));
        }
    }
    s.parse().map_err(|_| IoError::Format(format!("not a rational: {s:?}")))
}

/// Comma-separated rationals, as accepted by `--diag`.
pub fn parse_rational_list(s: &str) -> Result<Vec<BigRational>, IoError> {
    s.split(',').map(parse_rational).collect()
}

pub fn rational_to_json(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

pub fn rational_from_json(v: &Value) -> Result<BigRational, IoError> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        _ => bad(format!("expected a rational string, got {v}")),
    }
}

fn rationals_from_json(v: &Value) -> Result<Vec<BigRational>, IoError> {
    v.as_array()
        .ok_or_else(|| IoError::Format(format!("expected an array, got {v}")))?
        .iter()
        .map(rational_from_json)
        .collect()
}

pub fn poly_to_json(f: &RationalPoly) -> Value {
    Value::Array(f.coeffs().iter().map(rational_to_json).collect())
}

pub fn poly_from_json(v: &Value) -> Result<RationalPoly, IoError> {
    Ok(RationalPoly::new(rationals_from_json(v)?))
}

pub fn matrix_to_json(m: &ExactMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(rational_to_json).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value) -> Result<ExactMatrix, IoError> {
    let rows = v
        .as_array()
        .ok_or_else(|| IoError::Format("matrix must be an array of rows".into()))?
        .iter()
        .map(rationals_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    ExactMatrix::from_rows(rows).map_err(|e| IoError::Format(e.to_string()))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value, IoError> {
    obj.get(key).ok_or_else(|| IoError::Format(format!("missing field {key:?}")))
}

fn u64_field(obj: &Value, key: &str) -> Result<u64, IoError> {
    field(obj, key)?
        .as_u64()
        .ok_or_else(|| IoError::Format(format!("field {key:?} must be a non-negative integer")))
}

pub fn form_to_json(f: &SymmetricForm) -> Value {
    json!({ "dim": f.dim(), "gram": matrix_to_json(f.gram()) })
}

/// Accepts `{"dim": n, "gram": [[..]]}` or `{"diag": [..]}`.
pub fn form_from_json(v: &Value) -> Result<SymmetricForm, IoError> {
    if let Some(diag) = v.get("diag") {
        return Ok(SymmetricForm::diagonal(&rationals_from_json(diag)?)?);
    }
    let gram = matrix_from_json(field(v, "gram")?)?;
    if let Some(dim) = v.get("dim") {
        if dim.as_u64() != Some(gram.rows() as u64) {
            return bad(format!("dim {dim} does not match a {}x{} gram matrix", gram.rows(), gram.cols()));
        }
    }
    Ok(SymmetricForm::new(gram)?)
}

pub fn invariants_to_json(w: &WittInvariants) -> Value {
    json!({
        "dim": w.dim,
        "disc": w.disc.to_string(),
        "signature": [w.signature.0, w.signature.1],
        "hasse_minus_one_at": w.hasse_minus_one_at.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    })
}

pub fn certificate_to_json(c: &Certificate) -> Value {
    json!({
        "D": form_to_json(&c.d),
        "A": matrix_to_json(&c.a),
        "f": poly_to_json(&c.f),
        "alpha": poly_to_json(&c.alpha),
        "P": matrix_to_json(&c.p),
        "gram": matrix_to_json(&c.gram),
        "seed": c.seed,
        "tries": c.tries,
    })
}

pub fn certificate_from_json(v: &Value) -> Result<Certificate, IoError> {
    Ok(Certificate {
        d: form_from_json(field(v, "D")?)?,
        a: matrix_from_json(field(v, "A")?)?,
        f: poly_from_json(field(v, "f")?)?,
        alpha: poly_from_json(field(v, "alpha")?)?,
        p: matrix_from_json(field(v, "P")?)?,
        gram: matrix_from_json(field(v, "gram")?)?,
        seed: u64_field(v, "seed")?,
        tries: u64_field(v, "tries")?,
    })
}

pub fn cycle_sample_to_json(s: &CycleTypeSample) -> Value {
    let entries: Vec<Value> = s
        .entries
        .iter()
        .map(|(t, c)| json!({ "type": t, "count": c }))
        .collect();
    json!({
        "f": poly_to_json(&s.f),
        "entries": entries,
        "primes_used": s.primes_used,
        "primes_skipped": s.primes_skipped,
    })
}

pub fn spec_report_to_json(r: &SpecReport) -> Value {
    json!({
        "n": r.n,
        "D": r.d.iter().map(rational_to_json).collect::<Vec<_>>(),
        "seed": r.seed,
        "A": matrix_to_json(&r.a),
        "f": poly_to_json(&r.f),
        "separable": r.separable,
        "irreducible": r.irreducible,
        "sn_verdict": r.sn_verdict.name(),
        "cycle_stats": cycle_sample_to_json(&r.cycle_stats),
    })
}

pub fn group_report_to_json(r: &GroupReport) -> Value {
    let mut lemma_b = Map::new();
    lemma_b.insert("derived".into(), r.lemma_b.derived.into());
    if let Some(e) = r.lemma_b.exhaustive {
        lemma_b.insert("exhaustive".into(), e.into());
    }
    let lemma_c: Vec<Value> = r
        .lemma_c
        .iter()
        .map(|row| json!({ "n": row.n, "index_H0": row.index_h0, "index_H1": row.index_h1, "ok": row.ok }))
        .collect();
    json!({
        "params": { "p": r.p, "k": r.k, "m": r.m, "alpha": r.alpha },
        "order": r.order,
        "lemma_a": r.lemma_a,
        "lemma_b": lemma_b,
        "lemma_c": lemma_c,
    })
}

/// Parses a JSON document.
pub fn parse_json(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
}
