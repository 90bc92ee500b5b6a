//! JSON encodings shared by the CLI reports and the oracle cache.
//!
//! A Laurent polynomial is an object from exponent (as a string key) to
//! coefficient; coefficients outside `i64` are written as decimal strings.

use std::collections::BTreeMap;
use std::str::FromStr;

use fockpath_core::{LaurentPolynomial, Partition, PosSet, SignSequence};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

#[derive(Debug, thiserror::Error)]
#[error("malformed JSON: {0}")]
pub struct DecodeError(pub String);

pub fn poly_to_json(p: &LaurentPolynomial) -> Value {
    let mut m = Map::new();
    for (n, c) in p.terms() {
        let v = match c.to_i64() {
            Some(x) => json!(x),
            None => json!(c.to_string()),
        };
        m.insert(n.to_string(), v);
    }
    Value::Object(m)
}

pub fn poly_from_json(v: &Value) -> Result<LaurentPolynomial, DecodeError> {
    let obj = v.as_object().ok_or_else(|| DecodeError(format!("polynomial must be an object, got {v}")))?;
    let mut p = LaurentPolynomial::zero();
    for (k, c) in obj {
        let n: i64 = k.parse().map_err(|_| DecodeError(format!("bad exponent {k:?}")))?;
        let c = match c {
            Value::Number(x) => x.as_i64().map(BigInt::from),
            Value::String(s) => BigInt::from_str(s).ok(),
            _ => None,
        }
        .ok_or_else(|| DecodeError(format!("bad coefficient {c}")))?;
        p.add_term(n, c);
    }
    Ok(p)
}

pub fn partition_to_json(p: &Partition) -> Value {
    json!(p.parts())
}

pub fn partition_from_json(v: &Value) -> Result<Partition, DecodeError> {
    let parts: Vec<usize> = serde_json::from_value(v.clone()).map_err(|e| DecodeError(e.to_string()))?;
    Partition::new(parts).map_err(|e| DecodeError(e.to_string()))
}

pub fn set_to_json(s: &PosSet) -> Value {
    json!(s.iter().collect::<Vec<_>>())
}

pub fn sign_sequence_to_json(t: &SignSequence) -> Value {
    json!({ "plus": set_to_json(t.plus()), "minus": set_to_json(t.minus()) })
}

/// `G(μ)` as `[[λ, poly], …]` in decreasing lexicographic order of `λ`.
pub fn fock_terms_to_json<'a>(terms: impl Iterator<Item = (&'a Partition, &'a LaurentPolynomial)>) -> Value {
    Value::Array(terms.map(|(l, c)| json!([partition_to_json(l), poly_to_json(c)])).collect())
}

pub fn fock_terms_from_json(v: &Value) -> Result<BTreeMap<Partition, LaurentPolynomial>, DecodeError> {
    let arr = v.as_array().ok_or_else(|| DecodeError("terms must be an array".into()))?;
    let mut out = BTreeMap::new();
    for t in arr {
        match t.as_array().map(Vec::as_slice) {
            Some([l, c]) => {
                out.insert(partition_from_json(l)?, poly_from_json(c)?);
            }
            _ => return Err(DecodeError(format!("bad term {t}"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_round_trip() {
        let mut p = LaurentPolynomial::from_terms([(-1, 1), (2, -3)]);
        assert_eq!(poly_to_json(&p), json!({"-1": 1, "2": -3}));
        p.add_term(5, BigInt::from(i64::MAX) * 4);
        let j = poly_to_json(&p);
        assert_eq!(j["5"], json!("36893488147419103228"));
        assert_eq!(poly_from_json(&j).unwrap(), p);
        assert_eq!(poly_to_json(&LaurentPolynomial::zero()), json!({}));
        assert!(poly_from_json(&json!({"x": 1})).is_err());
        assert!(poly_from_json(&json!([1])).is_err());
    }

    #[test]
    fn partitions() {
        let p = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(partition_from_json(&partition_to_json(&p)).unwrap(), p);
        assert!(partition_from_json(&json!([1, 3])).is_err());
        assert_eq!(partition_to_json(&Partition::empty()), json!([]));
    }
}
