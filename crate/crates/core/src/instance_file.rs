//! JSON file formats.
//!
//! Instance (probabilistic view):
//!
//! ```json
//! {"n": 2, "m": 2, "valuations": [["1", "0.5"], [0, {"num": 2, "den": 3}]], "prior": ["0.25", "0.75"]}
//! ```
//!
//! `prior` is optional and defaults to uniform. Each number may be a JSON
//! number, a decimal string, a `"p/q"` string or a `{"num", "den"}` pair;
//! decimals are read exactly (`"0.1"` is 1/10).
//!
//! Divisible-goods view: `{"n": .., "m": .., "psi": [[..], ..]}` with the
//! same number encodings.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::model::{AuctionInstance, PsiMatrix};
use crate::rational::{parse_rational, terminating_decimal};
use crate::{Error, Rational, Result};

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { location: location.into(), message: message.into() }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        parse_error(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })
}

fn integer_from_json(value: &Value, location: &str) -> Result<BigInt> {
    let text = match value {
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return Err(parse_error(location, format!("expected an integer, found {value}"))),
    };
    text.parse()
        .map_err(|_| parse_error(location, format!("expected an integer, found {value}")))
}

pub fn rational_from_json(value: &Value, location: &str) -> Result<Rational> {
    match value {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        Value::Object(obj) => {
            let num = obj.get("num").ok_or_else(|| parse_error(location, "missing \"num\""))?;
            let den = obj.get("den").ok_or_else(|| parse_error(location, "missing \"den\""))?;
            let num = integer_from_json(num, &format!("{location}.num"))?;
            let den = integer_from_json(den, &format!("{location}.den"))?;
            if den.is_zero() {
                return Err(parse_error(format!("{location}.den"), "denominator is zero"));
            }
            return Ok(Rational::new(num, den));
        }
        _ => None,
    }
    .ok_or_else(|| parse_error(location, format!("expected a number, found {value}")))
}

/// Terminating decimals as strings, everything else as `{"num", "den"}`.
pub fn rational_to_json(value: &Rational) -> Value {
    match terminating_decimal(value) {
        Some(text) => Value::String(text),
        None => json!({
            "num": value.numer().to_string(),
            "den": value.denom().to_string(),
        }),
    }
}

fn count_field(obj: &Map<String, Value>, key: &str) -> Result<Option<usize>> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|x| Some(x as usize))
            .ok_or_else(|| parse_error(key, format!("expected a nonnegative integer, found {v}"))),
    }
}

fn vector_from_json(value: &Value, location: &str) -> Result<Vec<Rational>> {
    let items = value
        .as_array()
        .ok_or_else(|| parse_error(location, format!("expected an array, found {value}")))?;
    items
        .iter()
        .enumerate()
        .map(|(k, x)| rational_from_json(x, &format!("{location}[{k}]")))
        .collect()
}

fn matrix_from_json(obj: &Map<String, Value>, key: &str) -> Result<Vec<Vec<Rational>>> {
    let rows = obj
        .get(key)
        .ok_or_else(|| parse_error(key, "missing field"))?
        .as_array()
        .ok_or_else(|| parse_error(key, "expected an array of rows"))?;
    let matrix: Vec<Vec<Rational>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| vector_from_json(row, &format!("{key}[{i}]")))
        .collect::<Result<_>>()?;
    if matrix.is_empty() {
        return Err(parse_error(key, "need at least one bidder"));
    }
    let m = matrix[0].len();
    if let Some(i) = matrix.iter().position(|r| r.len() != m) {
        return Err(parse_error(
            format!("{key}[{i}]"),
            format!("row has {} entries, row 0 has {m}", matrix[i].len()),
        ));
    }
    check_dims(obj, key, matrix.len(), m)?;
    Ok(matrix)
}

fn check_dims(obj: &Map<String, Value>, key: &str, rows: usize, cols: usize) -> Result<()> {
    if let Some(n) = count_field(obj, "n")? {
        if n != rows {
            return Err(parse_error("n", format!("n = {n} but {key} has {rows} rows")));
        }
    }
    if let Some(m) = count_field(obj, "m")? {
        if m != cols {
            return Err(parse_error("m", format!("m = {m} but {key} rows have {cols} entries")));
        }
    }
    Ok(())
}

fn as_object(value: &Value) -> Result<&Map<String, Value>> {
    value.as_object().ok_or_else(|| parse_error("top level", "expected a JSON object"))
}

pub fn parse_instance(text: &str) -> Result<AuctionInstance> {
    let value = parse_json(text)?;
    let obj = as_object(&value)?;
    let valuations = matrix_from_json(obj, "valuations")?;
    match obj.get("prior") {
        None | Some(Value::Null) => AuctionInstance::with_uniform_prior(valuations),
        Some(p) => AuctionInstance::new(valuations, vector_from_json(p, "prior")?),
    }
}

pub fn parse_psi(text: &str) -> Result<PsiMatrix> {
    let value = parse_json(text)?;
    PsiMatrix::new(matrix_from_json(as_object(&value)?, "psi")?)
}

/// A prior file: either a bare array or an object with a `prior` array.
pub fn parse_prior(text: &str) -> Result<Vec<Rational>> {
    let value = parse_json(text)?;
    match &value {
        Value::Array(_) => vector_from_json(&value, "prior"),
        Value::Object(obj) => vector_from_json(obj.get("prior").ok_or_else(|| parse_error("prior", "missing field"))?, "prior"),
        _ => Err(parse_error("top level", "expected an array or an object with \"prior\"")),
    }
}

fn matrix_to_json(rows: &[Vec<Rational>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(rational_to_json).collect()))
            .collect(),
    )
}

pub fn instance_to_json(instance: &AuctionInstance) -> Value {
    json!({
        "n": instance.n(),
        "m": instance.m(),
        "valuations": matrix_to_json(instance.valuations()),
        "prior": Value::Array(instance.prior().iter().map(rational_to_json).collect()),
    })
}

pub fn psi_to_json(psi: &PsiMatrix) -> Value {
    json!({
        "n": psi.n(),
        "m": psi.m(),
        "psi": matrix_to_json(psi.rows()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_psi;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn parses_all_number_encodings() {
        let text = r#"{"n": 2, "m": 2,
            "valuations": [["1", "0.5"], [3, {"num": 2, "den": 3}]],
            "prior": ["0.25", "3/4"]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.valuation(0, 1), &ratio(1, 2));
        assert_eq!(inst.valuation(1, 0), &int(3));
        assert_eq!(inst.valuation(1, 1), &ratio(2, 3));
        assert_eq!(inst.prior(), &[ratio(1, 4), ratio(3, 4)]);
    }

    #[test]
    fn json_floats_are_read_as_written() {
        let inst = parse_instance(r#"{"valuations": [[0.1, 2.5e-1]]}"#).unwrap();
        assert_eq!(inst.valuation(0, 0), &ratio(1, 10));
        assert_eq!(inst.valuation(0, 1), &ratio(1, 4));
        assert_eq!(inst.prior(), &[ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn reports_locations() {
        let err = parse_instance(r#"{"valuations": [[1, 2], [3, "x"]]}"#).unwrap_err();
        assert_eq!(err, parse_error("valuations[1][1]", "expected a number, found \"x\""));
        let err = parse_instance("{\"valuations\": \n [[1, 2]").unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location.starts_with("line 2")));
        let err = parse_instance(r#"{"n": 3, "valuations": [[1]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location == "n"));
        let err = parse_instance(r#"{"valuations": [[1], [1, 2]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location == "valuations[1]"));
        let err = parse_instance(r#"{"valuations": [[{"num": 1, "den": 0}]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location == "valuations[0][0].den"));
        assert!(parse_instance(r#"{"prior": [1]}"#).is_err());
        assert!(parse_instance("[]").is_err());
    }

    #[test]
    fn bad_prior_names_the_constraint() {
        let err = parse_instance(r#"{"valuations": [[1, 2]], "prior": ["0.5", "0.4"]}"#).unwrap_err();
        assert_eq!(err, Error::BadPrior("prior sums to 9/10, not 1".into()));
    }

    #[test]
    fn prior_files() {
        assert_eq!(parse_prior(r#"["0.5", "1/2"]"#).unwrap(), vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(parse_prior(r#"{"prior": [1]}"#).unwrap(), vec![int(1)]);
        assert!(parse_prior("3").is_err());
    }

    #[test]
    fn psi_files() {
        let psi = parse_psi(r#"{"n": 2, "m": 1, "psi": [["1/3"], [0]]}"#).unwrap();
        assert_eq!(psi.get(0, 0), &ratio(1, 3));
        assert!(parse_psi(r#"{"valuations": [[1]]}"#).is_err());
    }

    #[test]
    fn rational_encoding() {
        assert_eq!(rational_to_json(&ratio(3, 8)), json!("0.375"));
        assert_eq!(rational_to_json(&int(-4)), json!("-4"));
        assert_eq!(rational_to_json(&ratio(1, 3)), json!({"num": "1", "den": "3"}));
    }

    proptest! {
        #[test]
        fn instance_json_round_trip(
            rows in prop::collection::vec(prop::collection::vec((0i64..50, 1i64..12), 3), 1..4),
            weights in prop::collection::vec(1i64..9, 3),
        ) {
            let valuations = rows.iter().map(|r| r.iter().map(|&(a, b)| ratio(a, b)).collect()).collect();
            let total: i64 = weights.iter().sum();
            let prior = weights.iter().map(|&w| ratio(w, total)).collect();
            let inst = AuctionInstance::new(valuations, prior).unwrap();
            let text = instance_to_json(&inst).to_string();
            prop_assert_eq!(parse_instance(&text).unwrap(), inst.clone());
            let psi = build_psi(&inst);
            prop_assert_eq!(parse_psi(&psi_to_json(&psi).to_string()).unwrap(), psi);
        }
    }
}
