//! Exact serialization: every rational is a `"p/q"` string.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

pub fn rat(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

pub fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn rats(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn opt_rat(x: Option<&BigRational>) -> Value {
    x.map(rat).unwrap_or(Value::Null)
}

/// `(x, y, ...)`.
pub fn tuple<T: ToString>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// RFC 4180 table with a header row.
pub fn to_csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
