//! JSON integers and a stable, compact pretty printer.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use serde_json::Value;
use std::fmt;
use toricbunch::Int;

/// Largest magnitude written as a JSON number; beyond it integers become strings.
const SAFE: i64 = 1 << 53;

/// An integer read from a JSON number or a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JInt(pub Int);

impl<'de> Deserialize<'de> for JInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = JInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JInt, E> {
                Ok(JInt(BigInt::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JInt, E> {
                Ok(JInt(BigInt::from(v)))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<JInt, E> {
                Err(E::custom(format!("expected an integer, found {v}")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JInt, E> {
                v.trim()
                    .parse()
                    .map(JInt)
                    .map_err(|_| E::custom(format!("not an integer: {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

pub fn int(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) if v.abs() <= SAFE => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn vector(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn vectors(vs: &[Vec<Int>]) -> Value {
    Value::Array(vs.iter().map(|v| vector(v)).collect())
}

pub fn indices(v: &[usize]) -> Value {
    Value::Array(v.iter().map(|&i| Value::from(i)).collect())
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

/// Pretty JSON where arrays of scalars stay on one line.
pub fn to_string(v: &Value) -> String {
    let mut out = String::new();
    write(v, 0, &mut out);
    out.push('\n');
    out
}

fn write(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth + 1);
    let end = "  ".repeat(depth);
    match v {
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) if a.iter().all(is_scalar) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad);
                write(x, depth + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&end);
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write(x, depth + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&end);
            out.push('}');
        }
        x => out.push_str(&x.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_integers_become_strings() {
        let small = BigInt::from(SAFE);
        let big = BigInt::from(SAFE) + 1;
        assert_eq!(int(&small), Value::from(SAFE));
        assert_eq!(int(&-small.clone()), Value::from(-SAFE));
        assert_eq!(int(&big), Value::String("9007199254740993".into()));
        let back: JInt = serde_json::from_str("\"9007199254740993\"").unwrap();
        assert_eq!(back.0, big);
        assert!(serde_json::from_str::<JInt>("1.5").is_err());
    }

    #[test]
    fn layout() {
        let v = serde_json::json!({"a": [[1, 2], [3]], "b": [], "c": "x"});
        assert_eq!(
            to_string(&v),
            "{\n  \"a\": [\n    [1, 2],\n    [3]\n  ],\n  \"b\": [],\n  \"c\": \"x\"\n}\n"
        );
    }
}
