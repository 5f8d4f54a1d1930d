//! JSON instance files.
//!
//! ```json
//! { "name": "table4", "machines": 2,
//!   "jobs": [ [ {"c": "1", "e": "1"}, 1 ], [ 2, {"c": "1", "e": "1"} ] ] }
//! ```
//!
//! Each processing time is a JSON number, a string `"p/q"` (or the canonical
//! `"c+e*eps"` form), or an object `{"c": .., "e": ..}` whose fields take the
//! same number or string forms. A bare value has no ε component.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::model::{Instance, ModelError};
use crate::numeric::{format_rational, parse_rational, EpsValue, Rational};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Field { field: field.into(), message: message.into() }
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let root: Value = serde_json::from_str(text)?;
    let obj = root.as_object().ok_or_else(|| field_err("<root>", "expected an object"))?;

    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(field_err("name", "expected a string")),
    };
    let machines = obj
        .get("machines")
        .ok_or_else(|| field_err("machines", "missing"))?
        .as_u64()
        .ok_or_else(|| field_err("machines", "expected a non-negative integer"))?
        as usize;
    let jobs = obj
        .get("jobs")
        .ok_or_else(|| field_err("jobs", "missing"))?
        .as_array()
        .ok_or_else(|| field_err("jobs", "expected an array of rows"))?;

    let mut times = Vec::with_capacity(jobs.len());
    for (j, row) in jobs.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| field_err(format!("jobs[{j}]"), "expected an array"))?;
        if row.len() != machines {
            return Err(field_err(
                format!("jobs[{j}]"),
                format!("has {} entries, `machines` is {machines}", row.len()),
            ));
        }
        let mut parsed = Vec::with_capacity(machines);
        for (i, t) in row.iter().enumerate() {
            let path = format!("jobs[{j}][{i}]");
            let v = parse_time(t, &path)?;
            if !v.is_positive() {
                return Err(field_err(path, format!("processing time must be positive, got {v}")));
            }
            parsed.push(v);
        }
        times.push(parsed);
    }
    Ok(Instance::new(name, machines, times)?)
}

fn parse_time(v: &Value, path: &str) -> Result<EpsValue, FormatError> {
    match v {
        Value::Object(map) => {
            for key in map.keys() {
                if key != "c" && key != "e" {
                    return Err(field_err(path, format!("unexpected key `{key}`")));
                }
            }
            let c = match map.get("c") {
                Some(x) => parse_scalar(x, &format!("{path}.c"))?,
                None => Rational::default(),
            };
            let e = match map.get("e") {
                Some(x) => parse_scalar(x, &format!("{path}.e"))?,
                None => Rational::default(),
            };
            Ok(EpsValue::new(c, e))
        }
        Value::String(s) => s.parse::<EpsValue>().map_err(|e| field_err(path, e.to_string())),
        _ => parse_scalar(v, path).map(EpsValue::constant),
    }
}

fn parse_scalar(v: &Value, path: &str) -> Result<Rational, FormatError> {
    match v {
        // serde_json keeps the literal digits, so "1.5" parses exactly.
        Value::Number(n) => parse_rational(&n.to_string()).map_err(|e| field_err(path, e.to_string())),
        Value::String(s) => parse_rational(s).map_err(|e| field_err(path, e.to_string())),
        _ => Err(field_err(path, "expected a number or a \"p/q\" string")),
    }
}

fn time_to_json(t: &EpsValue) -> Value {
    if t.e() == &Rational::default() {
        if t.c().is_integer() {
            if let Ok(n) = t.c().numer().to_string().parse::<i64>() {
                return json!(n);
            }
        }
        return json!(format_rational(t.c()));
    }
    json!({ "c": format_rational(t.c()), "e": format_rational(t.e()) })
}

pub fn instance_to_json(inst: &Instance) -> Value {
    let mut obj = Map::new();
    if let Some(name) = inst.name() {
        obj.insert("name".into(), json!(name));
    }
    obj.insert("machines".into(), json!(inst.machines()));
    let jobs: Vec<Value> = inst
        .rows()
        .iter()
        .map(|row| Value::Array(row.iter().map(time_to_json).collect()))
        .collect();
    obj.insert("jobs".into(), Value::Array(jobs));
    Value::Object(obj)
}

/// Pretty-printed JSON with a trailing newline. Output is a pure function of
/// the instance.
pub fn write_instance(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&instance_to_json(inst)).expect("serializable");
    s.push('\n');
    s
}
