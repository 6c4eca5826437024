//! Report serialization. Keys keep insertion order, floats are rounded to
//! 12 significant digits, and rationals are written as `"p/q"`.

use addcomb_core::{GroupSet, GroupSpec, Ratio};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Always `p/q`, including integers (`1/1`).
pub fn ratio(r: Ratio) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

/// Rounded to 12 significant digits; non-finite values become `null`.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}")
        .parse()
        .expect("scientific notation parses");
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

pub fn element(g: &GroupSpec, x: usize) -> Value {
    Value::from(g.coords(x))
}

pub fn elements(set: &GroupSet) -> Value {
    Value::Array(set.iter().map(|x| element(set.group(), x)).collect())
}

pub fn group(g: &GroupSpec) -> Value {
    Value::from(g.factors().to_vec())
}

/// Pretty JSON, or a CSV header of the top-level keys plus one row. Nested
/// arrays and objects become compact JSON cells.
pub fn emit(report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let empty = Map::new();
            let obj = report.as_object().unwrap_or(&empty);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(obj.keys()).expect("in-memory write");
            w.write_record(obj.values().map(cell))
                .expect("in-memory write");
            String::from_utf8(w.into_inner().expect("in-memory flush"))
                .expect("csv output is UTF-8")
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
