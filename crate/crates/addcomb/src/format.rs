//! Text formats for sets and functions.
//!
//! Set file: a `group: m_1,...,m_r` header followed by one element per line
//! as comma-separated coordinates. Function file: the same header followed
//! by `coords : value` lines, where `value` is an integer or `re,im`.
//! Whitespace is ignored, blank lines and `#` comments are skipped, element
//! order is irrelevant, and missing function entries are zero.

use std::fmt::Write as _;
use std::path::Path;

use addcomb_core::spectral::{ComplexFunction, IntFunction};
use addcomb_core::{GroupSet, GroupSpec};
use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

/// Comma-separated list of cyclic orders, e.g. `5,5,5`.
pub fn parse_group(text: &str) -> Result<GroupSpec, String> {
    let factors = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad factor {t:?}: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    GroupSpec::new(factors).map_err(|e| e.to_string())
}

/// Comma-separated coordinates of an element of `g`.
pub fn parse_element(g: &GroupSpec, text: &str) -> Result<usize, String> {
    let coords = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad coordinate {t:?}: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != g.rank() {
        return Err(format!(
            "expected {} coordinates, got {}",
            g.rank(),
            coords.len()
        ));
    }
    g.index_of(&coords).map_err(|e| e.to_string())
}

pub fn format_element(g: &GroupSpec, x: usize) -> String {
    join(&g.coords(x))
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, String)> + '_ {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("");
        let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
        (!compact.is_empty()).then_some((i + 1, compact))
    })
}

fn parse_header(
    lines: &mut impl Iterator<Item = (usize, String)>,
) -> Result<GroupSpec, FormatError> {
    let (n, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `group:` header"))?;
    let spec = header
        .strip_prefix("group:")
        .ok_or_else(|| parse_err(n, "expected `group: m_1,...,m_r`"))?;
    parse_group(spec).map_err(|m| parse_err(n, m))
}

pub fn parse_set(text: &str) -> Result<GroupSet, FormatError> {
    let mut lines = content_lines(text);
    let g = parse_header(&mut lines)?;
    let mut set = GroupSet::empty(&g);
    for (n, line) in lines {
        set.insert(parse_element(&g, &line).map_err(|m| parse_err(n, m))?);
    }
    Ok(set)
}

pub fn write_set(set: &GroupSet) -> String {
    let g = set.group();
    let mut out = format!("group: {}\n", join(g.factors()));
    for x in set.iter() {
        let _ = writeln!(out, "{}", format_element(g, x));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionData {
    Int(IntFunction),
    Complex(ComplexFunction),
}

impl FunctionData {
    pub fn group(&self) -> &GroupSpec {
        match self {
            FunctionData::Int(f) => f.group(),
            FunctionData::Complex(f) => f.group(),
        }
    }
}

enum Value {
    Int(i64),
    Complex(Complex64),
}

fn parse_value(text: &str) -> Result<Value, String> {
    match text.split_once(',') {
        None => text
            .parse::<i64>()
            .map(Value::Int)
            .map_err(|e| format!("bad integer {text:?}: {e}")),
        Some((re, im)) => {
            let re = re
                .parse::<f64>()
                .map_err(|e| format!("bad real part {re:?}: {e}"))?;
            let im = im
                .parse::<f64>()
                .map_err(|e| format!("bad imaginary part {im:?}: {e}"))?;
            Ok(Value::Complex(Complex64::new(re, im)))
        }
    }
}

/// Integer-valued unless some entry is written as `re,im`.
pub fn parse_function(text: &str) -> Result<FunctionData, FormatError> {
    let mut lines = content_lines(text);
    let g = parse_header(&mut lines)?;
    let mut entries = Vec::new();
    for (n, line) in lines {
        let (coords, value) = line
            .split_once(':')
            .ok_or_else(|| parse_err(n, "expected `coords : value`"))?;
        let x = parse_element(&g, coords).map_err(|m| parse_err(n, m))?;
        entries.push((n, x, parse_value(value).map_err(|m| parse_err(n, m))?));
    }
    let complex = entries
        .iter()
        .any(|(_, _, v)| matches!(v, Value::Complex(_)));
    let mut seen = vec![false; g.order()];
    for &(n, x, _) in &entries {
        if std::mem::replace(&mut seen[x], true) {
            return Err(parse_err(
                n,
                format!("duplicate entry for {}", format_element(&g, x)),
            ));
        }
    }
    if complex {
        let mut values = vec![Complex64::new(0.0, 0.0); g.order()];
        for (_, x, v) in entries {
            values[x] = match v {
                Value::Int(i) => Complex64::new(i as f64, 0.0),
                Value::Complex(c) => c,
            };
        }
        Ok(FunctionData::Complex(
            ComplexFunction::new(&g, values).expect("length matches"),
        ))
    } else {
        let mut values = vec![0i64; g.order()];
        for (_, x, v) in entries {
            if let Value::Int(i) = v {
                values[x] = i;
            }
        }
        Ok(FunctionData::Int(
            IntFunction::new(&g, values).expect("length matches"),
        ))
    }
}

/// Nonzero entries only, in index order. Complex parts use the shortest
/// representation that reads back to the same `f64`.
pub fn write_function(f: &FunctionData) -> String {
    let g = f.group();
    let mut out = format!("group: {}\n", join(g.factors()));
    match f {
        FunctionData::Int(f) => {
            for (x, &v) in f.values().iter().enumerate().filter(|(_, v)| **v != 0) {
                let _ = writeln!(out, "{} : {v}", format_element(g, x));
            }
        }
        FunctionData::Complex(f) => {
            for (x, v) in f
                .values()
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
            {
                let _ = writeln!(out, "{} : {:?},{:?}", format_element(g, x), v.re, v.im);
            }
        }
    }
    out
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_set(path: &Path) -> Result<GroupSet, FormatError> {
    parse_set(&read(path)?)
}

pub fn read_function(path: &Path) -> Result<FunctionData, FormatError> {
    parse_function(&read(path)?)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), FormatError> {
    std::fs::write(path, contents).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}
