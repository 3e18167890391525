//! Point-set files.
//!
//! JSON: `{"dimension": n, "scalar": "rational" | "float", "points": [[…], …]}`
//! with rational coordinates as `"p/q"` strings and float coordinates as
//! numbers. CSV: one point per row; the set is exact when every field is an
//! integer or `p/q`, float otherwise.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::numerics::{Backend, Rational, Scalar, TolerancePolicy};
use crate::pointset::PointSet;

/// A point set over whichever backend the file declared.
#[derive(Debug, Clone)]
pub enum AnyPointSet {
    Exact(PointSet<Rational>),
    Float(PointSet<f64>),
}

impl AnyPointSet {
    pub fn backend(&self) -> Backend {
        match self {
            AnyPointSet::Exact(_) => Backend::Rational,
            AnyPointSet::Float(_) => Backend::Float,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyPointSet::Exact(x) => x.len(),
            AnyPointSet::Float(x) => x.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Serialize, Deserialize)]
struct PointSetFile {
    dimension: usize,
    scalar: String,
    points: Vec<Vec<Value>>,
}

fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
}

fn rational_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap_or(0).into())),
        other => Err(Error::Parse(format!("rational coordinate must be a \"p/q\" string, got {other}"))),
    }
}

fn float_value(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("not a float: {s:?}"))),
        other => Err(Error::Parse(format!("float coordinate must be a number, got {other}"))),
    }
}

fn convert<S>(rows: &[Vec<Value>], f: impl Fn(&Value) -> Result<S>) -> Result<Vec<Vec<S>>> {
    rows.iter().map(|row| row.iter().map(&f).collect()).collect()
}

pub fn read_json(text: &str, policy: TolerancePolicy) -> Result<AnyPointSet> {
    let file: PointSetFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("point-set JSON: {e}")))?;
    match file.scalar.as_str() {
        "rational" => Ok(AnyPointSet::Exact(PointSet::new(
            file.dimension,
            convert(&file.points, rational_value)?,
            policy,
        )?)),
        "float" => Ok(AnyPointSet::Float(PointSet::new(
            file.dimension,
            convert(&file.points, float_value)?,
            policy,
        )?)),
        other => Err(Error::Parse(format!(
            "scalar must be \"rational\" or \"float\", got {other:?}"
        ))),
    }
}

pub fn read_csv(text: &str, policy: TolerancePolicy) -> Result<AnyPointSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(format!("CSV: {e}")))?;
        rows.push(record.iter().map(str::to_owned).collect());
    }
    let dim = rows.first().map_or(0, Vec::len);
    let exact = rows.iter().flatten().all(|f| parse_rational(f).is_ok());
    if exact {
        let points = rows
            .iter()
            .map(|r| r.iter().map(|f| parse_rational(f)).collect())
            .collect::<Result<_>>()?;
        Ok(AnyPointSet::Exact(PointSet::new(dim, points, policy)?))
    } else {
        let points = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|f| f.parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {f:?}"))))
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(AnyPointSet::Float(PointSet::new(dim, points, policy)?))
    }
}

/// Reads a file by extension: `.csv` is CSV, anything else JSON.
pub fn read_path(path: &Path, policy: TolerancePolicy) -> Result<AnyPointSet> {
    read_named(path, &std::fs::read_to_string(path)?, policy)
}

/// Parses `text` as the contents of `path`, picking the format from the extension.
pub fn read_named(path: &Path, text: &str, policy: TolerancePolicy) -> Result<AnyPointSet> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        read_csv(text, policy)
    } else {
        read_json(text, policy)
    }
}

fn coordinate<S: Scalar>(v: &S) -> Value {
    if S::is_exact() {
        Value::String(v.render(0))
    } else {
        serde_json::Number::from_f64(v.to_f64()).map_or(Value::Null, Value::Number)
    }
}

pub fn to_json<S: Scalar>(x: &PointSet<S>) -> String {
    let file = PointSetFile {
        dimension: x.dim(),
        scalar: S::BACKEND.as_str().to_owned(),
        points: x.points().iter().map(|p| p.iter().map(coordinate).collect()).collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).unwrap_or_default();
    out.push('\n');
    out
}

pub fn to_csv<S: Scalar>(x: &PointSet<S>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for p in x.points() {
        let fields: Vec<String> = p
            .iter()
            .map(|v| if S::is_exact() { v.render(0) } else { format!("{:?}", v.to_f64()) })
            .collect();
        // writing to a Vec cannot fail
        let _ = writer.write_record(&fields);
    }
    String::from_utf8(writer.into_inner().unwrap_or_default()).unwrap_or_default()
}
