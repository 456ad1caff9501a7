//! Parsing of command-line values: rationals, rational matrices and vectors,
//! complex scalars, vectors and matrices, and `--file` documents.

use std::path::Path;

use quadsum_core::lattice::{rat_matrix_from_json, RatSymMatrix};
use quadsum_core::number::{parse_rational, PrecComplex};
use quadsum_core::theta::CMatrix;
use quadsum_core::Rational;
use serde_json::Value;

pub type InputResult<T> = Result<T, String>;

/// The `--file` document: either a bare matrix or an object whose keys name
/// the same inputs as the flags (`matrix`, `t`, `s`, `c`, `z`, `tau`).
#[derive(Debug, Default)]
pub struct FileInput(Option<Value>);

impl FileInput {
    pub fn load(path: Option<&Path>) -> InputResult<Self> {
        let Some(path) = path else {
            return Ok(Self(None));
        };
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let value: Value =
            serde_json::from_str(&text).map_err(|e| format!("{} is not valid JSON: {e}", path.display()))?;
        Ok(Self(Some(value)))
    }

    /// The named field, or the whole document when it is an array and `key` is the primary matrix.
    pub fn field(&self, key: &str, primary: bool) -> Option<Value> {
        match &self.0 {
            Some(Value::Object(map)) => map.get(key).cloned(),
            Some(v @ Value::Array(_)) if primary => Some(v.clone()),
            _ => None,
        }
    }
}

/// Inline flag text wins over the file; either is parsed as JSON when it looks like JSON.
pub fn pick(inline: Option<&str>, file: &FileInput, key: &str, primary: bool) -> InputResult<Option<Value>> {
    match inline {
        Some(text) => {
            let trimmed = text.trim();
            if trimmed.starts_with('[') || trimmed.starts_with('{') {
                serde_json::from_str(trimmed).map(Some).map_err(|e| format!("--{key}: invalid JSON: {e}"))
            } else {
                Ok(Some(Value::String(trimmed.to_string())))
            }
        }
        None => Ok(file.field(key, primary)),
    }
}

pub fn require(v: Option<Value>, key: &str) -> InputResult<Value> {
    v.ok_or_else(|| format!("missing --{key} (inline or in --file)"))
}

fn scalar_text(v: &Value) -> InputResult<String> {
    match v {
        Value::String(s) => Ok(s.trim().to_string()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(format!("expected a number or string, got {other}")),
    }
}

pub fn rational(v: &Value) -> InputResult<Rational> {
    parse_rational(&scalar_text(v)?).map_err(|e| e.to_string())
}

pub fn sym_matrix(v: &Value) -> InputResult<RatSymMatrix> {
    let m = match v {
        Value::String(s) => rat_matrix_from_json(&Value::Array(vec![Value::Array(vec![Value::String(s.clone())])])),
        other => rat_matrix_from_json(other),
    }
    .map_err(|e| e.to_string())?;
    RatSymMatrix::new(m).map_err(|e| e.to_string())
}

pub fn rat_matrix(v: &Value) -> InputResult<quadsum_core::lattice::RatMatrix> {
    rat_matrix_from_json(v).map_err(|e| e.to_string())
}

/// A rational vector from a JSON array or comma-separated text.
pub fn rat_vector(v: &Value) -> InputResult<Vec<Rational>> {
    match v {
        Value::Array(items) => items.iter().map(rational).collect(),
        Value::String(s) => s.split(',').map(|x| parse_rational(x.trim()).map_err(|e| e.to_string())).collect(),
        Value::Number(_) => Ok(vec![rational(v)?]),
        other => Err(format!("expected a rational vector, got {other}")),
    }
}

/// A complex scalar: a number, `"re,im"`, `"re"` or `[re, im]`.
pub fn complex(v: &Value, prec: u32) -> InputResult<PrecComplex> {
    match v {
        Value::Array(parts) if parts.len() == 2 => {
            let text = format!("{},{}", scalar_text(&parts[0])?, scalar_text(&parts[1])?);
            PrecComplex::parse(&text, prec).ok_or_else(|| format!("{text:?} is not a complex number"))
        }
        Value::String(s) => PrecComplex::parse(s, prec).ok_or_else(|| format!("{s:?} is not a complex number (use re,im)")),
        Value::Number(n) => PrecComplex::parse(&n.to_string(), prec).ok_or_else(|| format!("{n} is not a number")),
        other => Err(format!("expected a complex number, got {other}")),
    }
}

/// A complex vector: a JSON array of complex entries, or a single scalar.
pub fn complex_vector(v: &Value, prec: u32) -> InputResult<Vec<PrecComplex>> {
    match v {
        Value::Array(items) => items.iter().map(|x| complex(x, prec)).collect(),
        other => Ok(vec![complex(other, prec)?]),
    }
}

/// A complex matrix: an array of rows of complex entries, or a single scalar.
pub fn complex_matrix(v: &Value, prec: u32) -> InputResult<CMatrix> {
    let rows = match v {
        Value::Array(rows) => rows
            .iter()
            .map(|row| match row {
                Value::Array(entries) => entries.iter().map(|x| complex(x, prec)).collect::<InputResult<Vec<_>>>(),
                other => Err(format!("matrix rows must be arrays, got {other}")),
            })
            .collect::<InputResult<Vec<_>>>()?,
        other => vec![vec![complex(other, prec)?]],
    };
    CMatrix::from_rows(rows).map_err(|e| e.to_string())
}
