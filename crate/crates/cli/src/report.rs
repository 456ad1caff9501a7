//! The run report printed by every command, as JSON or CSV.

use quadsum_core::number::PrecComplex;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub re: String,
    pub im: String,
    /// Exact cyclotomic form, present for the exact backend.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl NamedValue {
    pub fn new(name: &str, v: &PrecComplex) -> Self {
        let (re, im) = v.to_decimal_strings();
        Self { name: name.to_string(), re, im, exact: None }
    }

    pub fn with_exact(mut self, exact: Option<String>) -> Self {
        self.exact = exact;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub values: Vec<NamedValue>,
    /// `|lhs - rhs|` of the checked identity, if the command checks one.
    pub residual: Option<String>,
    /// Verdict of exact equality, only for the exact backend.
    pub exact_equal: Option<bool>,
    /// Whether the check passed (`None` for pure evaluations).
    pub passed: Option<bool>,
    pub tolerance: String,
    pub backend: String,
    pub prec_bits: String,
    pub elapsed_ms: String,
    /// Command-specific structured output (matrices, zero lists, selftest table).
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    /// Rows printed under `--csv`; derived from `values` and `residual` when empty.
    #[serde(skip)]
    pub csv_rows: Vec<Vec<String>>,
}

impl RunReport {
    pub fn new(command: &str, backend: &str, prec_bits: u32, tol: f64) -> Self {
        Self {
            command: command.to_string(),
            inputs: Map::new(),
            values: Vec::new(),
            residual: None,
            exact_equal: None,
            passed: None,
            tolerance: format!("{tol:e}"),
            backend: backend.to_string(),
            prec_bits: prec_bits.to_string(),
            elapsed_ms: "0".into(),
            details: Value::Null,
            csv_rows: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn value(&mut self, v: NamedValue) -> &mut Self {
        self.values.push(v);
        self
    }

    pub fn set_residual(&mut self, value: f64, exact: Option<bool>, tol: f64) {
        self.residual = Some(format!("{value:e}"));
        self.exact_equal = exact;
        self.passed = Some(match exact {
            Some(v) => v,
            None => value < tol,
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<String>> = if self.csv_rows.is_empty() {
            let mut rows: Vec<Vec<String>> =
                self.values.iter().map(|v| vec![v.name.clone(), v.re.clone(), v.im.clone()]).collect();
            if let Some(r) = &self.residual {
                rows.push(vec!["residual".into(), r.clone()]);
            }
            if let Some(p) = self.passed {
                rows.push(vec!["passed".into(), p.to_string()]);
            }
            rows
        } else {
            self.csv_rows.clone()
        };
        rows.iter().map(|r| r.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",") + "\n").collect()
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}
