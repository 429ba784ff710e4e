//! Report assembly and deterministic JSON/CSV rendering.

use std::time::{SystemTime, UNIX_EPOCH};

use indexmap::IndexMap;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Error, Result};

/// Rounds to 15 significant digits. The result prints as the shortest
/// decimal that round-trips, so reports are stable across platforms.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// JSON value of a float after [`round15`]; non-finite values become strings.
pub fn num(x: f64) -> Value {
    let r = round15(x);
    if r.is_finite() {
        json!(r)
    } else {
        json!(r.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// One command's output. `results` uses flat dotted key paths; `rows` is
/// the table written in CSV mode.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub results: IndexMap<String, Value>,
    pub rows: Vec<IndexMap<String, Value>>,
    pub checks: Vec<Check>,
    pub errors: Vec<String>,
}

impl Report {
    pub fn set(&mut self, key: impl Into<String>, v: Value) {
        self.results.insert(key.into(), v);
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: Option<String>) {
        self.checks.push(Check { name: name.into(), pass, detail });
    }

    /// Pass when `|got - want| ≤ tol`.
    pub fn check_close(&mut self, name: impl Into<String>, got: f64, want: f64, tol: f64) {
        let err = (got - want).abs();
        let pass = err <= tol;
        self.check(name, pass, Some(format!("got {}, want {} ± {tol:e}", round15(got), round15(want))));
    }

    pub fn error(&mut self, e: &Error) {
        self.errors.push(e.to_string());
    }

    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn merge(&mut self, other: Report) {
        self.results.extend(other.results);
        self.rows.extend(other.rows);
        self.checks.extend(other.checks);
        self.errors.extend(other.errors);
    }

    /// Everything except the header: the part that must be byte-stable.
    pub fn payload(&self, config: &Value) -> Value {
        json!({
            "config": config,
            "results": self.results,
            "checks": self.checks,
            "errors": self.errors,
            "passed": self.passed(),
        })
    }

    pub fn to_json(&self, config: &Value) -> String {
        let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let header = json!({ "tool": "ksl", "version": env!("CARGO_PKG_VERSION"), "timestamp": stamp });
        let mut doc = serde_json::Map::new();
        doc.insert("header".into(), header);
        if let Value::Object(body) = self.payload(config) {
            doc.extend(body);
        }
        serde_json::to_string_pretty(&Value::Object(doc)).expect("report serializes") + "\n"
    }

    /// Flat table with the union of row keys as header, in first-seen order.
    pub fn to_csv(&self) -> Result<String> {
        let mut columns: Vec<&str> = Vec::new();
        for row in &self.rows {
            for k in row.keys() {
                if !columns.contains(&k.as_str()) {
                    columns.push(k);
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        if !columns.is_empty() {
            w.write_record(&columns).map_err(io)?;
        }
        for row in &self.rows {
            let cells: Vec<String> = columns.iter().map(|c| row.get(*c).map(cell).unwrap_or_default()).collect();
            w.write_record(&cells).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round15(0.5669872981077807).to_string(), "0.566987298107781");
        assert_eq!(round15(2.0 / 3.0).to_string(), "0.666666666666667");
        assert_eq!(round15(1e-300 / 3.0), 3.33333333333333e-301);
        assert_eq!(num(f64::INFINITY), json!("inf"));
    }

    #[test]
    fn csv_union_of_columns() {
        let mut r = Report::default();
        r.rows.push([("a".to_string(), json!(1)), ("b".to_string(), json!("x,y"))].into_iter().collect());
        r.rows.push([("a".to_string(), json!(2)), ("c".to_string(), json!(true))].into_iter().collect());
        assert_eq!(r.to_csv().unwrap(), "a,b,c\n1,\"x,y\",\n2,,true\n");
    }
}
