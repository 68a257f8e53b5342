//! Structured run reports, rendered as text or JSON.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

/// Decimal places for every floating-point number in text output.
pub const TEXT_DECIMALS: usize = 9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub checks: Vec<Check>,
    /// Wall-clock seconds.
    pub elapsed: f64,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            inputs: Map::new(),
            results: Map::new(),
            checks: Vec::new(),
            elapsed: 0.0,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.to_owned(), value.into());
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_owned(), value.into());
    }

    pub fn check(&mut self, name: &str, expected: impl Into<Value>, actual: impl Into<Value>, pass: bool) {
        self.checks.push(Check {
            name: name.to_owned(),
            expected: expected.into(),
            actual: actual.into(),
            pass,
        });
    }

    /// Exact equality check.
    pub fn check_eq<T: Into<Value> + PartialEq + Clone>(&mut self, name: &str, expected: T, actual: T) {
        let pass = expected == actual;
        self.check(name, expected, actual, pass);
    }

    /// Passes when `actual <= bound`; records the bound as `≤ bound`.
    pub fn check_at_most(&mut self, name: &str, bound: f64, actual: f64) {
        self.check(name, format!("<= {bound:e}"), actual, actual <= bound);
    }

    /// Passes when `|actual - expected| <= tol`.
    pub fn check_close(&mut self, name: &str, expected: f64, actual: f64, tol: f64) {
        self.check(name, expected, actual, (actual - expected).abs() <= tol);
    }

    pub fn check_ok<T, E: std::fmt::Display>(&mut self, name: &str, outcome: &Result<T, E>) {
        match outcome {
            Ok(_) => self.check(name, "ok", "ok", true),
            Err(e) => self.check(name, "ok", e.to_string(), false),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        if !self.inputs.is_empty() {
            out.push_str("inputs:\n");
            write_map(&mut out, &self.inputs);
        }
        if !self.results.is_empty() {
            out.push_str("results:\n");
            write_map(&mut out, &self.results);
        }
        out.push_str("checks:\n");
        for c in &self.checks {
            let flag = if c.pass { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "  [{flag}] {}: expected {}, actual {}",
                c.name,
                inline(&c.expected),
                inline(&c.actual)
            )
            .unwrap();
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(out, "status: {status} ({passed}/{} checks)", self.checks.len()).unwrap();
        writeln!(out, "elapsed: {:.*} s", TEXT_DECIMALS, self.elapsed).unwrap();
        out
    }
}

fn write_map(out: &mut String, map: &Map<String, Value>) {
    for (key, value) in map {
        match value {
            Value::Array(rows) if rows.iter().any(|r| r.is_object() || r.is_array()) => {
                writeln!(out, "  {key}:").unwrap();
                for row in rows {
                    writeln!(out, "    {}", inline(row)).unwrap();
                }
            }
            Value::String(s) if s.contains('\n') => {
                writeln!(out, "  {key}:").unwrap();
                for line in s.lines() {
                    writeln!(out, "    {line}").unwrap();
                }
            }
            _ => writeln!(out, "  {key}: {}", inline(value)).unwrap(),
        }
    }
}

/// Single-line rendering with floats at [`TEXT_DECIMALS`] places.
pub fn inline(value: &Value) -> String {
    match value {
        Value::Null => "null".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => i.to_string(),
            (_, Some(u), _) => u.to_string(),
            (_, _, Some(f)) => format!("{f:.TEXT_DECIMALS$}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(map) => format!(
            "{{{}}}",
            map.iter()
                .map(|(k, v)| format!("{k}: {}", inline(v)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_render_at_nine_places() {
        assert_eq!(inline(&json!(14.036349632908053)), "14.036349633");
        assert_eq!(inline(&json!(144)), "144");
        assert_eq!(inline(&json!(-3)), "-3");
        assert_eq!(inline(&json!([1.0, 2])), "[1.000000000, 2]");
        assert_eq!(inline(&json!({"a": 0.5})), "{a: 0.500000000}");
    }

    #[test]
    fn status_follows_checks() {
        let mut r = RunReport::new("x");
        r.check_eq("same", 1, 1);
        assert!(r.passed());
        assert_eq!(r.exit_code(), 0);
        r.check_close("near", 1.0, 1.1, 1e-3);
        assert!(!r.passed());
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.failures().count(), 1);
        assert!(r.to_text().contains("[FAIL] near"));
        assert!(r.to_text().contains("status: FAIL (1/2 checks)"));
    }

    #[test]
    fn json_keeps_full_precision() {
        let mut r = RunReport::new("x");
        r.result("value", 14.036349632908053);
        let parsed: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(parsed["results"]["value"].as_f64(), Some(14.036349632908053));
        assert!(parsed["checks"].is_array());
    }
}
