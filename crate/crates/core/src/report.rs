//! Uniform check reports: `{check, parameters, items: [{name, expected, got, pass}], pass}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportItem {
    pub name: String,
    pub expected: Value,
    pub got: Value,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub parameters: Value,
    pub items: Vec<ReportItem>,
    pub pass: bool,
}

impl Report {
    pub fn new(check: &str, parameters: Value) -> Self {
        Report { check: check.to_string(), parameters, items: Vec::new(), pass: true }
    }

    /// Records an item that passes iff `expected == got`.
    pub fn compare<T: Serialize + PartialEq>(&mut self, name: impl Into<String>, expected: T, got: T) -> bool {
        let pass = expected == got;
        self.item(name, json(&expected), json(&got), pass)
    }

    pub fn item(&mut self, name: impl Into<String>, expected: Value, got: Value, pass: bool) -> bool {
        self.pass &= pass;
        self.items.push(ReportItem { name: name.into(), expected, got, pass });
        pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportItem> {
        self.items.iter().filter(|i| !i.pass)
    }

    /// One line per item, failures marked.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} [{}] {}/{} items\n",
            self.check,
            if self.pass { "PASS" } else { "FAIL" },
            self.items.iter().filter(|i| i.pass).count(),
            self.items.len()
        );
        for i in &self.items {
            if i.pass {
                out.push_str(&format!("  ok   {}: {}\n", i.name, compact(&i.got)));
            } else {
                out.push_str(&format!(
                    "  FAIL {}: expected {}, got {}\n",
                    i.name,
                    compact(&i.expected),
                    compact(&i.got)
                ));
            }
        }
        out
    }
}

fn json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
