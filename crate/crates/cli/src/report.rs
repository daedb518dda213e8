//! Machine-readable report types. Exact rationals are serialized as
//! `"num/den"` strings so no value is lost to floating point.

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Report {
    pub schema: u32,
    pub version: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
}

#[derive(Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
    pub elapsed_ms: u64,
}

pub struct ReportBuilder {
    seed: u64,
    checks: Vec<CheckRecord>,
}

impl ReportBuilder {
    pub fn new(seed: u64) -> Self {
        ReportBuilder { seed, checks: Vec::new() }
    }

    pub fn push(&mut self, name: &str, expected: Value, computed: Value, elapsed_ms: u64) {
        let pass = expected == computed;
        self.checks.push(CheckRecord {
            name: name.to_string(),
            expected,
            computed,
            pass,
            elapsed_ms,
        });
    }

    pub fn finish(self) -> Report {
        let pass = self.checks.iter().all(|c| c.pass);
        Report {
            schema: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: self.seed,
            pass,
            checks: self.checks,
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:4} {:40} expected {} computed {} ({} ms)\n",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.expected,
                c.computed,
                c.elapsed_ms
            ));
        }
        out.push_str(&format!(
            "overall: {} ({} checks, seed {})\n",
            if self.pass { "pass" } else { "fail" },
            self.checks.len(),
            self.seed
        ));
        out
    }
}

pub fn rational_value(q: &mvaut_core::Rational) -> Value {
    json!(mvaut_core::exactq::rational_string(q))
}

pub fn qmatrix_value(m: &mvaut_core::QMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(rational_value).collect()))
            .collect(),
    )
}
