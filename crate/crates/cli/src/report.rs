//! Line-oriented run reports with an optional JSON rendering.

use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub property: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn new(property: impl Into<String>, passed: bool) -> Self {
        Self {
            property: property.into(),
            passed,
            detail: None,
            witness: None,
        }
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Attaches the witness only when the check failed.
    pub fn witness(mut self, witness: Option<String>) -> Self {
        if !self.passed {
            self.witness = witness;
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub parameters: Vec<Entry>,
    pub outcome: Outcome,
    pub checks: Vec<Check>,
    pub values: Vec<Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub queries: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
    /// CSV or other raw payload, printed after the report lines.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            parameters: Vec::new(),
            outcome: Outcome::Value,
            checks: Vec::new(),
            values: Vec::new(),
            queries: None,
            wall_time_ms: None,
            data: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.push(Entry {
            key: key.into(),
            value: value.to_string(),
        });
        self
    }

    pub fn value(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.values.push(Entry {
            key: key.into(),
            value: value.to_string(),
        });
        self
    }

    pub fn check(&mut self, check: Check) -> &mut Self {
        self.outcome = if self.passed() && check.passed {
            Outcome::Pass
        } else {
            Outcome::Fail
        };
        self.checks.push(check);
        self
    }

    pub fn checks(&mut self, checks: impl IntoIterator<Item = Check>) -> &mut Self {
        for c in checks {
            self.check(c);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome != Outcome::Fail
    }

    pub fn timed(&mut self, elapsed: Option<Duration>) -> &mut Self {
        self.wall_time_ms = elapsed.map(|d| d.as_millis());
        self
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        for p in &self.parameters {
            writeln!(out, "param {}: {}", p.key, p.value).unwrap();
        }
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            match &c.detail {
                Some(d) => writeln!(out, "check {}: {verdict} ({d})", c.property).unwrap(),
                None => writeln!(out, "check {}: {verdict}", c.property).unwrap(),
            }
            if let Some(w) = &c.witness {
                writeln!(out, "  witness: {w}").unwrap();
            }
        }
        for v in &self.values {
            writeln!(out, "{}: {}", v.key, v.value).unwrap();
        }
        if let Some(q) = self.queries {
            writeln!(out, "queries: {q}").unwrap();
        }
        if let Some(ms) = self.wall_time_ms {
            writeln!(out, "wall time: {ms} ms").unwrap();
        }
        let outcome = match self.outcome {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Value => "value",
        };
        writeln!(out, "outcome: {outcome}").unwrap();
        if let Some(data) = &self.data {
            out.push_str(data);
        }
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}
