//! Typed run reports with deterministic rendering.
//!
//! A [`RunReport`] collects named pass/fail checks plus an optional data
//! payload and renders either as canonical JSON (the stable machine
//! contract: same report, same bytes) or as plain text (one line per
//! check). Struct fields serialize in declaration order and every map in
//! the crate's file formats is ordered, so repeated runs with the same
//! inputs produce byte-identical output.

use serde::Serialize;

/// Pretty-printed JSON with a trailing newline. Deterministic for the
/// report and file-format types in this crate: they contain only sequences,
/// ordered maps, and strings.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

/// One named check with a short piece of evidence: a witness when it fails,
/// a measurement when it passes.
#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

/// The result of one CLI run: what was asked, what was checked, what came
/// out.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub field: String,
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub pass: bool,
    pub checks: Vec<CheckLine>,
    /// Structured payload (dumps, tables); present only for commands that
    /// produce one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, field: impl Into<String>) -> RunReport {
        RunReport {
            command: command.into(),
            field: field.into(),
            inputs: Vec::new(),
            seed: None,
            pass: true,
            checks: Vec::new(),
            data: None,
        }
    }

    /// Append a check; the report passes only if every check passes.
    pub fn push(&mut self, check: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.pass &= pass;
        self.checks.push(CheckLine { check: check.into(), pass, detail: detail.into() });
    }

    pub fn to_json(&self) -> String {
        canonical_json(self)
    }

    /// Plain-text rendering: a header, one `PASS`/`FAIL` line per check, and
    /// a closing verdict.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("field: {}\n", self.field));
        for input in &self.inputs {
            out.push_str(&format!("input: {input}\n"));
        }
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed: {seed}\n"));
        }
        for line in &self.checks {
            let tag = if line.pass { "PASS" } else { "FAIL" };
            if line.detail.is_empty() {
                out.push_str(&format!("{tag} {}\n", line.check));
            } else {
                out.push_str(&format!("{tag} {} — {}\n", line.check, line.detail));
            }
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        if self.pass {
            out.push_str(&format!("result: PASS ({} checks)\n", self.checks.len()));
        } else {
            out.push_str(&format!(
                "result: FAIL ({failed} of {} checks failed)\n",
                self.checks.len()
            ));
        }
        out
    }
}
