//! Machine- and human-readable run reports: command echo, input digests,
//! per-check verdicts with counterexamples. Reports are deterministic for
//! fixed inputs and flags; wall time is attached only on request so the
//! JSON stays byte-identical across runs.

use crate::error::{Counterexample, Verdict};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// False when a budget truncated the sweep.
    pub complete: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub version: String,
    pub inputs: Vec<InputDigest>,
    pub checks: Vec<CheckResult>,
    /// Extra key-value output (counts, emitted values).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u128>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            wall_ms: None,
        }
    }

    pub fn add_input(&mut self, path: &Path) -> crate::error::Result<()> {
        let bytes = std::fs::read(path)?;
        let mut h = Sha256::new();
        h.update(&bytes);
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: format!("{:x}", h.finalize()),
        });
        Ok(())
    }

    pub fn add_check(&mut self, name: impl Into<String>, v: &Verdict) {
        self.checks.push(CheckResult {
            name: name.into(),
            holds: v.holds,
            counterexample: v.counterexample.clone(),
            complete: v.complete,
        });
    }

    pub fn add_note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    /// 0 when every asserted check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_hold() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn to_text(&self, wall_ms: u128) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let _ = writeln!(s, "parayb {} — {}", self.version, self.command.join(" "));
        for i in &self.inputs {
            let _ = writeln!(s, "input {} sha256={}", i.path, i.sha256);
        }
        for c in &self.checks {
            let status = if c.holds { "pass" } else { "FAIL" };
            let suffix = if c.complete {
                ""
            } else {
                " (budget-truncated)"
            };
            let _ = writeln!(s, "[{status}] {}{suffix}", c.name);
            if let Some(cx) = &c.counterexample {
                let _ = writeln!(s, "       {cx}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(s, "elapsed: {wall_ms} ms");
        s
    }
}
