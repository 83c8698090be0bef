//! Serializable verdicts shared by the checkers and the command-line reports.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// The clause's hypothesis does not hold, so nothing was asserted.
    Skipped,
    /// The check could not be decided within the configured bounds.
    Unknown,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fail | Verdict::Unknown)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIPPED",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

/// One checked condition applied to one subject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub condition: String,
    pub subject: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl CheckEntry {
    pub fn new(condition: impl Into<String>, subject: impl Into<String>, verdict: Verdict) -> Self {
        Self {
            condition: condition.into(),
            subject: subject.into(),
            verdict,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn push(&mut self, entry: CheckEntry) {
        self.entries.push(entry);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
    }

    /// No entry failed (skipped entries are fine).
    pub fn all_pass(&self) -> bool {
        !self.entries.iter().any(|e| e.verdict.is_failure())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| e.verdict.is_failure())
    }

    /// FAIL if any entry failed, otherwise UNKNOWN if any is undecided, otherwise PASS.
    pub fn verdict(&self) -> Verdict {
        if self.entries.iter().any(|e| e.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if self.entries.iter().any(|e| e.verdict == Verdict::Unknown) {
            Verdict::Unknown
        } else {
            Verdict::Pass
        }
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.entries.iter().filter(|e| e.verdict == v).count()
    }
}

/// A hypothesis gate: a named precondition together with its decided verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub verdict: Verdict,
    pub witness: String,
}
