//! The JSON report written for each job.

use recollement::modcat::UniverseDescription;
use recollement::report::{CheckEntry, CheckReport, Hypothesis, Verdict};
use recollement::AlgebraSpec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Refused,
    /// Run with `--force` past a failed hypothesis; nothing is asserted.
    Unsound,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Refused | Status::Unsound => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseSection {
    pub algebra: String,
    pub algebra_hash: String,
    pub p: u32,
    pub dmax: usize,
    pub idempotent: Vec<String>,
    pub middle: UniverseDescription,
    pub left: UniverseDescription,
    pub right: UniverseDescription,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationEntry {
    pub condition: String,
    pub subject: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<String>,
}

impl From<CheckEntry> for VerificationEntry {
    fn from(e: CheckEntry) -> Self {
        Self {
            condition: e.condition,
            subject: e.subject,
            verdict: e.verdict,
            detail: e.detail,
            certificate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub id: String,
    pub kind: String,
    pub body: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub universe: UniverseSection,
    pub task: String,
    pub status: Status,
    pub hypotheses: Vec<Hypothesis>,
    pub result: Option<serde_json::Value>,
    pub verification: Vec<VerificationEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub observations: Vec<CheckEntry>,
    pub certificates: Vec<Certificate>,
}

impl Report {
    pub fn verification_report(&self) -> CheckReport {
        CheckReport {
            entries: self
                .verification
                .iter()
                .map(|e| CheckEntry {
                    condition: e.condition.clone(),
                    subject: e.subject.clone(),
                    verdict: e.verdict,
                    detail: e.detail.clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// SHA-256 of the algebra's presentation, independent of its label.
pub fn algebra_hash(spec: &AlgebraSpec) -> String {
    let mut h = Sha256::new();
    h.update(format!("p={}\n", spec.field));
    for v in &spec.vertices {
        h.update(format!("v {v}\n"));
    }
    for (name, s, t, w) in &spec.arrows {
        h.update(format!("a {name}:{s}->{t}:{w}\n"));
    }
    for rel in &spec.relations {
        let terms: Vec<String> = rel.iter().map(|(c, w)| format!("{c}*{}", w.join("*"))).collect();
        h.update(format!("r {}\n", terms.join(" + ")));
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use recollement::quivalg::fixtures;

    #[test]
    fn hash_ignores_label() {
        let mut a = fixtures::a2(2);
        let h = algebra_hash(&a);
        assert_eq!(h.len(), 64);
        a.label = "other".into();
        assert_eq!(algebra_hash(&a), h);
        assert_ne!(algebra_hash(&fixtures::a2(3)), h);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Status::Pass.exit_code(), 0);
        assert_eq!(Status::Fail.exit_code(), 1);
        assert_eq!(Status::Refused.exit_code(), 2);
    }
}
