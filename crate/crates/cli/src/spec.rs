//! Job spec files.
//!
//! ```text
//! [algebra]
//! name = A2
//! field = 2
//! vertices = 1, 2
//! a: 1 -> 2
//!
//! [recollement]
//! e = 2            # vertex names spanning the idempotent
//! dmax = 3
//!
//! [task]
//! name = glue_weak_tau
//! left = D10#1     # generators by canonical module name
//! right = @all     # also @proj, @empty
//! ```

use std::collections::BTreeMap;
use std::fmt;

use recollement::{AlgebraSpec, Error, Result};

pub const DEFAULT_DMAX: usize = 3;
pub const DEFAULT_N_MAX: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Task {
    CheckAxioms,
    Exactness,
    EnumerateSupportTau,
    EnumerateWeakSupportTau,
    EnumerateWakamatsu,
    EnumerateTriples,
    Bijection,
    IsWakamatsu,
    IsSupportTau,
    IsWeakSupportTau,
    GlueWakamatsu,
    RestrictWakamatsu,
    GlueWeakTau,
    RestrictWeakTau,
    GlueSupportTau,
    RestrictSupportTau,
    GlueTriple,
    RestrictTriple,
}

impl Task {
    pub const ALL: [Task; 18] = [
        Task::CheckAxioms,
        Task::Exactness,
        Task::EnumerateSupportTau,
        Task::EnumerateWeakSupportTau,
        Task::EnumerateWakamatsu,
        Task::EnumerateTriples,
        Task::Bijection,
        Task::IsWakamatsu,
        Task::IsSupportTau,
        Task::IsWeakSupportTau,
        Task::GlueWakamatsu,
        Task::RestrictWakamatsu,
        Task::GlueWeakTau,
        Task::RestrictWeakTau,
        Task::GlueSupportTau,
        Task::RestrictSupportTau,
        Task::GlueTriple,
        Task::RestrictTriple,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::CheckAxioms => "check_axioms",
            Task::Exactness => "exactness",
            Task::EnumerateSupportTau => "enumerate_support_tau",
            Task::EnumerateWeakSupportTau => "enumerate_weak_support_tau",
            Task::EnumerateWakamatsu => "enumerate_wakamatsu",
            Task::EnumerateTriples => "enumerate_triples",
            Task::Bijection => "bijection",
            Task::IsWakamatsu => "is_wakamatsu",
            Task::IsSupportTau => "is_support_tau",
            Task::IsWeakSupportTau => "is_weak_support_tau",
            Task::GlueWakamatsu => "glue_wakamatsu",
            Task::RestrictWakamatsu => "restrict_wakamatsu",
            Task::GlueWeakTau => "glue_weak_tau",
            Task::RestrictWeakTau => "restrict_weak_tau",
            Task::GlueSupportTau => "glue_support_tau",
            Task::RestrictSupportTau => "restrict_support_tau",
            Task::GlueTriple => "glue_triple",
            Task::RestrictTriple => "restrict_triple",
        }
    }

    pub fn parse(s: &str) -> Option<Task> {
        Task::ALL.into_iter().find(|t| t.name() == s)
    }

    /// Glue and restrict operations, which carry hypothesis gates.
    pub fn is_gated(self) -> bool {
        self >= Task::GlueWakamatsu
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A task argument with the position it was read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arg {
    pub value: String,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub algebra: AlgebraSpec,
    pub idempotent: Vec<String>,
    pub dmax: usize,
    pub task: Task,
    pub args: BTreeMap<String, Arg>,
    pub force: bool,
    pub depth: Option<usize>,
    pub n_max: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Algebra,
    Recollement,
    Task,
}

fn parse_number(v: &str, line: usize, column: usize) -> Result<usize> {
    v.parse()
        .map_err(|_| err(line, column, format!("expected a non-negative integer, found {v:?}")))
}

fn parse_bool(v: &str, line: usize, column: usize) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(err(line, column, format!("expected true or false, found {v:?}"))),
    }
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<JobSpec> {
        let mut section = Section::None;
        let mut algebra_text = String::new();
        let mut algebra_start = None;
        let mut idempotent = None;
        let mut dmax = DEFAULT_DMAX;
        let mut task = None;
        let mut args = BTreeMap::new();
        let mut force = false;
        let mut depth = None;
        let mut n_max = DEFAULT_N_MAX;
        let mut seen = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            // Module names contain `#`, so only a `#` at the start or after
            // whitespace opens a comment.
            let body = strip_comment(raw);
            let trimmed = body.trim();
            if trimmed.starts_with('[') {
                let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) else {
                    return Err(err(line_no, 1, "unterminated section header"));
                };
                section = match name.trim() {
                    "algebra" => Section::Algebra,
                    "recollement" => Section::Recollement,
                    "task" => Section::Task,
                    other => return Err(err(line_no, 2, format!("unknown section [{other}]"))),
                };
                if seen.contains(&name.trim().to_string()) {
                    return Err(err(line_no, 1, format!("duplicate section [{}]", name.trim())));
                }
                seen.push(name.trim().to_string());
                if section == Section::Algebra {
                    algebra_start = Some(line_no);
                }
                continue;
            }
            match section {
                Section::Algebra => {
                    algebra_text.push_str(raw);
                    algebra_text.push('\n');
                    continue;
                }
                _ if trimmed.is_empty() => continue,
                Section::None => return Err(err(line_no, 1, "content before the first section")),
                _ => {}
            }
            let indent = body.len() - body.trim_start().len();
            let Some((key, value)) = trimmed.split_once('=') else {
                return Err(err(line_no, indent + 1, "expected `key = value`"));
            };
            let vcol = indent + trimmed.find('=').unwrap() + 2 + (value.len() - value.trim_start().len());
            let key = key.trim();
            let value = value.trim();
            match (section, key) {
                (Section::Recollement, "e" | "idempotent") => {
                    idempotent = Some(
                        value
                            .split(|c: char| c == ',' || c.is_whitespace())
                            .filter(|s| !s.is_empty())
                            .map(str::to_string)
                            .collect::<Vec<_>>(),
                    );
                }
                (Section::Recollement, "dmax") => dmax = parse_number(value, line_no, vcol)?,
                (Section::Recollement, _) => {
                    return Err(err(line_no, indent + 1, format!("unknown key {key:?} in [recollement]")))
                }
                (Section::Task, "name") => {
                    task = Some(Task::parse(value).ok_or_else(|| {
                        let known: Vec<_> = Task::ALL.iter().map(|t| t.name()).collect();
                        err(line_no, vcol, format!("unknown task {value:?}; expected one of {}", known.join(", ")))
                    })?);
                }
                (Section::Task, "force") => force = parse_bool(value, line_no, vcol)?,
                (Section::Task, "depth") => depth = Some(parse_number(value, line_no, vcol)?),
                (Section::Task, "n_max") => n_max = parse_number(value, line_no, vcol)?,
                (Section::Task, _) => {
                    if args.contains_key(key) {
                        return Err(err(line_no, indent + 1, format!("duplicate argument {key:?}")));
                    }
                    args.insert(
                        key.to_string(),
                        Arg {
                            value: value.to_string(),
                            line: line_no,
                            column: vcol,
                        },
                    );
                }
                _ => unreachable!(),
            }
        }

        let Some(start) = algebra_start else {
            return Err(err(1, 1, "missing [algebra] section"));
        };
        let algebra = AlgebraSpec::parse_text_at(&algebra_text, start)?;
        let idempotent = idempotent.ok_or_else(|| err(1, 1, "missing `e = ...` in [recollement]"))?;
        let task = task.ok_or_else(|| err(1, 1, "missing `name = ...` in [task]"))?;
        Ok(JobSpec {
            algebra,
            idempotent,
            dmax,
            task,
            args,
            force,
            depth,
            n_max,
        })
    }
}

fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'#' && (i == 0 || bytes[i - 1].is_ascii_whitespace()) {
            return &line[..i];
        }
    }
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    const A2: &str = "[algebra]\nname = A2\nfield = 2\nvertices = 1, 2\na: 1 -> 2\n\n[recollement]\ne = 2\n\n[task]\nname = glue_weak_tau\nleft = D10#1  # generator\nright = @all\n";

    #[test]
    fn parses_sections() {
        let s = JobSpec::parse(A2).unwrap();
        assert_eq!(s.algebra.label, "A2");
        assert_eq!(s.idempotent, vec!["2"]);
        assert_eq!(s.dmax, DEFAULT_DMAX);
        assert_eq!(s.task, Task::GlueWeakTau);
        assert_eq!(s.args["left"].value, "D10#1");
        assert_eq!(s.args["right"].line, 13);
    }

    #[test]
    fn errors_carry_positions() {
        let bad = A2.replace("a: 1 -> 2", "a 1 2");
        let e = JobSpec::parse(&bad).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 5, .. }), "{e:?}");
        let bad = A2.replace("glue_weak_tau", "glue_everything");
        assert!(matches!(JobSpec::parse(&bad).unwrap_err(), Error::Parse { line: 11, column: 8, .. }));
        assert!(JobSpec::parse("name = x\n").is_err());
        assert!(JobSpec::parse(&A2.replace("[task]", "[tasks]")).is_err());
    }

    #[test]
    fn task_vocabulary_round_trips() {
        for t in Task::ALL {
            assert_eq!(Task::parse(t.name()), Some(t));
        }
        assert!(Task::GlueTriple.is_gated() && !Task::Bijection.is_gated());
    }
}
