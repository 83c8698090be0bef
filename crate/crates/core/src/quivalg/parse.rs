//! Line-oriented algebra format.
//!
//! ```text
//! name = A2            # optional label
//! field = 2
//! vertices = 1, 2, 3
//! a: 1 -> 2
//! b: 2 -> 3
//! rel: a*b             # signed path words, e.g. `a*b - 2 c*d`
//! ```
//!
//! `#` starts a comment. Line numbers in errors are 1-based.

use super::AlgebraSpec;
use crate::error::{Error, Result};

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn is_vertex_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(super) fn parse_algebra(text: &str, first_line: usize) -> Result<AlgebraSpec> {
    let mut spec = AlgebraSpec::new("A", 0);
    let mut field_seen = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = first_line + i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let indent = line.len() - line.trim_start().len();
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let col = |offset: usize| indent + offset + 1;

        if let Some((key, value)) = line.split_once('=') {
            let key = key.trim();
            let value = value.trim();
            let vcol = col(line.find('=').unwrap() + 1);
            match key {
                "field" | "p" => {
                    let p: u32 = value
                        .parse()
                        .map_err(|_| err(line_no, vcol, format!("expected a prime, found {value:?}")))?;
                    spec.field = p;
                    field_seen = true;
                }
                "name" | "label" => spec.label = value.to_string(),
                "vertices" => {
                    for v in value.split(|c: char| c == ',' || c.is_whitespace()) {
                        if v.is_empty() {
                            continue;
                        }
                        if !is_vertex_id(v) {
                            return Err(err(line_no, vcol, format!("bad vertex id {v:?}")));
                        }
                        spec.vertices.push(v.to_string());
                    }
                }
                _ => return Err(err(line_no, col(0), format!("unknown key {key:?}"))),
            }
            continue;
        }

        let Some((head, body)) = line.split_once(':') else {
            return Err(err(line_no, col(0), "expected `key = value`, `name: src -> tgt` or `rel: ...`"));
        };
        let head = head.trim();
        let body_col = col(line.find(':').unwrap() + 1);
        if head == "rel" || head == "relation" {
            spec.relations.push(parse_relation(body, line_no, body_col)?);
            continue;
        }
        if !is_ident(head) {
            return Err(err(line_no, col(0), format!("bad arrow name {head:?}")));
        }
        let Some((s, t)) = body.split_once("->") else {
            return Err(err(line_no, body_col, "expected `src -> tgt`"));
        };
        let (s, t) = (s.trim(), t.trim());
        if !is_vertex_id(s) || !is_vertex_id(t) {
            return Err(err(line_no, body_col, "bad vertex in arrow"));
        }
        spec.arrows.push((head.to_string(), s.to_string(), t.to_string(), 1));
    }
    if !field_seen {
        return Err(err(first_line + 1, 1, "missing `field = p`"));
    }
    Ok(spec)
}

/// Parses `a*b - 2 c*d + e*f` into signed terms.
pub(crate) fn parse_relation(body: &str, line: usize, column: usize) -> Result<Vec<(i64, Vec<String>)>> {
    let mut terms = Vec::new();
    let mut sign = 1i64;
    let mut current = String::new();
    let mut start = column;
    let mut flush = |current: &mut String, sign: i64, start: usize| -> Result<()> {
        let t = current.trim();
        if t.is_empty() {
            return Err(err(line, start, "empty term"));
        }
        let digits: String = t.chars().take_while(|c| c.is_ascii_digit()).collect();
        let (coeff, rest) = if digits.is_empty() {
            (1, t)
        } else {
            let c: i64 = digits
                .parse()
                .map_err(|_| err(line, start, "coefficient too large"))?;
            (c, t[digits.len()..].trim_start().trim_start_matches('*').trim_start())
        };
        let word: Vec<String> = rest.split('*').map(|s| s.trim().to_string()).collect();
        if word.iter().any(|w| !is_ident(w)) {
            return Err(err(line, start, format!("bad path word {rest:?}")));
        }
        terms.push((sign * coeff, word));
        current.clear();
        Ok(())
    };
    for (i, c) in body.char_indices() {
        match c {
            '+' | '-' => {
                if !current.trim().is_empty() {
                    flush(&mut current, sign, start)?;
                    sign = 1;
                }
                if c == '-' {
                    sign = -sign;
                }
                start = column + i + 1;
            }
            _ => current.push(c),
        }
    }
    if current.trim().is_empty() {
        return Err(err(line, start, "relation ends without a term"));
    }
    flush(&mut current, sign, start)?;
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quivalg::Algebra;

    #[test]
    fn parses_commutativity_relation() {
        let text = "name = SQ\nfield = 3\nvertices = 1, 2, 3, 4\na: 1 -> 2\nb: 2 -> 4\nc: 1 -> 3\nd: 3 -> 4\nrel: a*b - c*d\n";
        let spec = parse_algebra(text, 0).unwrap();
        assert_eq!(spec.label, "SQ");
        assert_eq!(spec.relations[0], vec![
            (1, vec!["a".to_string(), "b".to_string()]),
            (-1, vec!["c".to_string(), "d".to_string()])
        ]);
        assert_eq!(Algebra::build(&spec).unwrap().dim(), 9);
    }

    #[test]
    fn coefficients_and_leading_sign() {
        let t = parse_relation(" -2 x*x + 3*y*y", 1, 1).unwrap();
        assert_eq!(t[0].0, -2);
        assert_eq!(t[1], (3, vec!["y".to_string(), "y".to_string()]));
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_algebra("field = 2\nvertices = 1\nx 1 2\n", 10).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 13, .. }), "{e:?}");
        let e = parse_algebra("field = two\n", 0).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, column: 8, .. }), "{e:?}");
        assert!(parse_algebra("vertices = 1\n", 0).is_err());
        assert!(parse_relation("a*b -", 1, 1).is_err());
    }
}
