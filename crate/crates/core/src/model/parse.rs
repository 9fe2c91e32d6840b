//! Line-oriented network format.
//!
//! ```text
//! # comment
//! species: A B C          (optional; otherwise first-mention order)
//! r1: A + 2 B -> C
//! r2: C <=> 0             (expands to r2: C -> 0 and r2_r: 0 -> C)
//! ```

use super::{Complex, Crn, ModelError};

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Syntax { line, col, msg: msg.into() }
}

fn is_name(s: &str) -> bool {
    crate::algebra::is_symbol_name(s)
}

struct Species {
    names: Vec<String>,
    declared: bool,
}

impl Species {
    fn index(&mut self, name: &str, line: usize, col: usize) -> Result<usize, ModelError> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(i);
        }
        if self.declared {
            return Err(syntax(line, col, format!("species `{name}` not declared")));
        }
        self.names.push(name.to_string());
        Ok(self.names.len() - 1)
    }
}

/// Parses one side of a reaction. `offset` is the 1-based column of `text`.
fn parse_complex(
    text: &str,
    line: usize,
    offset: usize,
    species: &mut Species,
) -> Result<Complex, ModelError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(syntax(line, offset, "empty complex"));
    }
    if trimmed == "0" {
        return Ok(Complex::zero());
    }
    let mut coeffs = Vec::new();
    let mut col = offset;
    for part in text.split('+') {
        let lead = part.len() - part.trim_start().len();
        let term = part.trim();
        let tcol = col + lead;
        col += part.len() + 1;
        if term.is_empty() {
            return Err(syntax(line, tcol, "missing species term"));
        }
        let (coef, name) = split_term(term).map_err(|m| syntax(line, tcol, m))?;
        if !is_name(name) {
            return Err(syntax(line, tcol, format!("invalid species name `{name}`")));
        }
        let idx = species.index(name, line, tcol)?;
        coeffs.push((idx, coef));
    }
    Ok(Complex::new(coeffs))
}

/// Splits `2 B`, `2*B` or `B` into coefficient and name.
fn split_term(term: &str) -> Result<(u32, &str), String> {
    let digits_end = term
        .find(|c: char| !(c.is_ascii_digit() || c == '.' || c == '-' || c == '/'))
        .unwrap_or(term.len());
    if digits_end == 0 {
        return Ok((1, term));
    }
    let num = &term[..digits_end];
    let rest = term[digits_end..].trim_start();
    let rest = rest.strip_prefix('*').map(str::trim_start).unwrap_or(rest);
    if rest.is_empty() {
        return Err(format!("term `{term}` has no species"));
    }
    if num.starts_with('-') {
        return Err(format!("negative stoichiometric coefficient `{num}`"));
    }
    let value: u32 = num
        .parse()
        .map_err(|_| format!("stoichiometric coefficient `{num}` is not a non-negative integer"))?;
    if value == 0 {
        return Err(format!("zero stoichiometric coefficient in `{term}`"));
    }
    Ok((value, rest))
}

pub fn parse_crn(text: &str) -> Result<Crn, ModelError> {
    let mut species = Species { names: Vec::new(), declared: false };
    let mut reactions = Vec::new();
    let mut saw_reaction = false;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            return Err(syntax(line, 1, "expected `<label>: <reaction>` or `species: ...`"));
        };
        let head = content[..colon].trim();
        let body = &content[colon + 1..];
        let body_col = colon + 2;
        if head == "species" {
            if saw_reaction || species.declared {
                return Err(syntax(line, 1, "species declaration must come first and only once"));
            }
            species.declared = true;
            for name in body.split_whitespace() {
                if !is_name(name) {
                    return Err(syntax(line, body_col, format!("invalid species name `{name}`")));
                }
                if species.names.iter().any(|n| n == name) {
                    return Err(ModelError::DuplicateSpecies(name.to_string()));
                }
                species.names.push(name.to_string());
            }
            continue;
        }
        if !is_name(head) {
            return Err(syntax(line, 1, format!("invalid reaction label `{head}`")));
        }
        saw_reaction = true;
        let (arrow, reversible) = match (body.find("<=>"), body.find("->")) {
            (Some(i), _) => (i, true),
            (None, Some(i)) => (i, false),
            (None, None) => {
                let lead = body.len() - body.trim_start().len();
                return Err(syntax(line, body_col + lead, "missing `->` or `<=>`"));
            }
        };
        let arrow_len = if reversible { 3 } else { 2 };
        let lhs = &body[..arrow];
        let rhs = &body[arrow + arrow_len..];
        if rhs.contains("->") || rhs.contains("<=>") {
            return Err(syntax(line, body_col + arrow + arrow_len, "more than one arrow"));
        }
        let y = parse_complex(lhs, line, body_col, &mut species)?;
        let yp = parse_complex(rhs, line, body_col + arrow + arrow_len, &mut species)?;
        if reversible {
            reactions.push((format!("{head}_r"), yp.clone(), y.clone()));
            let n = reactions.len();
            reactions.insert(n - 1, (head.to_string(), y, yp));
        } else {
            reactions.push((head.to_string(), y, yp));
        }
    }
    Crn::new(species.names, reactions)
}
