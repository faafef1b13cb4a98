//! Parsing of real numbers written as decimals or simple ratios.
//!
//! Accepted forms: `0.25`, `-3`, `1/4`, `-2/3`, `1/√3`, `sqrt(2)/2`,
//! `√(11/12)`. A ratio has at most one `/` at the top level; each side is a
//! decimal or a square root of a decimal (or of a parenthesized ratio).

use crate::error::{Error, Result};

fn fail(input: &str, reason: impl Into<String>) -> Error {
    Error::Number {
        input: input.to_string(),
        reason: reason.into(),
    }
}

fn parse_atom(full: &str, s: &str) -> Result<f64> {
    let s = s.trim();
    let root = s
        .strip_prefix('√')
        .or_else(|| s.strip_prefix("sqrt"));
    if let Some(arg) = root {
        let arg = arg.trim();
        let inner = match arg.strip_prefix('(').and_then(|a| a.strip_suffix(')')) {
            Some(a) => parse_ratio(full, a)?,
            None => parse_atom(full, arg)?,
        };
        if inner < 0.0 {
            return Err(fail(full, "square root of a negative number"));
        }
        return Ok(inner.sqrt());
    }
    if s.is_empty() {
        return Err(fail(full, "empty operand"));
    }
    let x: f64 = s.parse().map_err(|_| fail(full, format!("`{s}` is not a number")))?;
    if !x.is_finite() {
        return Err(fail(full, "value is not finite"));
    }
    Ok(x)
}

fn split_top_level(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn parse_ratio(full: &str, s: &str) -> Result<f64> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let value = match split_top_level(body) {
        Some((num, den)) => {
            if split_top_level(den).is_some() {
                return Err(fail(full, "more than one `/`"));
            }
            let d = parse_atom(full, den)?;
            if d == 0.0 {
                return Err(fail(full, "division by zero"));
            }
            parse_atom(full, num)? / d
        }
        None => parse_atom(full, body)?,
    };
    Ok(if neg { -value } else { value })
}

/// Parses a decimal or `p/q` style value.
pub fn parse_real(s: &str) -> Result<f64> {
    parse_ratio(s, s)
}

/// Parses a comma-separated list of three values.
pub fn parse_triple(s: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(fail(s, format!("expected 3 comma-separated values, found {}", parts.len())));
    }
    Ok([parse_real(parts[0])?, parse_real(parts[1])?, parse_real(parts[2])?])
}
