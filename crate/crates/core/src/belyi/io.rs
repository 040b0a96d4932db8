//! `p3.txt`, `p2.txt`, `pc.txt`: one line per coefficient from the leading
//! one down to the constant term. Numeric files hold `re im` pairs, the
//! leading line is `1`. Exact files (`*.exact.txt`) hold one rational per
//! line, or for number-field coefficients a header
//! `poly: c_0 c_1 … c_n` (defining polynomial, ascending) followed by lines
//! `den: c_0 c_1 … c_{n−1}`.

use rug::{Integer, Rational};
use thiserror::Error;

use super::poly::{Poly, QPoly};
use crate::mpcore::{digits_for_bits, BigComplex};

#[derive(Debug, Error)]
pub enum PolyFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("empty polynomial file")]
    Empty,
}

fn syntax(line: usize, msg: impl Into<String>) -> PolyFileError {
    PolyFileError::Syntax {
        line,
        msg: msg.into(),
    }
}

pub fn write_numeric(p: &Poly) -> String {
    let digits = digits_for_bits(p.coeffs()[0].prec()) as usize + 2;
    let mut out = String::new();
    for (i, c) in p.descending().enumerate() {
        if i == 0 && c.re == 1 && c.im.is_zero() {
            out.push_str("1\n");
        } else {
            out.push_str(&c.to_decimal(digits));
            out.push('\n');
        }
    }
    out
}

/// Parses a numeric file at precision `prec`.
pub fn read_numeric(text: &str, prec: u32) -> Result<Poly, PolyFileError> {
    let mut desc = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let re = parts.next().expect("non-empty line");
        let im = parts.next();
        if parts.next().is_some() {
            return Err(syntax(i + 1, "expected `re im`"));
        }
        let c = BigComplex::parse_pair(prec, re, im).ok_or_else(|| syntax(i + 1, "bad number"))?;
        desc.push(c);
    }
    if desc.is_empty() {
        return Err(PolyFileError::Empty);
    }
    desc.reverse();
    Ok(Poly::from_ascending(desc))
}

/// Exact rational coefficients, leading first; `degree` pads with zeros.
pub fn write_rational(p: &QPoly, degree: usize) -> String {
    let mut out = String::new();
    for i in (0..=degree).rev() {
        match p.coeffs().get(i) {
            Some(c) => out.push_str(&c.to_string()),
            None => out.push('0'),
        }
        out.push('\n');
    }
    out
}

pub fn read_rational(text: &str) -> Result<QPoly, PolyFileError> {
    let mut desc = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let q: Rational = line.parse().map_err(|_| syntax(i + 1, "bad rational"))?;
        desc.push(q);
    }
    if desc.is_empty() {
        return Err(PolyFileError::Empty);
    }
    desc.reverse();
    Ok(QPoly::from_ascending(desc))
}

fn join(v: &[Integer]) -> String {
    v.iter().map(Integer::to_string).collect::<Vec<_>>().join(" ")
}

/// Number-field coefficients `(c, den)`, ascending as stored, written
/// leading first.
pub fn write_number_field(defining: &[Integer], coeffs: &[(Vec<Integer>, Integer)]) -> String {
    let mut out = format!("poly: {}\n", join(defining));
    for (c, den) in coeffs.iter().rev() {
        out.push_str(&format!("{den}: {}\n", join(c)));
    }
    out
}

/// Returns the defining polynomial and the ascending coefficient list.
#[allow(clippy::type_complexity)]
pub fn read_number_field(text: &str) -> Result<(Vec<Integer>, Vec<(Vec<Integer>, Integer)>), PolyFileError> {
    let ints = |s: &str, line: usize| -> Result<Vec<Integer>, PolyFileError> {
        s.split_whitespace()
            .map(|t| t.parse::<Integer>().map_err(|_| syntax(line, "bad integer")))
            .collect()
    };
    let mut defining = None;
    let mut desc = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, rest) = line.split_once(':').ok_or_else(|| syntax(i + 1, "missing `:`"))?;
        if head.trim() == "poly" {
            defining = Some(ints(rest, i + 1)?);
        } else {
            let den: Integer = head.trim().parse().map_err(|_| syntax(i + 1, "bad denominator"))?;
            desc.push((ints(rest, i + 1)?, den));
        }
    }
    let defining = defining.ok_or_else(|| syntax(1, "missing `poly:` line"))?;
    if desc.is_empty() {
        return Err(PolyFileError::Empty);
    }
    desc.reverse();
    Ok((defining, desc))
}
