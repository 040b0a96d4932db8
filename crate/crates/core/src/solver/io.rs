//! Plain-text coefficient files.
//!
//! ```text
//! group: gamma0_2
//! N: 24
//! precision_digits: 80
//! cusp 0 width 1
//! -1 1 0
//! 0 0 0
//! 1 276.000... 0
//! ...
//! cusp 1 width 2
//! 0 ...
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::mpcore::{bits_for_digits, digits_for_bits, BigComplex};
use crate::subgroup::SubgroupData;

use super::ExpansionState;

#[derive(Debug, Error)]
pub enum CoeffFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header field {0}")]
    Missing(&'static str),
    #[error("file does not match the subgroup: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffHeader {
    pub group: String,
    pub n: usize,
    pub precision_digits: u32,
}

/// Renders every coefficient, pinned ones included, with enough digits to
/// round-trip at the state's precision.
pub fn write_coefficients(state: &ExpansionState, group_name: &str, precision_digits: u32) -> String {
    let digits = digits_for_bits(state.prec()) as usize + 2;
    let mut out = String::new();
    let _ = writeln!(out, "group: {group_name}");
    let _ = writeln!(out, "N: {}", state.n());
    let _ = writeln!(out, "precision_digits: {precision_digits}");
    for k in 0..state.num_cusps() {
        let w = state.group().cusps[k].width;
        let _ = writeln!(out, "cusp {k} width {w}");
        let mu = state.mu(k);
        for (i, a) in state.coefficients(k).iter().enumerate() {
            let _ = writeln!(out, "{} {}", mu + i as i64, a.to_decimal(digits));
        }
    }
    out
}

fn syntax(line: usize, msg: impl Into<String>) -> CoeffFileError {
    CoeffFileError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// `(cusp, width, [(line, m, re, im)])`
type Block = (usize, usize, Vec<(usize, i64, String, String)>);

/// Parses a coefficient file for `group`. Cusp count, widths, index ranges
/// and the pinned principal part are checked.
pub fn read_coefficients(
    text: &str,
    group: Arc<SubgroupData>,
) -> Result<(CoeffHeader, ExpansionState), CoeffFileError> {
    let mut name = None;
    let mut n = None;
    let mut digits = None;
    let mut blocks: Vec<Block> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(v) = line.strip_prefix("group:") {
            name = Some(v.trim().to_string());
        } else if let Some(v) = line.strip_prefix("N:") {
            n = Some(v.trim().parse::<usize>().map_err(|e| syntax(lineno, format!("N: {e}")))?);
        } else if let Some(v) = line.strip_prefix("precision_digits:") {
            digits = Some(
                v.trim()
                    .parse::<u32>()
                    .map_err(|e| syntax(lineno, format!("precision_digits: {e}")))?,
            );
        } else if line.starts_with("cusp") {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[2] != "width" {
                return Err(syntax(lineno, "expected `cusp <k> width <w>`"));
            }
            let k = parts[1].parse().map_err(|_| syntax(lineno, "bad cusp index"))?;
            let w = parts[3].parse().map_err(|_| syntax(lineno, "bad cusp width"))?;
            blocks.push((k, w, Vec::new()));
        } else {
            let block = blocks
                .last_mut()
                .ok_or_else(|| syntax(lineno, "coefficient line before any cusp block"))?;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(syntax(lineno, "expected `m re im`"));
            }
            let m = parts[0].parse().map_err(|_| syntax(lineno, "bad index"))?;
            block
                .2
                .push((lineno, m, parts[1].to_string(), parts[2].to_string()));
        }
    }

    let header = CoeffHeader {
        group: name.ok_or(CoeffFileError::Missing("group"))?,
        n: n.ok_or(CoeffFileError::Missing("N"))?,
        precision_digits: digits.ok_or(CoeffFileError::Missing("precision_digits"))?,
    };
    if blocks.len() != group.cusps.len() {
        return Err(CoeffFileError::Mismatch(format!(
            "{} cusp blocks for {} cusps",
            blocks.len(),
            group.cusps.len()
        )));
    }
    let prec = bits_for_digits(header.precision_digits);
    let mut state = ExpansionState::initial(Arc::clone(&group), header.n, prec);
    for (pos, (k, w, lines)) in blocks.into_iter().enumerate() {
        if k != pos || w != group.cusps[k].width {
            return Err(CoeffFileError::Mismatch(format!(
                "block {pos} is cusp {k} of width {w}, expected cusp {pos} of width {}",
                group.cusps[pos].width
            )));
        }
        let expected = state.coefficients(k).len();
        if lines.len() != expected {
            return Err(CoeffFileError::Mismatch(format!(
                "cusp {k} has {} coefficients, expected {expected}",
                lines.len()
            )));
        }
        for (i, (lineno, m, re, im)) in lines.into_iter().enumerate() {
            if m != state.mu(k) + i as i64 {
                return Err(syntax(lineno, format!("index {m} out of order")));
            }
            let value = BigComplex::parse_pair(prec, &re, Some(&im))
                .ok_or_else(|| syntax(lineno, "bad decimal"))?;
            if k == 0 && m <= 0 {
                let want = if m == -1 { 1 } else { 0 };
                if value.re != want || !value.im.is_zero() {
                    return Err(syntax(lineno, format!("pinned coefficient a_{m} must be {want}")));
                }
            } else {
                state.set_coefficient(k, m, value);
            }
        }
    }
    Ok((header, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    #[test]
    fn round_trip() {
        let s0 = Permutation::parse_cycles("(1,2)", 3).unwrap();
        let s1 = Permutation::parse_cycles("(1,2,3)", 3).unwrap();
        let g = Arc::new(SubgroupData::build(&s0, &s1).unwrap());
        let prec = bits_for_digits(30);
        let mut s = ExpansionState::initial(Arc::clone(&g), 3, prec);
        let third = BigComplex::new(
            rug::Float::with_val(prec, 1) / 3u32,
            rug::Float::with_val(prec, -2) / 7u32,
        );
        s.set_coefficient(0, 2, third.clone());
        s.set_coefficient(1, 5, third);
        let text = write_coefficients(&s, "g", 30);
        let (h, back) = read_coefficients(&text, Arc::clone(&g)).unwrap();
        assert_eq!(h.n, 3);
        assert_eq!(h.group, "g");
        assert_eq!(back, s);

        let broken = text.replace("cusp 1 width 2", "cusp 1 width 3");
        assert!(matches!(
            read_coefficients(&broken, g),
            Err(CoeffFileError::Mismatch(_))
        ));
    }
}
