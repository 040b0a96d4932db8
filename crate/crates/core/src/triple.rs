//! Text files describing a subgroup by its generator permutations.
//!
//! ```text
//! name: gamma0_2          (optional)
//! degree: 3
//! s0: (1,2)
//! s1: (1,2,3)
//! ```
//!
//! The `s0:` and `s1:` blocks may span several lines; a block ends at the
//! next label. `#` starts a comment.

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::perm::{PermError, Permutation};

#[derive(Debug, Error)]
pub enum TripleFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `{0}` entry")]
    Missing(&'static str),
    #[error("in block `{block}`: {source}")]
    Perm {
        block: &'static str,
        #[source]
        source: PermError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The pair (σ0, σ1) read from a triple file; σ∞ is implied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleFile {
    pub name: Option<String>,
    pub s0: Permutation,
    pub s1: Permutation,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Block {
    None,
    S0,
    S1,
}

impl TripleFile {
    pub fn new(name: Option<String>, s0: Permutation, s1: Permutation) -> Self {
        TripleFile { name, s0, s1 }
    }

    pub fn degree(&self) -> usize {
        self.s0.degree()
    }

    pub fn parse(text: &str) -> Result<Self, TripleFileError> {
        let mut name = None;
        let mut degree = None;
        let mut s0 = String::new();
        let mut s1 = String::new();
        let mut seen_s0 = false;
        let mut seen_s1 = false;
        let mut block = Block::None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let label = line
                .split_once(':')
                .map(|(k, v)| (k.trim().to_ascii_lowercase(), v.trim()));
            match label {
                Some((key, value)) if key == "name" || key == "group" => {
                    name = Some(value.to_string());
                    block = Block::None;
                }
                Some((key, value)) if key == "degree" => {
                    let d = value.parse::<usize>().map_err(|_| TripleFileError::Syntax {
                        line: line_no,
                        msg: format!("invalid degree {value:?}"),
                    })?;
                    degree = Some(d);
                    block = Block::None;
                }
                Some((key, value)) if key == "s0" => {
                    if seen_s0 {
                        return Err(syntax(line_no, "duplicate s0 block"));
                    }
                    seen_s0 = true;
                    s0.push_str(value);
                    s0.push('\n');
                    block = Block::S0;
                }
                Some((key, value)) if key == "s1" => {
                    if seen_s1 {
                        return Err(syntax(line_no, "duplicate s1 block"));
                    }
                    seen_s1 = true;
                    s1.push_str(value);
                    s1.push('\n');
                    block = Block::S1;
                }
                Some((key, _)) if !key.starts_with('(') => {
                    return Err(syntax(line_no, &format!("unknown label {key:?}")));
                }
                _ => match block {
                    Block::S0 => {
                        s0.push_str(line);
                        s0.push('\n');
                    }
                    Block::S1 => {
                        s1.push_str(line);
                        s1.push('\n');
                    }
                    Block::None => {
                        return Err(syntax(line_no, "cycle data outside an s0/s1 block"))
                    }
                },
            }
        }

        let degree = degree.ok_or(TripleFileError::Missing("degree"))?;
        if !seen_s0 {
            return Err(TripleFileError::Missing("s0"));
        }
        if !seen_s1 {
            return Err(TripleFileError::Missing("s1"));
        }
        let s0 = Permutation::parse_cycles(&s0, degree)
            .map_err(|source| TripleFileError::Perm { block: "s0", source })?;
        let s1 = Permutation::parse_cycles(&s1, degree)
            .map_err(|source| TripleFileError::Perm { block: "s1", source })?;
        Ok(TripleFile { name, s0, s1 })
    }

    /// Reads a triple file; the file stem is used as the name if none is given.
    pub fn read(path: impl AsRef<Path>) -> Result<Self, TripleFileError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut tf = Self::parse(&text)?;
        if tf.name.is_none() {
            tf.name = path
                .file_stem()
                .and_then(|s| s.to_str())
                .map(str::to_string);
        }
        Ok(tf)
    }
}

fn syntax(line: usize, msg: &str) -> TripleFileError {
    TripleFileError::Syntax {
        line,
        msg: msg.to_string(),
    }
}

impl fmt::Display for TripleFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            writeln!(f, "name: {name}")?;
        }
        writeln!(f, "degree: {}", self.degree())?;
        writeln!(f, "s0: {}", self.s0)?;
        writeln!(f, "s1: {}", self.s1)
    }
}
