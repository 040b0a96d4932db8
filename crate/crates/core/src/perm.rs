//! Permutations of `{1..d}` and the cycle-notation parser.
//!
//! Points are stored 0-based; every textual form (parsing, `Display`,
//! `images_one_based`) is 1-based.
//!
//! Composition convention: `p.then(&q)` and `compose(p, q)` apply `p` first,
//! then `q`, so the point `i` is sent to `q(p(i))`. Products written as
//! `σ0σ1` throughout this crate mean "σ0 first".

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("image sequence is not a bijection on 1..{0}")]
    NotBijective(usize),
    #[error("parse error at byte {pos}: {kind}")]
    Parse { pos: usize, kind: ParseErrorKind },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    OutOfRange { value: u64, degree: usize },
    Repeated(u64),
    Unexpected(char),
    UnexpectedEnd,
    EmptyCycle,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::OutOfRange { value, degree } => {
                write!(f, "point {value} outside 1..{degree}")
            }
            ParseErrorKind::Repeated(v) => write!(f, "point {v} occurs twice"),
            ParseErrorKind::Unexpected(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::EmptyCycle => write!(f, "empty cycle"),
        }
    }
}

/// A permutation of `{0..degree}` (written 1-based externally).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

/// Cycle structure of a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    /// Cycles (0-based points), sorted by smallest element, smallest first.
    pub cycles: Vec<Vec<usize>>,
    pub order: u64,
    pub fixed_points: usize,
}

impl CycleDecomposition {
    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    /// Number of cycles of exactly the given length.
    pub fn count_of_length(&self, len: usize) -> usize {
        self.cycles.iter().filter(|c| c.len() == len).count()
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let d = images.len();
        if d == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; d];
        for &i in &images {
            if i >= d || seen[i] {
                return Err(PermError::NotBijective(d));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based images, as printed in the literature.
    pub fn from_images_one_based(images: &[usize]) -> Result<Self, PermError> {
        let d = images.len();
        let zero = images
            .iter()
            .map(|&i| i.checked_sub(1).ok_or(PermError::NotBijective(d)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_images(zero)
    }

    /// Builds a permutation from 0-based cycles; points not mentioned are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut images: Vec<usize> = (0..degree).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                if p >= degree || seen[p] {
                    return Err(PermError::NotBijective(degree));
                }
                seen[p] = true;
                images[p] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `(1,84)(2,20)` into a permutation of the
    /// given degree. Whitespace (including newlines) is allowed between tokens.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let cycles = CycleParser::new(text, degree).parse()?;
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in &cycles {
            for (i, &p) in cycle.iter().enumerate() {
                images[p] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn images_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, exp: i64) -> Permutation {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut result = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.then(&sq).expect("same degree");
            }
            sq = sq.then(&sq).expect("same degree");
            e >>= 1;
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i == j)
            .count()
    }

    pub fn cycle_decomposition(&self) -> CycleDecomposition {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut cycles = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            cycles.push(cycle);
        }
        let order = cycles.iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64));
        let fixed_points = cycles.iter().filter(|c| c.len() == 1).count();
        CycleDecomposition {
            cycles,
            order,
            fixed_points,
        }
    }

    pub fn order(&self) -> u64 {
        self.cycle_decomposition().order
    }
}

/// `p` first, then `q`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation, PermError> {
    p.then(q)
}

/// Composes a sequence of permutations left to right.
pub fn product<'a, I>(degree: usize, perms: I) -> Result<Permutation, PermError>
where
    I: IntoIterator<Item = &'a Permutation>,
{
    perms
        .into_iter()
        .try_fold(Permutation::identity(degree), |acc, p| acc.then(p))
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Canonical cycle notation: non-trivial cycles only, smallest point first,
/// cycles ordered by smallest point. The identity prints as the empty string.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycle_decomposition().cycles {
            if cycle.len() < 2 {
                continue;
            }
            write!(f, "(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]({})", self.degree(), self)
    }
}

struct CycleParser<'a> {
    bytes: &'a [u8],
    pos: usize,
    degree: usize,
    seen: Vec<bool>,
}

impl<'a> CycleParser<'a> {
    fn new(text: &'a str, degree: usize) -> Self {
        CycleParser {
            bytes: text.as_bytes(),
            pos: 0,
            degree,
            seen: vec![false; degree],
        }
    }

    fn err(&self, pos: usize, kind: ParseErrorKind) -> PermError {
        PermError::Parse { pos, kind }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn unexpected(&self) -> PermError {
        match self.peek() {
            // Report the full (possibly multi-byte) character.
            Some(_) => {
                let c = std::str::from_utf8(&self.bytes[self.pos..])
                    .ok()
                    .and_then(|s| s.chars().next())
                    .unwrap_or('\u{FFFD}');
                self.err(self.pos, ParseErrorKind::Unexpected(c))
            }
            None => self.err(self.pos, ParseErrorKind::UnexpectedEnd),
        }
    }

    fn parse(mut self) -> Result<Vec<Vec<usize>>, PermError> {
        let mut cycles = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Ok(cycles),
                Some(b'(') => {
                    self.pos += 1;
                    cycles.push(self.cycle()?);
                }
                Some(_) => return Err(self.unexpected()),
            }
        }
    }

    fn cycle(&mut self) -> Result<Vec<usize>, PermError> {
        let open = self.pos - 1;
        let mut points = Vec::new();
        loop {
            self.skip_ws();
            if points.is_empty() && self.peek() == Some(b')') {
                return Err(self.err(open, ParseErrorKind::EmptyCycle));
            }
            points.push(self.integer()?);
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    return Ok(points);
                }
                _ => return Err(self.unexpected()),
            }
        }
    }

    fn integer(&mut self) -> Result<usize, PermError> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(b) = self.peek().filter(u8::is_ascii_digit) {
            value = value.saturating_mul(10).saturating_add(u64::from(b - b'0'));
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.unexpected());
        }
        if value == 0 || value > self.degree as u64 {
            return Err(self.err(
                start,
                ParseErrorKind::OutOfRange {
                    value,
                    degree: self.degree,
                },
            ));
        }
        let p = (value - 1) as usize;
        if self.seen[p] {
            return Err(self.err(start, ParseErrorKind::Repeated(value)));
        }
        self.seen[p] = true;
        Ok(p)
    }
}
