use super::complex::{norm2, BigComplex};
use rug::Float;

/// The unknown coefficients of one cusp: indices `first..=last`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffBlock {
    pub cusp: usize,
    pub first: i64,
    pub last: i64,
    pub offset: usize,
}

impl CoeffBlock {
    pub fn len(&self) -> usize {
        (self.last - self.first + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Maps `(cusp k, index m)` to a position in the flat unknown vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffLayout {
    blocks: Vec<CoeffBlock>,
    len: usize,
}

impl CoeffLayout {
    /// `ranges[k] = (first, last)` for cusp `k`.
    pub fn new(ranges: &[(i64, i64)]) -> Self {
        let mut offset = 0;
        let blocks = ranges
            .iter()
            .enumerate()
            .map(|(cusp, &(first, last))| {
                let b = CoeffBlock { cusp, first, last, offset };
                offset += b.len();
                b
            })
            .collect();
        CoeffLayout { blocks, len: offset }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn blocks(&self) -> &[CoeffBlock] {
        &self.blocks
    }

    pub fn position(&self, cusp: usize, m: i64) -> Option<usize> {
        let b = self.blocks.get(cusp)?;
        (b.first..=b.last)
            .contains(&m)
            .then(|| b.offset + (m - b.first) as usize)
    }

    /// Inverse of [`position`](Self::position).
    pub fn index_of(&self, pos: usize) -> Option<(usize, i64)> {
        self.blocks
            .iter()
            .find(|b| pos >= b.offset && pos < b.offset + b.len())
            .map(|b| (b.cusp, b.first + (pos - b.offset) as i64))
    }
}

/// Flat vector of unknowns together with its layout.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    pub layout: CoeffLayout,
    pub entries: Vec<BigComplex>,
}

impl CoeffVector {
    pub fn zeros(layout: CoeffLayout, prec: u32) -> Self {
        let entries = vec![BigComplex::zero(prec); layout.len()];
        CoeffVector { layout, entries }
    }

    pub fn get(&self, cusp: usize, m: i64) -> Option<&BigComplex> {
        self.layout.position(cusp, m).map(|p| &self.entries[p])
    }

    pub fn norm(&self) -> Float {
        norm2(&self.entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_positions() {
        let l = CoeffLayout::new(&[(1, 4), (0, 7), (0, 0)]);
        assert_eq!(l.len(), 4 + 8 + 1);
        assert_eq!(l.position(0, 1), Some(0));
        assert_eq!(l.position(0, 0), None);
        assert_eq!(l.position(1, 0), Some(4));
        assert_eq!(l.position(2, 0), Some(12));
        assert_eq!(l.position(3, 0), None);
        for p in 0..l.len() {
            let (k, m) = l.index_of(p).unwrap();
            assert_eq!(l.position(k, m), Some(p));
        }
        assert_eq!(l.index_of(13), None);
    }
}
