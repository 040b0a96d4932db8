use std::fmt;

use rug::{Float, Rational};

use crate::mpcore::BigComplex;

/// Polynomial with complex coefficients, stored from the constant term up.
#[derive(Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<BigComplex>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter().rev()).finish()
    }
}

impl Poly {
    pub fn constant(c: BigComplex) -> Self {
        Poly { coeffs: vec![c] }
    }

    pub fn one(prec: u32) -> Self {
        Poly::constant(BigComplex::one(prec))
    }

    /// Coefficients from the constant term up.
    pub fn from_ascending(coeffs: Vec<BigComplex>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial needs at least one coefficient");
        Poly { coeffs }
    }

    /// `Π (X − r)^m`, multiplied in order of increasing multiplicity.
    pub fn from_roots(roots: &[(BigComplex, usize)], prec: u32) -> Self {
        let mut order: Vec<&(BigComplex, usize)> = roots.iter().collect();
        order.sort_by_key(|(_, m)| *m);
        let mut p = Poly::one(prec);
        for (r, m) in order {
            for _ in 0..*m {
                p.mul_linear(r);
            }
        }
        p
    }

    /// Multiplies in place by `X − r`.
    pub fn mul_linear(&mut self, r: &BigComplex) {
        let prec = self.coeffs[0].prec().max(r.prec());
        let mut next = vec![BigComplex::zero(prec); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= &(c * r);
        }
        self.coeffs = next;
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigComplex] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&BigComplex> {
        self.coeffs.get(i)
    }

    /// Coefficients from the leading one down.
    pub fn descending(&self) -> impl Iterator<Item = &BigComplex> {
        self.coeffs.iter().rev()
    }

    pub fn eval(&self, x: &BigComplex) -> BigComplex {
        let mut acc = BigComplex::zero(x.prec());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_add(x, c);
        }
        acc
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let prec = self.coeffs[0].prec().max(other.coeffs[0].prec());
        let zero = BigComplex::zero(prec);
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                a - b
            })
            .collect();
        Poly { coeffs }
    }

    pub fn scale(&self, s: &Float) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn max_abs_coeff(&self) -> Float {
        let prec = self.coeffs[0].prec();
        self.coeffs
            .iter()
            .map(BigComplex::abs)
            .fold(Float::new(prec), |m, a| if a > m { a } else { m })
    }
}

/// Polynomial over `ℚ`, stored from the constant term up without trailing
/// zeros (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn from_ascending(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::new();
        QPoly::from_ascending(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).unwrap_or(&zero);
                    let b = other.coeffs.get(i).unwrap_or(&zero);
                    Rational::from(a - b)
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> QPoly {
        QPoly::from_ascending(self.coeffs.iter().map(|c| Rational::from(c * s)).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::default();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        QPoly::from_ascending(out)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let mag = Rational::from(c.abs_ref());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || mag != 1;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}X", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}X^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}
