use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;

use rug::Float;

use crate::mpcore::BigComplex;

/// A point of `P¹(ℚ)`: either `∞` or `p/q` in lowest terms with `q > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cusp {
    Infinity,
    Finite { p: i64, q: i64 },
}

impl Cusp {
    /// `p/q` reduced to lowest terms with positive denominator; `q = 0` is `∞`.
    pub fn from_fraction(p: i64, q: i64) -> Option<Cusp> {
        if q == 0 {
            return (p != 0).then_some(Cusp::Infinity);
        }
        let g = gcd_i64(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 {
            p = -p;
            q = -q;
        }
        Some(Cusp::Finite { p, q })
    }

    /// As a pair `(p, q)` with `∞ = (1, 0)`.
    pub fn as_pair(&self) -> (i64, i64) {
        match *self {
            Cusp::Infinity => (1, 0),
            Cusp::Finite { p, q } => (p, q),
        }
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cusp::Infinity => write!(f, "oo"),
            Cusp::Finite { p, q: 1 } => write!(f, "{p}"),
            Cusp::Finite { p, q } => write!(f, "{p}/{q}"),
        }
    }
}

pub(crate) fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// A 2×2 integer matrix of determinant one, compared projectively (`M = −M`).
#[derive(Clone, Copy)]
pub struct IntMatrix2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMatrix2 {
    pub const IDENTITY: IntMatrix2 = IntMatrix2 { a: 1, b: 0, c: 0, d: 1 };
    /// `z ↦ z + 1`
    pub const T: IntMatrix2 = IntMatrix2 { a: 1, b: 1, c: 0, d: 1 };
    /// `z ↦ −1/z`
    pub const S: IntMatrix2 = IntMatrix2 { a: 0, b: -1, c: 1, d: 0 };
    /// `R = S·T⁻¹·S⁻¹ = (1 0; 1 1)`
    pub const R: IntMatrix2 = IntMatrix2 { a: 1, b: 0, c: 1, d: 1 };

    /// Returns `None` unless `ad − bc = 1`.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Option<Self> {
        let det = (a as i128) * (d as i128) - (b as i128) * (c as i128);
        (det == 1).then_some(IntMatrix2 { a, b, c, d })
    }

    pub fn t_pow(n: i64) -> Self {
        IntMatrix2 { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn det(&self) -> i128 {
        (self.a as i128) * (self.d as i128) - (self.b as i128) * (self.c as i128)
    }

    pub fn inverse(&self) -> Self {
        IntMatrix2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> Self {
        IntMatrix2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn checked_mul(&self, o: &IntMatrix2) -> Option<IntMatrix2> {
        let e = |x: i64, y: i64, u: i64, v: i64| -> Option<i64> {
            x.checked_mul(y)?.checked_add(u.checked_mul(v)?)
        };
        Some(IntMatrix2 {
            a: e(self.a, o.a, self.b, o.c)?,
            b: e(self.a, o.b, self.b, o.d)?,
            c: e(self.c, o.a, self.d, o.c)?,
            d: e(self.c, o.b, self.d, o.d)?,
        })
    }

    /// Sign-normalized copy: `c > 0`, or `c = 0` and `d > 0`.
    pub fn normalized(&self) -> Self {
        if self.c < 0 || (self.c == 0 && self.d < 0) {
            self.neg()
        } else {
            *self
        }
    }

    /// If the matrix fixes `∞`, returns `n` with `self = ±Tⁿ`.
    pub fn translation(&self) -> Option<i64> {
        let m = self.normalized();
        (m.c == 0 && m.a == 1 && m.d == 1).then_some(m.b)
    }

    pub fn apply_cusp(&self, x: Cusp) -> Cusp {
        let (p, q) = x.as_pair();
        let num = (self.a as i128) * (p as i128) + (self.b as i128) * (q as i128);
        let den = (self.c as i128) * (p as i128) + (self.d as i128) * (q as i128);
        // determinant one keeps (num, den) coprime
        let num = i64::try_from(num).expect("cusp numerator overflow");
        let den = i64::try_from(den).expect("cusp denominator overflow");
        Cusp::from_fraction(num, den).expect("determinant-one image of a cusp")
    }

    /// Möbius action `z ↦ (az + b)/(cz + d)` at the precision of `z`.
    pub fn apply(&self, z: &BigComplex) -> BigComplex {
        let p = z.prec();
        if self.c == 0 {
            // a = d = ±1
            let s = self.a * self.d;
            let mut re = Float::with_val(p, &z.re * s);
            re += self.b * self.d;
            let im = Float::with_val(p, &z.im * s);
            return BigComplex::new(re, im);
        }
        let mut num_re = Float::with_val(p, &z.re * self.a);
        num_re += self.b;
        let num_im = Float::with_val(p, &z.im * self.a);
        let mut den_re = Float::with_val(p, &z.re * self.c);
        den_re += self.d;
        let den_im = Float::with_val(p, &z.im * self.c);
        BigComplex::new(num_re, num_im).div(&BigComplex::new(den_re, den_im))
    }
}

impl Mul for IntMatrix2 {
    type Output = IntMatrix2;
    fn mul(self, rhs: IntMatrix2) -> IntMatrix2 {
        self.checked_mul(&rhs).expect("IntMatrix2 entry overflow")
    }
}

impl PartialEq for IntMatrix2 {
    fn eq(&self, other: &Self) -> bool {
        let (x, y) = (self.normalized(), other.normalized());
        x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d
    }
}

impl Eq for IntMatrix2 {}

impl Hash for IntMatrix2 {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let m = self.normalized();
        (m.a, m.b, m.c, m.d).hash(state);
    }
}

impl fmt::Debug for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
