use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::Float;

/// Decimal digits kept beyond the requested working precision.
pub const GUARD_DIGITS: u32 = 10;

/// Binary precision for `digits` significant decimal digits plus the guard.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits + GUARD_DIGITS) * std::f64::consts::LOG2_10).ceil() as u32
}

/// Decimal digits represented by `bits`.
pub fn digits_for_bits(bits: u32) -> u32 {
    (f64::from(bits) / std::f64::consts::LOG2_10).floor() as u32
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Complex number with MPFR real and imaginary parts.
///
/// Binary operations produce results at the larger of the two operand
/// precisions.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(prec, 1.0, 0.0)
    }

    pub fn i(prec: u32) -> Self {
        Self::from_f64(prec, 0.0, 1.0)
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        BigComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        BigComplex { re, im }
    }

    pub fn from_i64(prec: u32, re: i64, im: i64) -> Self {
        BigComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    /// `exp(2πi·k/n)`.
    pub fn root_of_unity(prec: u32, k: i64, n: u64) -> Self {
        let mut angle = pi(prec + 16) * 2u32;
        angle *= k;
        angle /= n;
        let (s, c) = angle.sin_cos(Float::new(prec + 16));
        BigComplex {
            re: Float::with_val(prec, c),
            im: Float::with_val(prec, s),
        }
    }

    /// Parses `"re im"` or a lone real part from decimal strings.
    pub fn parse_pair(prec: u32, re: &str, im: Option<&str>) -> Option<Self> {
        let re = Float::parse(re).ok().map(|p| Float::with_val(prec, p))?;
        let im = match im {
            Some(s) => Float::parse(s).ok().map(|p| Float::with_val(prec, p))?,
            None => Float::new(prec),
        };
        Some(BigComplex { re, im })
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut n = Float::with_val(p, self.re.square_ref());
        n += &self.im * &self.im;
        n
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        BigComplex {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn mul_i(&self) -> Self {
        BigComplex {
            re: Float::with_val(self.im.prec(), -&self.im),
            im: self.re.clone(),
        }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        BigComplex {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        }
    }

    pub fn div(&self, other: &BigComplex) -> Self {
        self * &other.recip()
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (s, c) = Float::with_val(p, &self.im).sin_cos(Float::new(p));
        BigComplex {
            re: Float::with_val(p, &r * &c),
            im: Float::with_val(p, &r * &s),
        }
    }

    /// Integer power by repeated squaring; negative exponents use the reciprocal.
    pub fn powi(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.recip() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut result = BigComplex::one(self.prec());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        result
    }

    /// `self·m + b`, the Horner step.
    pub fn mul_add(&self, m: &BigComplex, b: &BigComplex) -> Self {
        let mut r = self * m;
        r += b;
        r
    }

    /// Decimal rendering `"re im"` with the given number of significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        format!(
            "{} {}",
            float_to_decimal(&self.re, digits),
            float_to_decimal(&self.im, digits)
        )
    }
}

/// Significant-digit decimal rendering accepted by `Float::parse`.
pub fn float_to_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {:+}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_decimal(digits))
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        BigComplex {
            re: Float::with_val(p, &self.re + &rhs.re),
            im: Float::with_val(p, &self.im + &rhs.im),
        }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        BigComplex {
            re: Float::with_val(p, &self.re - &rhs.re),
            im: Float::with_val(p, &self.im - &rhs.im),
        }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re -= &self.im * &rhs.im;
        let mut im = Float::with_val(p, &self.re * &rhs.im);
        im += &self.im * &rhs.re;
        BigComplex { re, im }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: Float::with_val(self.re.prec(), -&self.re),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }
}

impl AddAssign<&BigComplex> for BigComplex {
    fn add_assign(&mut self, rhs: &BigComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&BigComplex> for BigComplex {
    fn sub_assign(&mut self, rhs: &BigComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

/// Hermitian inner product `Σ conj(a_i)·b_i`.
pub fn inner(a: &[BigComplex], b: &[BigComplex]) -> BigComplex {
    let prec = a.first().map_or(64, BigComplex::prec);
    let mut acc = BigComplex::zero(prec);
    for (x, y) in a.iter().zip(b) {
        // conj(x)·y = (xr·yr + xi·yi) + i(xr·yi − xi·yr)
        acc.re += &x.re * &y.re;
        acc.re += &x.im * &y.im;
        acc.im += &x.re * &y.im;
        acc.im -= &x.im * &y.re;
    }
    acc
}

/// Plain ℓ2 norm over real and imaginary parts of all entries.
pub fn norm2(v: &[BigComplex]) -> Float {
    let prec = v.first().map_or(64, BigComplex::prec);
    let mut acc = Float::new(prec);
    for x in v {
        acc += &x.re * &x.re;
        acc += &x.im * &x.im;
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_identities() {
        let p = 200;
        let a = BigComplex::from_f64(p, 1.5, -2.0);
        let b = BigComplex::from_f64(p, -0.25, 3.0);
        let prod = &a * &b;
        assert_eq!(prod.re.to_f64(), 1.5 * -0.25 - (-2.0 * 3.0));
        assert_eq!(prod.im.to_f64(), 1.5 * 3.0 + (-2.0 * -0.25));
        let back = prod.div(&b);
        assert!((&back - &a).abs_f64() < 1e-55);
        assert!((&a.powi(-3) * &a.powi(3)).re.to_f64() - 1.0 < 1e-55);
    }

    #[test]
    fn exp_of_i_pi_is_minus_one() {
        let p = 256;
        let z = BigComplex::new(Float::new(p), pi(p));
        let e = z.exp();
        let diff = &e + &BigComplex::one(p);
        assert!(diff.abs_f64() < 1e-70);
    }

    #[test]
    fn roots_of_unity() {
        let p = 256;
        let w = BigComplex::root_of_unity(p, 1, 8);
        let w8 = w.powi(8);
        assert!((&w8 - &BigComplex::one(p)).abs_f64() < 1e-70);
        let w4 = BigComplex::root_of_unity(p, 1, 4);
        assert!((&w4 - &BigComplex::i(p)).abs_f64() < 1e-70);
    }

    #[test]
    fn decimal_round_trip() {
        let p = bits_for_digits(40);
        let third = BigComplex::new(Float::with_val(p, 1) / 3u32, Float::with_val(p, -2) / 7u32);
        let s = third.to_decimal(55);
        let mut it = s.split_whitespace();
        let back = BigComplex::parse_pair(p, it.next().unwrap(), it.next()).unwrap();
        assert!((&back - &third).abs_f64() < 1e-50);
        assert_eq!(float_to_decimal(&Float::new(p), 10), "0");
    }

    #[test]
    fn precision_budget_conversions() {
        assert_eq!(bits_for_digits(50), 200);
        assert_eq!(digits_for_bits(200), 60);
    }
}
