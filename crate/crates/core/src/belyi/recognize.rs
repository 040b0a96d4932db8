//! Exact recognition of numerically known algebraic numbers.
//!
//! Rationals come from continued-fraction convergents; algebraic numbers
//! from an integer relation among `1, x, …, x^n` found by LLL reduction.
//! Every answer carries a certification margin: the number of decimal
//! digits by which the match beats what a random value of the same
//! accuracy would achieve with an answer of the same size.

use std::fmt;

use rug::float::Round;
use rug::ops::{DivRounding, Pow};
use rug::{Float, Integer, Rational};
use thiserror::Error;

use crate::mpcore::{digits_for_bits, BigComplex};

#[derive(Debug, Clone, PartialEq)]
pub struct RecognizeOptions {
    /// Largest minimal-polynomial degree tried by the lattice search.
    pub max_degree: usize,
    /// Largest absolute coefficient accepted in a minimal polynomial.
    pub height_bound: Integer,
    /// Decimal digits of the input that are trusted (relative accuracy).
    pub accuracy_digits: u32,
    /// Answers with a smaller certification margin are rejected.
    pub min_margin_digits: f64,
}

impl RecognizeOptions {
    pub fn new(max_degree: usize, height_bound: impl Into<Integer>, accuracy_digits: u32) -> Self {
        RecognizeOptions {
            max_degree,
            height_bound: height_bound.into(),
            accuracy_digits,
            min_margin_digits: 8.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Exact {
    Rational(Rational),
    /// Root of a primitive integer polynomial (constant term first, positive
    /// leading coefficient) of degree at least 2, identified by `approx`.
    Algebraic {
        min_poly: Vec<Integer>,
        approx: BigComplex,
    },
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exact::Rational(q) => write!(f, "{q}"),
            Exact::Algebraic { min_poly, approx } => {
                write!(f, "root of [")?;
                for (i, c) in min_poly.iter().enumerate().rev() {
                    if i + 1 != min_poly.len() {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "] near {approx:?}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recognition {
    pub exact: Exact,
    /// Relative mismatch between the exact answer and the input.
    pub residual: f64,
    pub margin_digits: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecognizeError {
    #[error("insufficient precision: {needed} digits needed, {available} available")]
    InsufficientPrecision { needed: u32, available: u32 },
    #[error("value {index} is not recognized within degree {max_degree} and the height bound")]
    NotFound { index: usize, max_degree: usize },
}

fn log10_abs_int(x: &Integer) -> f64 {
    if *x == 0 {
        return 0.0;
    }
    let bits = x.significant_bits();
    if bits < 1000 {
        x.to_f64().abs().log10()
    } else {
        f64::from(bits) * std::f64::consts::LOG10_2
    }
}

fn log10_float(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log10() + f64::from(e) * std::f64::consts::LOG10_2
}

/// Best rational approximation of `x` to relative accuracy
/// `10^{−accuracy}` with denominator at most `10^{accuracy/2}`.
pub fn rational_reconstruction(x: &Float, accuracy_digits: u32) -> Option<Recognition> {
    let prec = x.prec();
    let exact = x.to_rational()?;
    let scale = Float::with_val(prec, x.abs_ref()).max(&Float::with_val(prec, 1));
    let tol = Float::with_val(prec, Float::i_exp(1, 0)) * &scale
        / Float::with_val(prec, 10u32).pow(accuracy_digits);
    let max_den = Integer::from(10u32).pow(accuracy_digits / 2);

    // convergents h/k of the continued fraction of `exact`
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let mut rest = exact.clone();
    loop {
        let (a, frac) = {
            let num = rest.numer().clone();
            let den = rest.denom().clone();
            let a = num.clone().div_floor(&den);
            let frac = Rational::from((num - Integer::from(&a * &den), den));
            (a, frac)
        };
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        if k2 > max_den {
            return None;
        }
        let cand = Rational::from((h2.clone(), k2.clone()));
        let diff = Float::with_val(prec, Rational::from(&cand - &exact)).abs();
        if diff <= tol {
            let residual = (diff / &scale).to_f64();
            let margin = f64::from(accuracy_digits)
                - 2.0 * log10_abs_int(&k2)
                - log10_float(&scale).max(0.0);
            return Some(Recognition {
                exact: Exact::Rational(cand),
                residual,
                margin_digits: margin,
            });
        }
        if frac == 0 {
            return None;
        }
        rest = frac.recip();
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
    }
}

/// LLL reduction (`δ = 3/4`) of the rows of `basis`, which must be linearly
/// independent. Gram–Schmidt data is kept in floating point with enough
/// bits for the entry sizes; the basis itself stays exact.
pub fn lll(mut b: Vec<Vec<Integer>>) -> Vec<Vec<Integer>> {
    let n = b.len();
    if n < 2 {
        return b;
    }
    let max_bits = b
        .iter()
        .flatten()
        .map(Integer::significant_bits)
        .max()
        .unwrap_or(1);
    let prec = 2 * max_bits + 64 * n as u32 + 128;
    let to_f = |v: &[Integer]| -> Vec<Float> { v.iter().map(|x| Float::with_val(prec, x)).collect() };
    let dot = |x: &[Float], y: &[Float]| -> Float {
        let mut s = Float::new(prec);
        for (a, c) in x.iter().zip(y) {
            s += a * c;
        }
        s
    };

    // Gram–Schmidt from scratch
    let mut mu = vec![vec![Float::new(prec); n]; n];
    let mut bb = vec![Float::new(prec); n];
    let mut bstar: Vec<Vec<Float>> = Vec::with_capacity(n);
    for i in 0..n {
        let bi = to_f(&b[i]);
        let mut v = bi.clone();
        for j in 0..i {
            mu[i][j] = dot(&bi, &bstar[j]) / &bb[j];
            for (x, y) in v.iter_mut().zip(&bstar[j]) {
                *x -= Float::with_val(prec, &mu[i][j] * y);
            }
        }
        bb[i] = dot(&v, &v);
        bstar.push(v);
    }

    let half = Float::with_val(prec, 0.5);
    let delta = Float::with_val(prec, 0.75);
    let reduce = |b: &mut Vec<Vec<Integer>>, mu: &mut Vec<Vec<Float>>, k: usize, l: usize| {
        if Float::with_val(prec, mu[k][l].abs_ref()) > half {
            let q = Float::with_val(prec, mu[k][l].round_ref());
            let qi = q.to_integer().expect("finite");
            let (head, tail) = b.split_at_mut(k);
            for (x, y) in tail[0].iter_mut().zip(&head[l]) {
                *x -= Integer::from(&qi * y);
            }
            mu[k][l] -= &q;
            for i in 0..l {
                let t = Float::with_val(prec, &q * &mu[l][i]);
                mu[k][i] -= t;
            }
        }
    };

    let mut k = 1;
    while k < n {
        reduce(&mut b, &mut mu, k, k - 1);
        let m = mu[k][k - 1].clone();
        let lovasz = Float::with_val(prec, &delta - Float::with_val(prec, &m * &m)) * &bb[k - 1];
        if bb[k] < lovasz {
            b.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = mu[k][j].clone();
                mu[k][j] = mu[k - 1][j].clone();
                mu[k - 1][j] = t;
            }
            let new_bb = Float::with_val(prec, &bb[k] + Float::with_val(prec, &m * &m) * &bb[k - 1]);
            mu[k][k - 1] = Float::with_val(prec, &m * &bb[k - 1]) / &new_bb;
            bb[k] = Float::with_val(prec, &bb[k - 1] * &bb[k]) / &new_bb;
            bb[k - 1] = new_bb;
            for i in k + 1..n {
                let t = mu[i][k].clone();
                mu[i][k] = Float::with_val(prec, &mu[i][k - 1] - Float::with_val(prec, &m * &t));
                mu[i][k - 1] = t + Float::with_val(prec, &mu[k][k - 1] * &mu[i][k]);
            }
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                reduce(&mut b, &mut mu, k, l);
            }
            k += 1;
        }
    }
    b
}

/// Short integer vector `c` with `Σ c_i x_i ≈ 0`, from the lattice spanned
/// by `e_i ‖ round(C·Re x_i) ‖ round(C·Im x_i)` with `C = 10^scale_digits`.
/// Candidates are returned in reduced order.
pub fn integer_relations(xs: &[BigComplex], scale_digits: u32, complex: bool) -> Vec<Vec<Integer>> {
    let n = xs.len();
    let prec = xs[0].prec();
    let c = Float::with_val(prec, 10u32).pow(scale_digits);
    let round = |x: &Float| -> Integer {
        Float::with_val(prec, x * &c)
            .to_integer_round(Round::Nearest)
            .map(|(i, _)| i)
            .unwrap_or_default()
    };
    let basis: Vec<Vec<Integer>> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut row: Vec<Integer> = (0..n).map(|j| Integer::from(i == j)).collect();
            row.push(round(&x.re));
            if complex {
                row.push(round(&x.im));
            }
            row
        })
        .collect();
    lll(basis).into_iter().map(|mut r| {
        r.truncate(n);
        r
    }).collect()
}

fn is_real(x: &BigComplex, accuracy_digits: u32) -> bool {
    let scale = x.abs_f64().max(1.0);
    x.im.to_f64().abs() <= scale * 10f64.powi(-(accuracy_digits as i32))
}

/// Minimal polynomial of `x` of degree `2..=max_degree`, if one within the
/// height bound certifies.
fn algebraic(x: &BigComplex, opts: &RecognizeOptions) -> Option<Recognition> {
    let prec = x.prec();
    let real = is_real(x, opts.accuracy_digits);
    let x = if real {
        BigComplex::from_real(x.re.clone())
    } else {
        x.clone()
    };
    let weight = if real { 1.0 } else { 2.0 };
    for degree in 2..=opts.max_degree {
        let powers: Vec<BigComplex> = (0..=degree).map(|i| x.powi(i as i64)).collect();
        let biggest = powers
            .iter()
            .map(BigComplex::abs)
            .fold(Float::with_val(prec, 1), |m, a| if a > m { a } else { m });
        let normalized: Vec<BigComplex> = powers
            .iter()
            .map(|p| p.scale(&Float::with_val(prec, biggest.recip_ref())))
            .collect();
        let scale = opts.accuracy_digits.saturating_sub(2);
        for rel in integer_relations(&normalized, scale, !real) {
            if rel[degree] == 0 {
                continue;
            }
            let height = rel.iter().map(|c| c.clone().abs()).max().expect("non-empty");
            if height > opts.height_bound {
                continue;
            }
            let mut value = BigComplex::zero(prec);
            let mut size = Float::new(prec);
            for (c, p) in rel.iter().zip(&powers) {
                let cf = Float::with_val(prec, c);
                value += &p.scale(&cf);
                size += Float::with_val(prec, cf.abs_ref()) * p.abs();
            }
            let residual = (value.abs() / size).to_f64();
            if residual > 10f64.powi(-(scale as i32)) * 10.0 {
                continue;
            }
            let margin = weight * f64::from(opts.accuracy_digits)
                - (degree as f64 + 1.0) * log10_abs_int(&height).max(1.0);
            if margin < opts.min_margin_digits {
                continue;
            }
            let g = rel.iter().fold(Integer::new(), |g, c| g.gcd(c));
            let sign = if rel[degree] < 0 { -1 } else { 1 };
            let min_poly = rel.iter().map(|c| Integer::from(c / &g) * sign).collect();
            return Some(Recognition {
                exact: Exact::Algebraic { min_poly, approx: x },
                residual,
                margin_digits: margin,
            });
        }
    }
    None
}

/// Recognizes one value: first as a rational, then by lattice search.
pub fn recognize_one(x: &BigComplex, opts: &RecognizeOptions) -> Result<Recognition, RecognizeError> {
    let available = digits_for_bits(x.prec());
    if opts.accuracy_digits > available {
        return Err(RecognizeError::InsufficientPrecision {
            needed: opts.accuracy_digits,
            available,
        });
    }
    if is_real(x, opts.accuracy_digits) {
        if let Some(r) = rational_reconstruction(&x.re, opts.accuracy_digits) {
            if r.margin_digits >= opts.min_margin_digits {
                return Ok(r);
            }
        }
    }
    if opts.max_degree >= 2 {
        let needed = (opts.max_degree as f64 + 1.0) * log10_abs_int(&opts.height_bound).max(1.0)
            + opts.min_margin_digits;
        if f64::from(opts.accuracy_digits) < needed {
            return Err(RecognizeError::InsufficientPrecision {
                needed: needed.ceil() as u32,
                available: opts.accuracy_digits,
            });
        }
        if let Some(r) = algebraic(x, opts) {
            return Ok(r);
        }
    }
    Err(RecognizeError::NotFound {
        index: 0,
        max_degree: opts.max_degree,
    })
}

/// Recognizes every value or reports the first failure.
pub fn recognize(values: &[BigComplex], opts: &RecognizeOptions) -> Result<Vec<Recognition>, RecognizeError> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            recognize_one(v, opts).map_err(|e| match e {
                RecognizeError::NotFound { max_degree, .. } => RecognizeError::NotFound { index: i, max_degree },
                other => other,
            })
        })
        .collect()
}

/// Coordinates of `x` in the power basis `1, α, …, α^{n−1}` of `ℚ(α)`,
/// from an integer relation `d·x = Σ c_i α^i`. Returns `(c, d)` with `d > 0`.
pub fn express_in_power_basis(
    x: &BigComplex,
    alpha: &BigComplex,
    field_degree: usize,
    opts: &RecognizeOptions,
) -> Option<(Vec<Integer>, Integer)> {
    let prec = x.prec();
    let mut xs: Vec<BigComplex> = (0..field_degree).map(|i| alpha.powi(i as i64)).collect();
    xs.push(-x);
    let biggest = xs
        .iter()
        .map(BigComplex::abs)
        .fold(Float::with_val(prec, 1), |m, a| if a > m { a } else { m });
    let normalized: Vec<BigComplex> = xs
        .iter()
        .map(|p| p.scale(&Float::with_val(prec, biggest.recip_ref())))
        .collect();
    let complex = !is_real(alpha, opts.accuracy_digits) || !is_real(x, opts.accuracy_digits);
    let scale = opts.accuracy_digits.saturating_sub(2);
    for rel in integer_relations(&normalized, scale, complex) {
        let d = rel[field_degree].clone();
        if d == 0 {
            continue;
        }
        let height = rel.iter().map(|c| c.clone().abs()).max().expect("non-empty");
        if height > opts.height_bound {
            continue;
        }
        let mut value = BigComplex::zero(prec);
        let mut size = Float::new(prec);
        for (c, p) in rel.iter().zip(&xs) {
            let cf = Float::with_val(prec, c);
            value += &p.scale(&cf);
            size += Float::with_val(prec, cf.abs_ref()) * p.abs();
        }
        if (value.abs() / size).to_f64() > 10f64.powi(-(scale as i32)) * 10.0 {
            continue;
        }
        let sign = if d < 0 { -1 } else { 1 };
        let coords = rel[..field_degree].iter().map(|c| Integer::from(c * sign)).collect();
        return Some((coords, d * sign));
    }
    None
}
