use log::warn;
use rug::ops::Pow;
use rug::{Float, Integer};

use crate::mpcore::{pi, BigComplex};
use crate::subgroup::{reduce_to_fundamental_domain, ReduceError};

/// Truncated `q`-expansion `j = Σ_{n ≥ −1} c(n) qⁿ` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JSeries {
    /// `coeffs[i] = c(i − 1)`
    pub coeffs: Vec<Integer>,
}

fn series_mul(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn divisor_power_sum(n: u64, k: u32) -> Integer {
    let mut s = Integer::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += Integer::from(d).pow(k);
            if d * d != n {
                s += Integer::from(n / d).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// `j = E4³/Δ` through `q^depth`, with `Δ = (E4³ − E6²)/1728`.
pub fn classical_j(depth: usize) -> JSeries {
    let depth = depth.max(1);
    // Δ = q·D with D(0) = 1, and j = E4³/D·q^{−1}: need E4³ and D through q^{depth+1}
    let len = depth + 2;
    let mut e4 = vec![Integer::from(1)];
    let mut e6 = vec![Integer::from(1)];
    for n in 1..=len as u64 {
        e4.push(divisor_power_sum(n, 3) * 240u32);
        e6.push(divisor_power_sum(n, 5) * -504i32);
    }
    let e4sq = series_mul(&e4, &e4, len + 1);
    let e4cube = series_mul(&e4sq, &e4, len + 1);
    let e6sq = series_mul(&e6, &e6, len + 1);
    let d: Vec<Integer> = (1..=len)
        .map(|i| Integer::from(&e4cube[i] - &e6sq[i]) / 1728u32)
        .collect();
    let mut inv = vec![Integer::from(1)];
    for k in 1..len {
        let mut s = Integer::new();
        for i in 1..=k {
            s -= &d[i] * &inv[k - i];
        }
        inv.push(s);
    }
    JSeries {
        coeffs: series_mul(&e4cube, &inv, len),
    }
}

impl JSeries {
    pub fn depth(&self) -> usize {
        self.coeffs.len() - 2
    }

    pub fn coeff(&self, n: i64) -> Option<&Integer> {
        usize::try_from(n + 1).ok().and_then(|i| self.coeffs.get(i))
    }

    /// Sums the series at `q = exp(2πiz)`; needs `Im z` large enough for the
    /// depth, with a warning when the last term is not negligible.
    pub fn eval_series(&self, z: &BigComplex) -> BigComplex {
        let prec = z.prec();
        let mut two_pi = pi(prec);
        two_pi *= 2u32;
        let q = z.scale(&two_pi).mul_i().exp();
        let mut acc = BigComplex::zero(prec);
        for c in self.coeffs[1..].iter().rev() {
            acc = &acc * &q;
            acc.re += c;
        }
        let mut val = &acc * &q;
        val = &val + &BigComplex::one(prec);
        let val = val.div(&q);
        let last = Float::with_val(prec, self.coeffs.last().expect("non-empty"))
            * q.abs().pow(self.depth() as u32);
        let floor = val.abs() * Float::with_val(prec, Float::i_exp(1, -(prec as i32)));
        if Float::with_val(prec, last.abs_ref()) > floor {
            warn!(
                "j series truncated at depth {} leaves a tail of about {:e}",
                self.depth(),
                last.to_f64()
            );
        }
        val
    }
}

/// Smallest depth whose tail at `Im z ≥ √3/2` drops below `2^{−prec}`.
pub fn depth_for_prec(prec: u32) -> usize {
    // c(n) ≈ exp(4π√n)/(√2·n^{3/4}), |q| ≤ exp(−π√3)
    let target = f64::from(prec) * std::f64::consts::LN_2;
    let rate = std::f64::consts::PI * 3f64.sqrt();
    let mut n = 1usize;
    while 4.0 * std::f64::consts::PI * (n as f64).sqrt() - rate * n as f64 > -target - 10.0 {
        n += 1;
    }
    n
}

/// `j(z)` for any `z` in the upper half-plane, via reduction to the standard
/// fundamental domain and the series there.
pub fn eval_j(z: &BigComplex) -> Result<BigComplex, ReduceError> {
    let (w, _) = reduce_to_fundamental_domain(z)?;
    Ok(classical_j(depth_for_prec(z.prec())).eval_series(&w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_coefficients() {
        let j = classical_j(4);
        let want = [1i64, 744, 196884, 21493760, 864299970, 20245856256];
        for (n, w) in (-1..).zip(want) {
            assert_eq!(*j.coeff(n).unwrap(), w, "c({n})");
        }
    }

    #[test]
    fn classical_values() {
        let p = 256;
        let at_i = eval_j(&BigComplex::i(p)).unwrap();
        assert!((&at_i - &BigComplex::from_f64(p, 1728.0, 0.0)).abs_f64() < 1e-60);
        let half = Float::with_val(p, 0.5);
        let rho = BigComplex::new(half, Float::with_val(p, 3).sqrt() / 2u32);
        assert!(eval_j(&rho).unwrap().abs_f64() < 1e-60);
        let two_i = BigComplex::from_f64(p, 0.0, 2.0);
        let v = eval_j(&two_i).unwrap();
        assert!((&v - &BigComplex::from_f64(p, 287496.0, 0.0)).abs_f64() < 1e-55);
    }
}
