//! Reduction of points of the upper half-plane into the standard fundamental
//! domain `{|Re z| ≤ 1/2, |z| ≥ 1}` with coset tracking.

use rug::Float;
use thiserror::Error;

use crate::mpcore::BigComplex;

use super::{IntMatrix2, SubgroupData};

const MAX_STEPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("point is not in the upper half-plane")]
    NotInUpperHalfPlane,
    #[error("reduction did not terminate after {0} steps")]
    NoTermination(usize),
    #[error("translation or matrix entry exceeds 64 bits")]
    Overflow,
}

#[derive(Debug, Clone)]
pub struct Reduction {
    /// `w·z`, in the fundamental domain.
    pub z: BigComplex,
    pub w: IntMatrix2,
    /// Coset `l` with `Γw⁻¹ = Γγ_l`, so that `γ_l·z*` is `Γ`-equivalent to `z`.
    pub coset: usize,
}

/// Reduces `z` with translations into `Re ∈ [−1/2, 1/2)` and inversions
/// while `|z| < 1`, without coset bookkeeping.
pub fn reduce_to_fundamental_domain(z: &BigComplex) -> Result<(BigComplex, IntMatrix2), ReduceError> {
    let r = reduce_impl(z, |_, _| {})?;
    Ok((r.0, r.1))
}

fn reduce_impl<F>(z: &BigComplex, mut on_step: F) -> Result<(BigComplex, IntMatrix2), ReduceError>
where
    F: FnMut(Step, i64),
{
    if !(z.im > 0) {
        return Err(ReduceError::NotInUpperHalfPlane);
    }
    let p = z.prec();
    let mut z = z.clone();
    let mut w = IntMatrix2::IDENTITY;
    for _ in 0..MAX_STEPS {
        let shifted = Float::with_val(p, &z.re + 0.5f64).floor();
        let n = shifted
            .to_integer()
            .and_then(|i| i.to_i64())
            .ok_or(ReduceError::Overflow)?;
        if n != 0 {
            z.re -= n;
            w = IntMatrix2::t_pow(-n)
                .checked_mul(&w)
                .ok_or(ReduceError::Overflow)?;
            on_step(Step::Translate, n);
        }
        if z.norm_sqr() < 1 {
            z = -&z.recip();
            w = IntMatrix2::S.checked_mul(&w).ok_or(ReduceError::Overflow)?;
            on_step(Step::Invert, 0);
        } else {
            return Ok((z, w));
        }
    }
    Err(ReduceError::NoTermination(MAX_STEPS))
}

#[derive(Clone, Copy)]
enum Step {
    /// `z ↦ z − n`
    Translate,
    /// `z ↦ −1/z`
    Invert,
}

impl SubgroupData {
    /// Reduces `z` to the fundamental domain, tracking the coset of `w⁻¹`.
    ///
    /// Each step `z ↦ g·z` replaces `w` by `g·w`, hence `w⁻¹` by `w⁻¹·g⁻¹` and
    /// the coset `l` by `l·π(g⁻¹)`.
    pub fn reduce_point(&self, z: &BigComplex) -> Result<Reduction, ReduceError> {
        let mut coset = 0usize;
        let (z, w) = reduce_impl(z, |step, n| match step {
            // g = T^{−n}, g⁻¹ = Tⁿ
            Step::Translate => coset = self.shift_coset(coset, n),
            // g = g⁻¹ = S
            Step::Invert => coset = self.s0.apply(coset),
        })?;
        Ok(Reduction { z, w, coset })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn gamma0_2() -> SubgroupData {
        let s0 = Permutation::parse_cycles("(1,2)", 3).unwrap();
        let s1 = Permutation::parse_cycles("(1,2,3)", 3).unwrap();
        SubgroupData::build(&s0, &s1).unwrap()
    }

    #[test]
    fn translation_only() {
        let g = gamma0_2();
        let p = 200;
        let r = g.reduce_point(&BigComplex::from_f64(p, 5.0, 1.0)).unwrap();
        assert!((&r.z - &BigComplex::i(p)).abs_f64() < 1e-55);
        assert_eq!(r.w, IntMatrix2::t_pow(-5));
        assert_eq!(r.coset, g.t_perm.pow(5).apply(0));
    }

    #[test]
    fn single_inversion() {
        let g = gamma0_2();
        let p = 200;
        let r = g.reduce_point(&BigComplex::from_f64(p, 0.0, 0.25)).unwrap();
        assert!((&r.z - &BigComplex::from_f64(p, 0.0, 4.0)).abs_f64() < 1e-55);
        assert_eq!(r.w, IntMatrix2::S);
        assert_eq!(r.coset, g.s0.apply(0));
    }

    #[test]
    fn lower_half_plane_rejected() {
        let g = gamma0_2();
        let err = g.reduce_point(&BigComplex::from_f64(64, 0.3, 0.0)).unwrap_err();
        assert_eq!(err, ReduceError::NotInUpperHalfPlane);
    }

    #[test]
    fn half_open_boundary() {
        let p = 128;
        let (z, _) = reduce_to_fundamental_domain(&BigComplex::from_f64(p, 0.5, 2.0)).unwrap();
        assert_eq!(z.re.to_f64(), -0.5);
        let (z, _) = reduce_to_fundamental_domain(&BigComplex::from_f64(p, -0.5, 2.0)).unwrap();
        assert_eq!(z.re.to_f64(), -0.5);
    }
}
