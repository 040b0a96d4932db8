//! Iterative radix-2 FFT at arbitrary precision.

use rug::Float;

use super::complex::BigComplex;
use super::MpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `X[m] = Σ_j v[j]·exp(−2πi·jm/M)`
    Forward,
    /// Exact inverse of `Forward`, including the `1/M` factor.
    Inverse,
}

/// Precomputed twiddle factors and bit-reversal table for one size and precision.
#[derive(Clone)]
pub struct FftPlan {
    len: usize,
    prec: u32,
    // exp(−2πi·k/len) for k < len/2
    twiddles: Vec<BigComplex>,
    bitrev: Vec<usize>,
}

impl std::fmt::Debug for FftPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftPlan")
            .field("len", &self.len)
            .field("prec", &self.prec)
            .finish()
    }
}

impl FftPlan {
    pub fn new(len: usize, prec: u32) -> Result<Self, MpError> {
        if len == 0 || !len.is_power_of_two() {
            return Err(MpError::NotPowerOfTwo(len));
        }
        let bits = len.trailing_zeros();
        let bitrev = (0..len)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
            .collect();
        let twiddles = (0..len / 2)
            .map(|k| BigComplex::root_of_unity(prec, -(k as i64), len as u64))
            .collect();
        Ok(FftPlan {
            len,
            prec,
            twiddles,
            bitrev,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn transform(&self, input: &[BigComplex], dir: Direction) -> Result<Vec<BigComplex>, MpError> {
        if input.len() != self.len {
            return Err(MpError::LengthMismatch {
                expected: self.len,
                found: input.len(),
            });
        }
        let mut data: Vec<BigComplex> = self.bitrev.iter().map(|&i| input[i].clone()).collect();
        let mut half = 1;
        while half < self.len {
            let stride = self.len / (2 * half);
            for start in (0..self.len).step_by(2 * half) {
                for k in 0..half {
                    let w = &self.twiddles[k * stride];
                    let w = match dir {
                        Direction::Forward => w.clone(),
                        Direction::Inverse => w.conj(),
                    };
                    let t = &w * &data[start + k + half];
                    let u = data[start + k].clone();
                    data[start + k] = &u + &t;
                    data[start + k + half] = &u - &t;
                }
            }
            half *= 2;
        }
        if dir == Direction::Inverse {
            let inv = Float::with_val(self.prec, 1) / self.len as u64;
            for x in &mut data {
                *x = x.scale(&inv);
            }
        }
        Ok(data)
    }
}

/// One-shot transform; builds a plan for the input length.
pub fn fft(v: &[BigComplex], dir: Direction) -> Result<Vec<BigComplex>, MpError> {
    let prec = v.iter().map(BigComplex::prec).max().unwrap_or(64);
    FftPlan::new(v.len(), prec)?.transform(v, dir)
}
