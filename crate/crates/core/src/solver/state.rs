use std::sync::Arc;

use rug::Float;

use crate::mpcore::{norm2, pi, BigComplex, CoeffLayout};
use crate::subgroup::{ReduceError, SubgroupData};

/// Truncated Fourier expansions of the hauptmodul at every cusp.
///
/// Cusp `k` of width `w_k` carries `a^(k)_m` for `m = μ_k..=N·w_k`, with
/// `μ_0 = −1` and `μ_k = 0` otherwise, in the local parameter
/// `q_k = exp(2πiζ/w_k)`, `ζ = ν_k·z`. The principal part is pinned:
/// `a^(0)_{−1} = 1`, `a^(0)_0 = 0`.
#[derive(Debug, Clone)]
pub struct ExpansionState {
    group: Arc<SubgroupData>,
    n: usize,
    prec: u32,
    /// `coeffs[k][m − μ_k]`
    coeffs: Vec<Vec<BigComplex>>,
}

impl PartialEq for ExpansionState {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.prec == other.prec && self.coeffs == other.coeffs
    }
}

impl ExpansionState {
    /// All unknowns zero, principal part pinned.
    pub fn initial(group: Arc<SubgroupData>, n: usize, prec: u32) -> Self {
        let coeffs = group
            .cusps
            .iter()
            .map(|c| {
                let extra = usize::from(c.is_principal);
                vec![BigComplex::zero(prec); n * c.width + 1 + extra]
            })
            .collect();
        let mut s = ExpansionState {
            group,
            n,
            prec,
            coeffs,
        };
        s.pin();
        s
    }

    pub(crate) fn pin(&mut self) {
        self.coeffs[0][0] = BigComplex::one(self.prec);
        self.coeffs[0][1] = BigComplex::zero(self.prec);
    }

    pub fn group(&self) -> &Arc<SubgroupData> {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn num_cusps(&self) -> usize {
        self.coeffs.len()
    }

    pub fn mu(&self, cusp: usize) -> i64 {
        if cusp == 0 {
            -1
        } else {
            0
        }
    }

    /// `N_k = N·w_k`
    pub fn n_k(&self, cusp: usize) -> i64 {
        (self.n * self.group.cusps[cusp].width) as i64
    }

    pub fn coefficient(&self, cusp: usize, m: i64) -> Option<&BigComplex> {
        let idx = m - self.mu(cusp);
        if idx < 0 {
            return None;
        }
        self.coeffs.get(cusp)?.get(idx as usize)
    }

    /// Coefficients of cusp `k` from `m = μ_k` upwards.
    pub fn coefficients(&self, cusp: usize) -> &[BigComplex] {
        &self.coeffs[cusp]
    }

    /// Sets a free coefficient. Returns `false` for pinned or out-of-range `m`.
    pub fn set_coefficient(&mut self, cusp: usize, m: i64, value: BigComplex) -> bool {
        if cusp == 0 && m <= 0 {
            return false;
        }
        let idx = m - self.mu(cusp);
        match self.coeffs.get_mut(cusp).and_then(|c| c.get_mut(idx as usize)) {
            Some(slot) if idx >= 0 => {
                *slot = value.with_prec(self.prec);
                true
            }
            _ => false,
        }
    }

    /// Layout of the unknowns: `a^(0)_1..` and `a^(k)_0..` for `k > 0`.
    pub fn layout(&self) -> CoeffLayout {
        let ranges: Vec<(i64, i64)> = (0..self.num_cusps())
            .map(|k| (if k == 0 { 1 } else { 0 }, self.n_k(k)))
            .collect();
        CoeffLayout::new(&ranges)
    }

    pub fn unknowns(&self) -> Vec<BigComplex> {
        let mut out = Vec::with_capacity(self.layout().len());
        for (k, c) in self.coeffs.iter().enumerate() {
            let skip = if k == 0 { 2 } else { 0 };
            out.extend(c[skip..].iter().cloned());
        }
        out
    }

    /// Replaces the unknowns; the principal part stays pinned.
    pub fn set_unknowns(&mut self, x: &[BigComplex]) {
        let mut it = x.iter();
        for (k, c) in self.coeffs.iter_mut().enumerate() {
            let skip = if k == 0 { 2 } else { 0 };
            for slot in &mut c[skip..] {
                *slot = it.next().expect("unknown vector too short").clone();
            }
        }
        debug_assert!(it.next().is_none(), "unknown vector too long");
    }

    pub fn with_unknowns(&self, x: &[BigComplex]) -> Self {
        let mut s = self.clone();
        s.set_unknowns(x);
        s
    }

    /// Replaces every coefficient, pinned ones included. Used by the sweep
    /// for the linear part, where the principal part is zero.
    pub(crate) fn with_raw(&self, coeffs: Vec<Vec<BigComplex>>) -> Self {
        ExpansionState {
            group: Arc::clone(&self.group),
            n: self.n,
            prec: self.prec,
            coeffs,
        }
    }

    pub(crate) fn raw(&self) -> &[Vec<BigComplex>] {
        &self.coeffs
    }

    /// ℓ2 distance between the unknown vectors of two states.
    pub fn distance(&self, other: &ExpansionState) -> Float {
        let a = self.unknowns();
        let b = other.unknowns();
        let diff: Vec<BigComplex> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        norm2(&diff)
    }

    /// `f_k(ζ) = Σ_{m=μ_k}^{N_k} a^(k)_m exp(2πimζ/w_k)`.
    pub fn evaluate_local(&self, cusp: usize, zeta: &BigComplex) -> BigComplex {
        let q = local_parameter(zeta, self.group.cusps[cusp].width, self.prec);
        horner(&self.coeffs[cusp], self.mu(cusp), &q)
    }

    /// The hauptmodul at `z`, through the expansion of the cusp whose tile
    /// contains the reduced point.
    pub fn evaluate(&self, z: &BigComplex) -> Result<BigComplex, ReduceError> {
        let z = z.with_prec(self.prec);
        let r = self.group.reduce_point(&z)?;
        let tile = self.group.tile(r.coset);
        let mut zeta = r.z;
        zeta.re += tile.shift;
        Ok(self.evaluate_local(tile.cusp, &zeta))
    }
}

/// `exp(2πiζ/w)`.
pub(crate) fn local_parameter(zeta: &BigComplex, width: usize, prec: u32) -> BigComplex {
    let mut two_pi_over_w = pi(prec) * 2u32;
    two_pi_over_w /= width as u32;
    zeta.scale(&two_pi_over_w).mul_i().exp()
}

/// `Σ c[i]·q^{i+μ}` for `μ ∈ {−1, 0}`.
pub(crate) fn horner(coeffs: &[BigComplex], mu: i64, q: &BigComplex) -> BigComplex {
    let start = (-mu) as usize;
    let prec = q.prec();
    let mut acc = BigComplex::zero(prec);
    for c in coeffs[start..].iter().rev() {
        acc = acc.mul_add(q, c);
    }
    if mu == -1 && !coeffs[0].is_zero() {
        acc += &(&coeffs[0] * &q.recip());
    }
    acc
}
