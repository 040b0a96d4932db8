use std::sync::Arc;

use log::{debug, warn};
use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;

use crate::mpcore::{digits_for_bits, norm2, pi, BigComplex, Direction, FftPlan};
use crate::subgroup::SubgroupData;

use super::state::{horner, local_parameter, ExpansionState};
use super::{SolverConfig, SolverError};

/// A sampling point after reduction: which expansion to use and its local
/// parameter there.
#[derive(Debug, Clone)]
struct SamplePoint {
    cusp: usize,
    q: BigComplex,
}

#[derive(Debug, Clone)]
struct CuspSampling {
    plan: FftPlan,
    samples: Vec<SamplePoint>,
    /// `exp((2πh + iπ)·m/w)/M` for `m = μ..=N_k`
    rescale: Vec<BigComplex>,
    mu: i64,
}

/// The sweep map with all sampling geometry precomputed.
///
/// Cusp `k` is sampled at `ζ_j = w_k·j/M_k − 1/2 + ih`, `j < M_k`, where
/// `M_k` is the least power of two above `2·N·w_k`. Each `ν_k⁻¹·ζ_j` is
/// reduced once; the reduced point is recomputed from the exact integer
/// matrix so that no error accumulates along the reduction path.
pub struct Sweeper {
    group: Arc<SubgroupData>,
    n: usize,
    prec: u32,
    sample_height: f64,
    cusps: Vec<CuspSampling>,
    pool: Option<rayon::ThreadPool>,
}

impl std::fmt::Debug for Sweeper {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Sweeper")
            .field("n", &self.n)
            .field("prec", &self.prec)
            .field("sample_height", &self.sample_height)
            .field("sample_counts", &self.cusps.iter().map(|c| c.samples.len()).collect::<Vec<_>>())
            .finish()
    }
}

/// Least power of two strictly above `2·n_k`.
pub fn sample_count(n_k: usize) -> usize {
    (2 * n_k + 1).next_power_of_two()
}

impl Sweeper {
    pub fn new(group: Arc<SubgroupData>, cfg: &SolverConfig) -> Result<Self, SolverError> {
        Self::build(group, cfg.n, cfg.working_prec(), cfg.sample_height, cfg.threads)
    }

    /// Sampling tables for truncation `n` at binary precision `prec`.
    pub fn build(
        group: Arc<SubgroupData>,
        n: usize,
        prec: u32,
        sample_height: f64,
        threads: Option<usize>,
    ) -> Result<Self, SolverError> {
        let pool = match threads {
            Some(t) => Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| SolverError::Config(format!("thread pool: {e}")))?,
            ),
            None => None,
        };
        let mut sweeper = Sweeper {
            group,
            n,
            prec,
            sample_height,
            cusps: Vec::new(),
            pool,
        };
        let amplification =
            std::f64::consts::PI * 2.0 * sample_height * n as f64 / std::f64::consts::LN_10;
        if amplification >= f64::from(digits_for_bits(prec)) {
            warn!(
                "rescaling amplifies by 1e{amplification:.0}, beyond the {} working digits",
                digits_for_bits(prec)
            );
        }
        let cusps = sweeper.install(|| {
            (0..sweeper.group.cusps.len())
                .into_par_iter()
                .map(|k| sweeper.sampling_for(k))
                .collect::<Result<Vec<_>, _>>()
        })?;
        debug!(
            "sweeper ready: {} cusps, {} samples",
            cusps.len(),
            cusps.iter().map(|c| c.samples.len()).sum::<usize>()
        );
        sweeper.cusps = cusps;
        Ok(sweeper)
    }

    fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(p) => p.install(op),
            None => op(),
        }
    }

    pub fn group(&self) -> &Arc<SubgroupData> {
        &self.group
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn sampling_for(&self, k: usize) -> Result<CuspSampling, SolverError> {
        let prec = self.prec;
        let cusp = &self.group.cusps[k];
        let w = cusp.width;
        let n_k = self.n * w;
        let m_len = sample_count(n_k);
        let plan = FftPlan::new(m_len, prec)?;
        let nu_inv = cusp.normalizer.inverse();
        let h = Float::with_val(prec, self.sample_height);

        let samples = (0..m_len)
            .into_par_iter()
            .map(|j| {
                let mut re = Float::with_val(prec, w * j);
                re /= m_len as u64;
                re -= 0.5f64;
                let zeta = BigComplex::new(re, h.clone());
                let z = nu_inv.apply(&zeta);
                let r = self.group.reduce_point(&z)?;
                let reduced = match r.w.checked_mul(&nu_inv) {
                    Some(m) => m.apply(&zeta),
                    None => r.z,
                };
                let tile = self.group.tile(r.coset);
                let mut local = reduced;
                local.re += tile.shift;
                let target_w = self.group.cusps[tile.cusp].width;
                Ok(SamplePoint {
                    cusp: tile.cusp,
                    q: local_parameter(&local, target_w, prec),
                })
            })
            .collect::<Result<Vec<_>, SolverError>>()?;

        let mu = if cusp.is_principal { -1 } else { 0 };
        // exp((2πh + iπ)/w), then powers; the base is exact to working precision
        let p = pi(prec);
        let mut growth = Float::with_val(prec, &p * &h);
        growth *= 2u32;
        growth /= w as u32;
        let mut phase = p;
        phase /= w as u32;
        let step = BigComplex::new(growth, phase).exp();
        let inv_m = Float::with_val(prec, 1) / m_len as u64;
        let rescale = (mu..=n_k as i64)
            .map(|m| step.powi(m).scale(&inv_m))
            .collect();
        Ok(CuspSampling {
            plan,
            samples,
            rescale,
            mu,
        })
    }

    /// One Jacobi sweep over raw coefficient blocks, pinned entries included
    /// in the input and recomputed (not re-pinned) in the output.
    fn sweep_raw(&self, coeffs: &[Vec<BigComplex>]) -> Vec<Vec<BigComplex>> {
        self.install(|| {
            self.cusps
                .par_iter()
                .map(|c| {
                    let values: Vec<BigComplex> = c
                        .samples
                        .par_iter()
                        .map(|s| horner(&coeffs[s.cusp], if s.cusp == 0 { -1 } else { 0 }, &s.q))
                        .collect();
                    let spectrum = c
                        .plan
                        .transform(&values, Direction::Forward)
                        .expect("sample count matches the plan");
                    let m_len = spectrum.len() as i64;
                    c.rescale
                        .iter()
                        .enumerate()
                        .map(|(i, factor)| {
                            let m = c.mu + i as i64;
                            &spectrum[m.rem_euclid(m_len) as usize] * factor
                        })
                        .collect()
                })
                .collect()
        })
    }

    fn check_state(&self, state: &ExpansionState) {
        assert!(
            Arc::ptr_eq(state.group(), &self.group) || state.num_cusps() == self.cusps.len(),
            "state belongs to a different subgroup"
        );
        assert_eq!(state.n(), self.n, "state truncation differs from the sweeper's");
    }

    /// The sweep map `F`: resample every cusp from the input state and
    /// re-pin the principal part.
    pub fn sweep(&self, state: &ExpansionState) -> ExpansionState {
        self.check_state(state);
        let coeffs = if state.prec() == self.prec {
            self.sweep_raw(state.raw())
        } else {
            let raised: Vec<Vec<BigComplex>> = state
                .raw()
                .iter()
                .map(|c| c.iter().map(|a| a.with_prec(self.prec)).collect())
                .collect();
            self.sweep_raw(&raised)
        };
        let mut out = state.with_raw(coeffs);
        out.pin();
        out
    }

    /// `F(x)` on the unknown vector.
    pub fn apply_affine(&self, template: &ExpansionState, x: &[BigComplex]) -> Vec<BigComplex> {
        self.sweep(&template.with_unknowns(x)).unknowns()
    }

    /// `A·x = F(x) − F(0)`, computed directly with the principal part zeroed.
    pub fn apply_linear(&self, template: &ExpansionState, x: &[BigComplex]) -> Vec<BigComplex> {
        let mut raw: Vec<Vec<BigComplex>> = template.with_unknowns(x).raw().to_vec();
        raw[0][0] = BigComplex::zero(self.prec);
        let out = self.sweep_raw(&raw);
        template.with_raw(out).unknowns()
    }

    /// `exp(2π·m·h/w_k)` for every unknown `a^(k)_m`: the damping of that
    /// mode on the sampling horocycle.
    pub fn unknown_scales(&self, template: &ExpansionState) -> Vec<Float> {
        let layout = template.layout();
        let mut base = pi(self.prec);
        base *= 2u32;
        base *= self.sample_height;
        layout
            .blocks()
            .iter()
            .flat_map(|b| {
                let w = self.group.cusps[b.cusp].width as u32;
                let step = Float::with_val(self.prec, &base / w).exp();
                (b.first..=b.last).map(move |m| Float::with_val(self.prec, (&step).pow(m as i32)))
            })
            .collect()
    }

    /// `‖D⁻¹(F(x) − x)‖₂` with `D` from [`Sweeper::unknown_scales`].
    pub fn fixed_point_residual(&self, state: &ExpansionState) -> f64 {
        let next = self.sweep(state);
        let d = self.unknown_scales(state);
        let diff: Vec<BigComplex> = next
            .unknowns()
            .iter()
            .zip(state.unknowns())
            .zip(&d)
            .map(|((a, b), s)| (a - &b).scale(&Float::with_val(self.prec, s.recip_ref())))
            .collect();
        norm2(&diff).to_f64()
    }

    /// Number of sampling points per cusp.
    pub fn sample_counts(&self) -> Vec<usize> {
        self.cusps.iter().map(|c| c.samples.len()).collect()
    }

    /// Which cusp expansion each sample of cusp `k` is evaluated with.
    pub fn sample_targets(&self, k: usize) -> Vec<usize> {
        self.cusps[k].samples.iter().map(|s| s.cusp).collect()
    }
}

/// One sweep with a freshly built sampling table at the state's precision.
pub fn sweep(state: &ExpansionState, sample_height: f64) -> Result<ExpansionState, SolverError> {
    let sweeper = Sweeper::build(
        Arc::clone(state.group()),
        state.n(),
        state.prec(),
        sample_height,
        None,
    )?;
    Ok(sweeper.sweep(state))
}
