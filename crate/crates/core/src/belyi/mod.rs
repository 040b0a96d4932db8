//! The Belyi map `Φ = p3/pc` with `Φ(j_Γ(z)) = j(z)`, assembled from the
//! special values of the hauptmodul.
//!
//! Over `0` the fiber of `j` consists of the elliptic points of order three
//! (simple roots at `σ1` fixed points, triple roots at three-cycles), over
//! `1728` those of order two, and over `∞` the cusps, each with multiplicity
//! its width. The principal cusp sits at `j_Γ = ∞`, so `deg pc = d − w_0`.

pub mod io;
pub mod jseries;
pub mod poly;
pub mod recognize;

use rayon::prelude::*;
use rug::{Float, Integer, Rational};
use thiserror::Error;

use crate::mpcore::BigComplex;
use crate::solver::{fixed_point_residual, ExpansionState, SolverError};
use crate::subgroup::{ReduceError, SubgroupData};

pub use jseries::{classical_j, eval_j, JSeries};
pub use poly::{Poly, QPoly};
pub use recognize::{recognize, Exact, RecognizeError, RecognizeOptions, Recognition};

#[derive(Debug, Error)]
pub enum BelyiError {
    #[error("state is not converged: fixed-point residual {residual:e} exceeds {tol:e}")]
    NotConverged { residual: f64, tol: f64 },
    #[error("degree bookkeeping: {0}")]
    Degree(String),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Recognize(#[from] RecognizeError),
}

/// Hauptmodul values at elliptic points and cusps, grouped by cycle type.
/// Cosets are 0-based.
#[derive(Debug, Clone)]
pub struct SpecialValues {
    pub e2_values: Vec<(usize, BigComplex)>,
    pub e2_pairs: Vec<([usize; 2], BigComplex)>,
    pub e3_values: Vec<(usize, BigComplex)>,
    pub e3_triples: Vec<([usize; 3], BigComplex)>,
    /// `(k, a^(k)_0)` for every non-principal cusp.
    pub cusp_values: Vec<(usize, BigComplex)>,
    /// Largest disagreement between members of one cycle.
    pub cycle_spread: f64,
}

/// Refusal threshold for [`special_values`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualCheck {
    /// Largest accepted [`crate::solver::Solver::fixed_point_residual`].
    pub tol: f64,
    pub sample_height: f64,
}

impl ResidualCheck {
    pub fn new(tol: f64) -> Self {
        ResidualCheck {
            tol,
            sample_height: 0.5,
        }
    }
}

/// `exp(2πi/3) = (−1 + i√3)/2`, the fixed point of `ST`.
pub fn omega(prec: u32) -> BigComplex {
    let re = Float::with_val(prec, -0.5);
    let im = Float::with_val(prec, 3).sqrt() / 2u32;
    BigComplex::new(re, im)
}

/// Values at `γ_l·i` for `σ0`-cycles, at `γ_l·ω` for `σ1`-cycles and the
/// constant terms at the non-principal cusps. Refuses states whose
/// fixed-point residual exceeds `check.tol`.
pub fn special_values(state: &ExpansionState, check: &ResidualCheck) -> Result<SpecialValues, BelyiError> {
    let residual = fixed_point_residual(state, check.sample_height)?;
    if !(residual <= check.tol) {
        return Err(BelyiError::NotConverged {
            residual,
            tol: check.tol,
        });
    }
    special_values_unchecked(state)
}

/// [`special_values`] without the convergence check.
pub fn special_values_unchecked(state: &ExpansionState) -> Result<SpecialValues, BelyiError> {
    let g = state.group();
    let prec = state.prec();
    let at = |point: &BigComplex, coset: usize| -> Result<BigComplex, ReduceError> {
        state.evaluate(&g.coset_reps[coset].apply(point))
    };
    let i = BigComplex::i(prec);
    let w = omega(prec);

    let cycles = |perm: &crate::perm::Permutation, base: &BigComplex| {
        perm.cycle_decomposition()
            .cycles
            .into_par_iter()
            .map(|c| {
                let vals = c
                    .iter()
                    .map(|&l| at(base, l))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((c, vals))
            })
            .collect::<Result<Vec<_>, ReduceError>>()
    };
    let mut spread = 0f64;
    let mut track = |vals: &[BigComplex]| {
        for v in &vals[1..] {
            let s = (v - &vals[0]).abs_f64() / vals[0].abs_f64().max(1.0);
            spread = spread.max(s);
        }
    };

    let mut e2_values = Vec::new();
    let mut e2_pairs = Vec::new();
    for (c, vals) in cycles(&g.s0, &i)? {
        track(&vals);
        match c.len() {
            1 => e2_values.push((c[0], vals[0].clone())),
            2 => e2_pairs.push(([c[0], c[1]], vals[0].clone())),
            _ => unreachable!("σ0 is an involution"),
        }
    }
    let mut e3_values = Vec::new();
    let mut e3_triples = Vec::new();
    for (c, vals) in cycles(&g.s1, &w)? {
        track(&vals);
        match c.len() {
            1 => e3_values.push((c[0], vals[0].clone())),
            3 => e3_triples.push(([c[0], c[1], c[2]], vals[0].clone())),
            _ => unreachable!("σ1 has order three"),
        }
    }
    let cusp_values = (1..g.cusps.len())
        .map(|k| (k, state.coefficient(k, 0).expect("constant term").clone()))
        .collect();
    Ok(SpecialValues {
        e2_values,
        e2_pairs,
        e3_values,
        e3_triples,
        cusp_values,
        cycle_spread: spread,
    })
}

#[derive(Debug, Clone)]
pub struct BelyiMap {
    pub degree: usize,
    pub principal_width: usize,
    /// Roots with multiplicities, as assembled.
    pub p3_roots: Vec<(BigComplex, usize)>,
    pub p2_roots: Vec<(BigComplex, usize)>,
    pub pc_roots: Vec<(BigComplex, usize)>,
    pub p3: Poly,
    pub p2: Poly,
    pub pc: Poly,
}

impl BelyiMap {
    /// `Φ(t) = p3(t)/pc(t)`, evaluated in product form.
    pub fn phi(&self, t: &BigComplex) -> BigComplex {
        let prod = |roots: &[(BigComplex, usize)]| {
            roots
                .iter()
                .fold(BigComplex::one(t.prec()), |acc, (r, m)| &acc * &(t - r).powi(*m as i64))
        };
        prod(&self.p3_roots).div(&prod(&self.pc_roots))
    }
}

/// Assembles `p3`, `p2`, `pc` from their roots.
pub fn build_map(sv: &SpecialValues, g: &SubgroupData) -> Result<BelyiMap, BelyiError> {
    let d = g.degree();
    let w0 = g.principal().width;
    let check = |what: &str, got: usize, want: usize| {
        if got == want {
            Ok(())
        } else {
            Err(BelyiError::Degree(format!("{what}: {got} roots counted, expected {want}")))
        }
    };
    check("e2 fixed points", sv.e2_values.len(), g.e2)?;
    check("e3 fixed points", sv.e3_values.len(), g.e3)?;
    check("cusps", sv.cusp_values.len(), g.cusps.len() - 1)?;
    check("p2 degree", sv.e2_values.len() + 2 * sv.e2_pairs.len(), d)?;
    check("p3 degree", sv.e3_values.len() + 3 * sv.e3_triples.len(), d)?;

    let prec = sv
        .cusp_values
        .first()
        .map(|(_, v)| v.prec())
        .or_else(|| sv.e2_values.first().map(|(_, v)| v.prec()))
        .or_else(|| sv.e2_pairs.first().map(|(_, v)| v.prec()))
        .unwrap_or(64);
    let p3_roots: Vec<(BigComplex, usize)> = sv
        .e3_values
        .iter()
        .map(|(_, v)| (v.clone(), 1))
        .chain(sv.e3_triples.iter().map(|(_, v)| (v.clone(), 3)))
        .collect();
    let p2_roots: Vec<(BigComplex, usize)> = sv
        .e2_values
        .iter()
        .map(|(_, v)| (v.clone(), 1))
        .chain(sv.e2_pairs.iter().map(|(_, v)| (v.clone(), 2)))
        .collect();
    let pc_roots: Vec<(BigComplex, usize)> = sv
        .cusp_values
        .iter()
        .map(|(k, v)| (v.clone(), g.cusps[*k].width))
        .collect();
    let pc_degree: usize = pc_roots.iter().map(|(_, m)| m).sum();
    check("pc degree", pc_degree, d - w0)?;

    Ok(BelyiMap {
        degree: d,
        principal_width: w0,
        p3: Poly::from_roots(&p3_roots, prec),
        p2: Poly::from_roots(&p2_roots, prec),
        pc: Poly::from_roots(&pc_roots, prec),
        p3_roots,
        p2_roots,
        pc_roots,
    })
}

/// `max |coeff(p3 − p2 − 1728·pc)| / max |coeff(p3)|`.
pub fn verify_identity(map: &BelyiMap) -> f64 {
    identity_residual(&map.p3, &map.p2, &map.pc)
}

/// [`verify_identity`] for loose polynomials.
pub fn identity_residual(p3: &Poly, p2: &Poly, pc: &Poly) -> f64 {
    let prec = p3.coeffs()[0].prec();
    let lhs = p3.sub(p2).sub(&pc.scale(&Float::with_val(prec, 1728)));
    (lhs.max_abs_coeff() / p3.max_abs_coeff()).to_f64()
}

/// `max |Φ(j_Γ(z)) − j(z)|` over the given points.
pub fn phi_consistency(state: &ExpansionState, map: &BelyiMap, points: &[BigComplex]) -> Result<f64, BelyiError> {
    max_phi_error(state, points, |t| map.phi(t))
}

/// [`phi_consistency`] with `Φ = p3/pc` given by coefficients.
pub fn phi_error(state: &ExpansionState, p3: &Poly, pc: &Poly, points: &[BigComplex]) -> Result<f64, BelyiError> {
    max_phi_error(state, points, |t| p3.eval(t).div(&pc.eval(t)))
}

fn max_phi_error<F>(state: &ExpansionState, points: &[BigComplex], phi: F) -> Result<f64, BelyiError>
where
    F: Fn(&BigComplex) -> BigComplex + Sync,
{
    let series = classical_j(jseries::depth_for_prec(state.prec()));
    let errs = points
        .par_iter()
        .map(|z| {
            let t = state.evaluate(z)?;
            let (w, _) = crate::subgroup::reduce_to_fundamental_domain(z)?;
            let j = series.eval_series(&w);
            Ok((&phi(&t) - &j).abs_f64())
        })
        .collect::<Result<Vec<f64>, ReduceError>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// Exact polynomials over `ℚ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMap {
    pub p3: QPoly,
    pub p2: QPoly,
    pub pc: QPoly,
}

impl RationalMap {
    /// `p3 − p2 − 1728·pc`, which is zero for a genuine Belyi map.
    pub fn identity_defect(&self) -> QPoly {
        self.p3
            .sub(&self.p2)
            .sub(&self.pc.scale(&Rational::from(1728)))
    }
}

/// Coefficients in the power basis of `K = ℚ(α)`, `α` a root of `defining`:
/// each coefficient is `(Σ c_i αⁱ)/den`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberFieldMap {
    pub defining: Vec<Integer>,
    pub alpha: BigComplex,
    pub p3: Vec<(Vec<Integer>, Integer)>,
    pub p2: Vec<(Vec<Integer>, Integer)>,
    pub pc: Vec<(Vec<Integer>, Integer)>,
}

impl NumberFieldMap {
    /// `p3 − p2 − 1728·pc` coefficientwise in the power basis.
    pub fn identity_defect(&self) -> Vec<Vec<Rational>> {
        power_basis_defect(&self.p3, &self.p2, &self.pc)
    }
}

type FieldCoeffs = [(Vec<Integer>, Integer)];

/// `p3 − p2 − 1728·pc` for power-basis coefficient lists (ascending).
pub fn power_basis_defect(p3: &FieldCoeffs, p2: &FieldCoeffs, pc: &FieldCoeffs) -> Vec<Vec<Rational>> {
    let len = p3.len().max(p2.len()).max(pc.len());
    let basis = p3.iter().chain(p2).chain(pc).map(|(c, _)| c.len()).max().unwrap_or(0);
    let get = |p: &FieldCoeffs, i: usize, b: usize| -> Rational {
        match p.get(i) {
            Some((c, den)) => c
                .get(b)
                .map_or_else(Rational::new, |x| Rational::from((x.clone(), den.clone()))),
            None => Rational::new(),
        }
    };
    (0..len)
        .map(|i| {
            (0..basis)
                .map(|b| get(p3, i, b) - get(p2, i, b) - get(pc, i, b) * Rational::from(1728))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExactMap {
    Rational(RationalMap),
    NumberField(NumberFieldMap),
}

#[derive(Debug, Clone)]
pub struct ExactResult {
    pub map: ExactMap,
    /// Smallest certification margin over all coefficients.
    pub margin_digits: f64,
}

fn rationals(p: &Poly, opts: &RecognizeOptions) -> Result<(QPoly, f64), RecognizeError> {
    let rational_only = RecognizeOptions {
        max_degree: 1,
        ..opts.clone()
    };
    let recs = recognize(p.coeffs(), &rational_only)?;
    let margin = recs.iter().map(|r| r.margin_digits).fold(f64::INFINITY, f64::min);
    let coeffs = recs
        .into_iter()
        .map(|r| match r.exact {
            Exact::Rational(q) => q,
            Exact::Algebraic { .. } => unreachable!("degree one search"),
        })
        .collect();
    Ok((QPoly::from_ascending(coeffs), margin))
}

/// Recognizes the coefficients of `map`: over `ℚ` when possible, otherwise
/// in a number field generated by the first irrational coefficient.
pub fn recognize_map(map: &BelyiMap, opts: &RecognizeOptions) -> Result<ExactResult, RecognizeError> {
    let all = || (rationals(&map.p3, opts), rationals(&map.p2, opts), rationals(&map.pc, opts));
    if let (Ok((p3, m3)), Ok((p2, m2)), Ok((pc, mc))) = all() {
        return Ok(ExactResult {
            map: ExactMap::Rational(RationalMap { p3, p2, pc }),
            margin_digits: m3.min(m2).min(mc),
        });
    }
    // primitive element candidate: first coefficient that is not rational
    let coeffs: Vec<&BigComplex> = map
        .p3
        .coeffs()
        .iter()
        .chain(map.p2.coeffs())
        .chain(map.pc.coeffs())
        .collect();
    let rational_only = RecognizeOptions {
        max_degree: 1,
        ..opts.clone()
    };
    let alpha = coeffs
        .iter()
        .find(|c| recognize::recognize_one(c, &rational_only).is_err())
        .copied()
        .expect("some coefficient failed rational recognition");
    let rec = recognize::recognize_one(alpha, opts)?;
    let Exact::Algebraic { min_poly, approx } = rec.exact else {
        unreachable!("rational recognition failed for this value");
    };
    let n = min_poly.len() - 1;
    let express = |p: &Poly| -> Result<Vec<(Vec<Integer>, Integer)>, RecognizeError> {
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                recognize::express_in_power_basis(c, &approx, n, opts).ok_or(RecognizeError::NotFound {
                    index: i,
                    max_degree: n,
                })
            })
            .collect()
    };
    Ok(ExactResult {
        map: ExactMap::NumberField(NumberFieldMap {
            p3: express(&map.p3)?,
            p2: express(&map.p2)?,
            pc: express(&map.pc)?,
            defining: min_poly,
            alpha: approx,
        }),
        margin_digits: rec.margin_digits,
    })
}
