//! Hauptmodul coefficients by overlapping strip decomposition.
//!
//! Each cusp carries a truncated expansion. A sweep samples every cusp on
//! the horocycle `Im ζ = h` of its own strip, evaluates the hauptmodul there
//! through whichever expansion owns the reduced point, and reads new
//! coefficients off an FFT. The sweep is affine in the unknowns; its fixed
//! point is found by Picard iteration or by GMRES on `(I − A)x = F(0)`.

mod config;
pub mod io;
mod state;
mod sweep;

use std::sync::Arc;

use log::info;
use thiserror::Error;

use rug::Float;

use crate::mpcore::{gmres, norm2, BigComplex, GmresOptions, MpError};
use crate::subgroup::{ReduceError, SubgroupData};

pub use config::{default_n, required_digits, target_digits, Method, SolverConfig};
pub use state::ExpansionState;
pub use sweep::{sample_count, sweep, Sweeper};

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub method: Method,
    pub converged: bool,
    /// Picard: `‖x_{n+1} − x_n‖₂` per sweep. GMRES: relative residual per
    /// Arnoldi step of the horocycle-scaled system, starting with 1. GMRES
    /// stops once the absolute scaled residual is below `target_tol`.
    pub residuals: Vec<f64>,
    /// Picard sweeps, or GMRES operator applications.
    pub iterations: usize,
    /// `‖D⁻¹(F(x) − x)‖₂` for the returned state, see
    /// [`Solver::fixed_point_residual`].
    pub fixed_point_residual: f64,
}

impl ConvergenceReport {
    /// Ratios `r_{n+1}/r_n` of consecutive residuals.
    pub fn ratios(&self) -> Vec<f64> {
        self.residuals.windows(2).map(|w| w[1] / w[0]).collect()
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("the subgroup has genus {0}; a hauptmodul exists only in genus 0")]
    NotGenusZero(usize),
    #[error(
        "no convergence after {} {} (last residual {:e})",
        .report.iterations,
        if .report.method == Method::Picard { "sweeps" } else { "operator applications" },
        .report.residuals.last().copied().unwrap_or(f64::NAN)
    )]
    NotConverged {
        state: Box<ExpansionState>,
        report: ConvergenceReport,
    },
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Numeric(#[from] MpError),
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub state: ExpansionState,
    pub report: ConvergenceReport,
}

/// A configured solver with its sampling tables.
#[derive(Debug)]
pub struct Solver {
    cfg: SolverConfig,
    sweeper: Sweeper,
}

impl Solver {
    pub fn new(group: Arc<SubgroupData>, cfg: SolverConfig) -> Result<Self, SolverError> {
        if group.genus != 0 {
            return Err(SolverError::NotGenusZero(group.genus));
        }
        cfg.validate()?;
        let sweeper = Sweeper::new(group, &cfg)?;
        Ok(Solver { cfg, sweeper })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn sweeper(&self) -> &Sweeper {
        &self.sweeper
    }

    pub fn initial_state(&self) -> ExpansionState {
        ExpansionState::initial(
            Arc::clone(self.sweeper.group()),
            self.cfg.n,
            self.sweeper.prec(),
        )
    }

    pub fn sweep(&self, state: &ExpansionState) -> ExpansionState {
        self.sweeper.sweep(state)
    }

    /// `‖D⁻¹(F(x) − x)‖₂` with `D_m = exp(2πmh/w_k)`: the fixed-point defect
    /// measured on the sampling horocycles.
    pub fn fixed_point_residual(&self, state: &ExpansionState) -> f64 {
        self.sweeper.fixed_point_residual(state)
    }

    pub fn solve(&self) -> Result<Solution, SolverError> {
        match self.cfg.method {
            Method::Picard => self.solve_picard(),
            Method::Gmres => self.solve_gmres(),
        }
    }

    fn solve_picard(&self) -> Result<Solution, SolverError> {
        let mut state = self.initial_state();
        let mut residuals = Vec::new();
        let mut converged = false;
        for sweep in 1..=self.cfg.max_sweeps {
            let next = self.sweep(&state);
            let r = next.distance(&state).to_f64();
            residuals.push(r);
            state = next;
            log::debug!("picard sweep {sweep}: update {r:e}");
            if !r.is_finite() {
                break;
            }
            if r <= self.cfg.target_tol {
                converged = true;
                break;
            }
        }
        let report = ConvergenceReport {
            method: Method::Picard,
            converged,
            iterations: residuals.len(),
            fixed_point_residual: residuals.last().copied().unwrap_or(f64::NAN),
            residuals,
        };
        info!(
            "picard: {} sweeps, final update {:e}",
            report.iterations, report.fixed_point_residual
        );
        finish(state, report)
    }

    fn solve_gmres(&self) -> Result<Solution, SolverError> {
        let template = self.initial_state();
        let zero = template.unknowns();
        let rhs = self.sweeper.apply_affine(&template, &zero);
        if rhs.iter().any(|c| !c.is_finite()) {
            return Err(SolverError::Numeric(MpError::Breakdown {
                iteration: 0,
                residual: f64::NAN,
            }));
        }
        // Work in y = D⁻¹x, the coefficients as seen on the sampling
        // horocycle; there A is a contraction and the residual measures
        // evaluation error rather than the size of the largest coefficient.
        let d = self.sweeper.unknown_scales(&template);
        let d_inv: Vec<Float> = d.iter().map(|s| Float::with_val(s.prec(), s.recip_ref())).collect();
        let rhs_scaled: Vec<BigComplex> = rhs.iter().zip(&d_inv).map(|(b, s)| b.scale(s)).collect();
        // target_tol bounds the absolute residual
        let rhs_norm = norm2(&rhs_scaled).to_f64().max(1.0);
        let opts = GmresOptions {
            tol: self.cfg.target_tol / rhs_norm,
            max_iter: self.cfg.max_sweeps,
            restart: self.cfg.restart,
        };
        let outcome = gmres(
            |y| {
                let x: Vec<BigComplex> = y.iter().zip(&d).map(|(v, s)| v.scale(s)).collect();
                let ax = self.sweeper.apply_linear(&template, &x);
                y.iter()
                    .zip(&ax)
                    .zip(&d_inv)
                    .map(|((v, a), s)| v - &a.scale(s))
                    .collect()
            },
            &rhs_scaled,
            &opts,
        )?;
        let x: Vec<BigComplex> = outcome.solution.iter().zip(&d).map(|(v, s)| v.scale(s)).collect();
        let state = template.with_unknowns(&x);
        let report = ConvergenceReport {
            method: Method::Gmres,
            converged: outcome.converged,
            iterations: outcome.applications,
            fixed_point_residual: self.fixed_point_residual(&state),
            residuals: outcome.residual_history,
        };
        info!(
            "gmres: {} applications, relative residual {:e}, fixed-point residual {:e}",
            report.iterations,
            report.residuals.last().copied().unwrap_or(f64::NAN),
            report.fixed_point_residual
        );
        finish(state, report)
    }
}

fn finish(state: ExpansionState, report: ConvergenceReport) -> Result<Solution, SolverError> {
    if report.converged {
        Ok(Solution { state, report })
    } else {
        Err(SolverError::NotConverged {
            state: Box::new(state),
            report,
        })
    }
}

/// [`Solver::fixed_point_residual`] at the state's own precision.
pub fn fixed_point_residual(state: &ExpansionState, sample_height: f64) -> Result<f64, SolverError> {
    let sweeper = Sweeper::build(Arc::clone(state.group()), state.n(), state.prec(), sample_height, None)?;
    Ok(sweeper.fixed_point_residual(state))
}

/// Solves for the hauptmodul coefficients of `group`.
pub fn solve(group: Arc<SubgroupData>, cfg: SolverConfig) -> Result<Solution, SolverError> {
    Solver::new(group, cfg)?.solve()
}
