use std::fmt;
use std::str::FromStr;

use crate::mpcore::{bits_for_digits, GUARD_DIGITS};

use super::SolverError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Picard,
    Gmres,
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "picard" => Ok(Method::Picard),
            "gmres" => Ok(Method::Gmres),
            other => Err(format!("unknown method {other:?} (expected picard or gmres)")),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Picard => "picard",
            Method::Gmres => "gmres",
        })
    }
}

/// Decimal digits lost per unit of `N` when undoing the horocycle damping
/// at height 1/2: `π/ln 10 ≈ 1.364`, rounded up.
pub const DIGITS_PER_N_AT_HALF: f64 = 1.37;

/// Digits reserved on top of target and amplification.
pub const BUDGET_MARGIN_DIGITS: u32 = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Coefficients per unit of cusp width; cusp `k` keeps `N·w_k` terms.
    pub n: usize,
    /// Working decimal digits. Internal arithmetic carries `GUARD_DIGITS` more.
    pub digits: u32,
    pub target_tol: f64,
    pub method: Method,
    /// Picard sweeps, or GMRES operator applications.
    pub max_sweeps: usize,
    /// Height of the sampling horocycles in each cusp's local coordinate.
    pub sample_height: f64,
    /// Krylov restart length; `None` keeps the full basis.
    pub restart: Option<usize>,
    /// Worker threads for sampling; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl SolverConfig {
    /// Configuration with the default truncation for the given tolerance and
    /// the smallest admissible precision.
    pub fn for_tolerance(target_tol: f64) -> Self {
        let target = target_digits(target_tol);
        let n = default_n(target);
        SolverConfig {
            n,
            digits: required_digits(n, 0.5, target),
            target_tol,
            method: Method::Gmres,
            max_sweeps: 200,
            sample_height: 0.5,
            restart: None,
            threads: None,
        }
    }

    pub fn new(n: usize, digits: u32, target_tol: f64, method: Method) -> Self {
        SolverConfig {
            n,
            digits,
            target_tol,
            method,
            max_sweeps: match method {
                Method::Gmres => 200,
                Method::Picard => 500,
            },
            sample_height: 0.5,
            restart: None,
            threads: None,
        }
    }

    pub fn target_digits(&self) -> u32 {
        target_digits(self.target_tol)
    }

    /// Binary working precision including the guard digits.
    pub fn working_prec(&self) -> u32 {
        bits_for_digits(self.digits)
    }

    /// Enforces `N ≥ 2`, a sampling height strictly inside `(0, √3/2)` and
    /// the precision budget
    /// `digits + guard ≥ ⌈1.37·N·2h⌉ + target digits + 10`.
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.n < 2 {
            return Err(SolverError::Config(format!("N must be at least 2, got {}", self.n)));
        }
        if !(self.target_tol > 0.0 && self.target_tol < 1.0) {
            return Err(SolverError::Config(format!(
                "target tolerance must lie in (0, 1), got {}",
                self.target_tol
            )));
        }
        let h = self.sample_height;
        if !(h > 0.0 && h < 3f64.sqrt() / 2.0) {
            return Err(SolverError::Config(format!(
                "sample height must lie in (0, sqrt(3)/2), got {h}"
            )));
        }
        if self.max_sweeps == 0 {
            return Err(SolverError::Config("max_sweeps must be positive".into()));
        }
        let need = required_digits(self.n, h, self.target_digits());
        if self.digits < need {
            return Err(SolverError::Config(format!(
                "precision budget: N = {} at height {} with target 1e-{} needs at least {} digits, got {}",
                self.n,
                h,
                self.target_digits(),
                need,
                self.digits
            )));
        }
        Ok(())
    }
}

/// `⌈−log₁₀ tol⌉`
pub fn target_digits(tol: f64) -> u32 {
    (-tol.log10()).ceil().max(0.0) as u32
}

/// Default truncation `⌈target/1.36⌉ + 2`.
pub fn default_n(target_digits: u32) -> usize {
    (f64::from(target_digits) / 1.36).ceil() as usize + 2
}

/// Smallest `digits` satisfying the precision budget.
pub fn required_digits(n: usize, sample_height: f64, target_digits: u32) -> u32 {
    let amplification = (DIGITS_PER_N_AT_HALF * n as f64 * 2.0 * sample_height).ceil() as u32;
    (amplification + target_digits + BUDGET_MARGIN_DIGITS).saturating_sub(GUARD_DIGITS)
}
