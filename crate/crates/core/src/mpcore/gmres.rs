//! Matrix-free GMRES over arbitrary-precision complex vectors.
//!
//! Arnoldi uses modified Gram–Schmidt with one reorthogonalization pass; the
//! least-squares problem is updated with complex Givens rotations. Restarting
//! is available but off by default.

use rug::Float;

use super::complex::{inner, norm2, BigComplex};
use super::MpError;

#[derive(Debug, Clone)]
pub struct GmresOptions {
    /// Relative residual target `‖b − A·x‖ ≤ tol·‖b‖`.
    pub tol: f64,
    /// Upper bound on operator applications.
    pub max_iter: usize,
    /// Krylov dimension before restarting; `None` keeps the full basis.
    pub restart: Option<usize>,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions {
            tol: 1e-30,
            max_iter: 200,
            restart: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GmresOutcome {
    pub solution: Vec<BigComplex>,
    /// Relative residual estimate, starting with the initial residual.
    pub residual_history: Vec<f64>,
    /// Number of operator applications.
    pub applications: usize,
    pub converged: bool,
    /// Arnoldi step (1-based) at which the Krylov space became invariant.
    pub breakdown: Option<usize>,
}

impl GmresOutcome {
    pub fn final_residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(f64::NAN)
    }
}

/// Solves `apply(x) = rhs` starting from `x = 0`.
pub fn gmres<F>(apply: F, rhs: &[BigComplex], opts: &GmresOptions) -> Result<GmresOutcome, MpError>
where
    F: FnMut(&[BigComplex]) -> Vec<BigComplex>,
{
    gmres_from(apply, rhs, None, opts)
}

/// Solves `apply(x) = rhs` from an optional initial guess.
pub fn gmres_from<F>(
    mut apply: F,
    rhs: &[BigComplex],
    x0: Option<&[BigComplex]>,
    opts: &GmresOptions,
) -> Result<GmresOutcome, MpError>
where
    F: FnMut(&[BigComplex]) -> Vec<BigComplex>,
{
    if !(opts.tol > 0.0) {
        return Err(MpError::InvalidTolerance(opts.tol));
    }
    let n = rhs.len();
    let prec = rhs.iter().map(BigComplex::prec).max().unwrap_or(64);
    let mut x: Vec<BigComplex> = match x0 {
        Some(x0) => {
            if x0.len() != n {
                return Err(MpError::LengthMismatch { expected: n, found: x0.len() });
            }
            x0.to_vec()
        }
        None => vec![BigComplex::zero(prec); n],
    };
    let rhs_norm = norm2(rhs);
    let tol = Float::with_val(prec, opts.tol);
    let mut history = Vec::new();
    let mut applications = 0;

    if rhs_norm.is_zero() {
        history.push(0.0);
        return Ok(GmresOutcome {
            solution: vec![BigComplex::zero(prec); n],
            residual_history: history,
            applications,
            converged: true,
            breakdown: None,
        });
    }

    let mut r = if x0.is_some() {
        let ax = checked_apply(&mut apply, &x, n)?;
        applications += 1;
        sub(rhs, &ax)
    } else {
        rhs.to_vec()
    };
    let mut beta = norm2(&r);
    history.push(Float::with_val(prec, &beta / &rhs_norm).to_f64());
    // tiny relative size below which an Arnoldi vector counts as zero
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 16));

    loop {
        if Float::with_val(prec, &beta / &rhs_norm) <= tol {
            return Ok(GmresOutcome {
                solution: x,
                residual_history: history,
                applications,
                converged: true,
                breakdown: None,
            });
        }
        if applications >= opts.max_iter {
            return Ok(GmresOutcome {
                solution: x,
                residual_history: history,
                applications,
                converged: false,
                breakdown: None,
            });
        }
        let cycle_len = opts.restart.unwrap_or(usize::MAX).max(1);
        let mut basis: Vec<Vec<BigComplex>> = vec![scale_vec(&r, &Float::with_val(prec, 1 / &beta))];
        // columns of the rotated Hessenberg matrix, R upper triangular after rotation
        let mut hcols: Vec<Vec<BigComplex>> = Vec::new();
        let mut rot_c: Vec<Float> = Vec::new();
        let mut rot_s: Vec<BigComplex> = Vec::new();
        let mut g: Vec<BigComplex> = vec![BigComplex::from_real(beta.clone())];
        let mut breakdown = None;

        let mut j = 0;
        while j < cycle_len && applications < opts.max_iter {
            let mut w = checked_apply(&mut apply, &basis[j], n)?;
            applications += 1;
            let w_norm0 = norm2(&w);
            let mut h = vec![BigComplex::zero(prec); j + 2];
            for _pass in 0..2 {
                for (i, v) in basis.iter().enumerate() {
                    let hij = inner(v, &w);
                    axpy(&mut w, &(-&hij), v);
                    h[i] += &hij;
                }
            }
            let h_next = norm2(&w);
            h[j + 1] = BigComplex::from_real(h_next.clone());

            for i in 0..j {
                let (a, b) = (h[i].clone(), h[i + 1].clone());
                h[i] = &a.scale(&rot_c[i]) + &(&rot_s[i] * &b);
                h[i + 1] = &b.scale(&rot_c[i]) - &(&rot_s[i].conj() * &a);
            }
            let (c, s, rr) = givens(&h[j], &h[j + 1]);
            let invariant = h_next <= Float::with_val(prec, &eps * &w_norm0);
            if invariant && rr.abs() <= Float::with_val(prec, &eps * &w_norm0) {
                // A maps the Krylov space into a proper subspace: singular operator
                return Err(MpError::Breakdown {
                    iteration: applications,
                    residual: history.last().copied().unwrap_or(f64::NAN),
                });
            }
            h[j] = rr;
            h[j + 1] = BigComplex::zero(prec);
            let gj = g[j].clone();
            g[j] = gj.scale(&c);
            g.push(-&(&s.conj() * &gj));
            rot_c.push(c);
            rot_s.push(s);
            hcols.push(h);
            j += 1;

            let res = g[j].abs();
            history.push(Float::with_val(prec, &res / &rhs_norm).to_f64());
            if invariant {
                breakdown = Some(applications);
            }
            if invariant || Float::with_val(prec, &res / &rhs_norm) <= tol {
                break;
            }
            basis.push(scale_vec(&w, &Float::with_val(prec, 1 / &h_next)));
        }

        // back substitution on the triangular system
        let k = hcols.len();
        let mut y = vec![BigComplex::zero(prec); k];
        for i in (0..k).rev() {
            let mut acc = g[i].clone();
            for (l, yl) in y.iter().enumerate().skip(i + 1) {
                acc -= &(&hcols[l][i] * yl);
            }
            y[i] = acc.div(&hcols[i][i]);
        }
        for (yi, v) in y.iter().zip(&basis) {
            axpy(&mut x, yi, v);
        }
        beta = g[k].abs();

        if let Some(at) = breakdown {
            let rel = Float::with_val(prec, &beta / &rhs_norm);
            if rel <= tol {
                return Ok(GmresOutcome {
                    solution: x,
                    residual_history: history,
                    applications,
                    converged: true,
                    breakdown: Some(at),
                });
            }
            return Err(MpError::Breakdown {
                iteration: at,
                residual: rel.to_f64(),
            });
        }
        if Float::with_val(prec, &beta / &rhs_norm) <= tol || applications >= opts.max_iter {
            continue;
        }
        // restart from the true residual
        let ax = checked_apply(&mut apply, &x, n)?;
        applications += 1;
        r = sub(rhs, &ax);
        beta = norm2(&r);
        history.push(Float::with_val(prec, &beta / &rhs_norm).to_f64());
    }
}

fn checked_apply<F>(apply: &mut F, v: &[BigComplex], n: usize) -> Result<Vec<BigComplex>, MpError>
where
    F: FnMut(&[BigComplex]) -> Vec<BigComplex>,
{
    let out = apply(v);
    if out.len() != n {
        return Err(MpError::LengthMismatch { expected: n, found: out.len() });
    }
    Ok(out)
}

/// Rotation `[c s; −conj(s) c]` mapping `(a, b)` to `(r, 0)` with real `c ≥ 0`.
fn givens(a: &BigComplex, b: &BigComplex) -> (Float, BigComplex, BigComplex) {
    let prec = a.prec();
    let abs_a = a.abs();
    let abs_b = b.abs();
    if abs_b.is_zero() {
        return (Float::with_val(prec, 1), BigComplex::zero(prec), a.clone());
    }
    if abs_a.is_zero() {
        let s = b.conj().scale(&Float::with_val(prec, 1 / &abs_b));
        return (Float::new(prec), s, BigComplex::from_real(abs_b));
    }
    let r = Float::with_val(prec, abs_a.hypot_ref(&abs_b));
    let phase = a.scale(&Float::with_val(prec, 1 / &abs_a));
    let c = Float::with_val(prec, &abs_a / &r);
    let s = (&phase * &b.conj()).scale(&Float::with_val(prec, 1 / &r));
    (c, s, phase.scale(&r))
}

fn sub(a: &[BigComplex], b: &[BigComplex]) -> Vec<BigComplex> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale_vec(v: &[BigComplex], s: &Float) -> Vec<BigComplex> {
    v.iter().map(|x| x.scale(s)).collect()
}

/// `y += a·x`
fn axpy(y: &mut [BigComplex], a: &BigComplex, x: &[BigComplex]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += &(a * xi);
    }
}
