mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use hauptmodul::mpcore::{norm2, BigComplex};
use hauptmodul::solver::{
    io, required_digits, solve, sweep, ExpansionState, Method, Solver, SolverConfig, SolverError,
};
use hauptmodul::SubgroupData;
use rug::{Float, Integer};

fn index_one() -> Arc<SubgroupData> {
    Arc::new(common::triple("", "(1)", 1))
}

fn gamma0(n: i64) -> Arc<SubgroupData> {
    let (s0, s1) = common::gamma0_triple(n);
    Arc::new(SubgroupData::build(&s0, &s1).unwrap())
}

fn gmres(g: &Arc<SubgroupData>, n: usize, digits: u32, tol: f64) -> ExpansionState {
    solve(Arc::clone(g), SolverConfig::new(n, digits, tol, Method::Gmres))
        .unwrap()
        .state
}

/// `‖D⁻¹(x − y)‖₂` over the unknowns.
fn scaled_distance(solver: &Solver, x: &ExpansionState, y: &ExpansionState) -> f64 {
    let d = solver.sweeper().unknown_scales(x);
    let diff: Vec<BigComplex> = x
        .unknowns()
        .iter()
        .zip(y.unknowns())
        .zip(&d)
        .map(|((a, b), s)| (a - &b).scale(&Float::with_val(s.prec(), s.recip_ref())))
        .collect();
    norm2(&diff).to_f64()
}

#[test]
fn oracles_agree_with_known_values() {
    let j = common::j_minus_744(3);
    assert_eq!(j[0], 1);
    assert_eq!(j[1], 0);
    assert_eq!(j[2], 196884);
    assert_eq!(j[3], 21493760);
    assert_eq!(j[4], 864299970);
    let e = common::eta_quotient_gamma0_2(3);
    assert_eq!(e[1], 0);
    assert_eq!(e[2], 276);
    assert_eq!(e[3], -2048);
    assert_eq!(e[4], 11202);
}

#[test]
fn index_one_matches_j() {
    let state = gmres(&index_one(), 16, 60, 1e-30);
    let j = common::j_minus_744(3);
    for m in 1..=3i64 {
        let got = state.coefficient(0, m).unwrap();
        assert!(common::rel_err(got, &j[(m + 1) as usize]) <= 1e-20, "a_{m}");
    }
    let v = state.evaluate(&BigComplex::i(state.prec())).unwrap();
    assert!(common::rel_err(&v, &Integer::from(984)) <= 1e-15);
}

#[test]
fn gamma0_2_matches_eta_quotient() {
    let state = gmres(&gamma0(2), 24, 80, 1e-30);
    let e = common::eta_quotient_gamma0_2(3);
    for m in 1..=3i64 {
        let got = state.coefficient(0, m).unwrap();
        assert!(common::rel_err(got, &e[(m + 1) as usize]) <= 1e-25, "a_{m}");
    }
}

#[test]
fn iterated_sweeps_approach_276() {
    let g = gamma0(2);
    let cfg = SolverConfig::new(12, 40, 1e-20, Method::Picard);
    let solver = Solver::new(g, cfg).unwrap();
    let mut state = solver.initial_state();
    let want = Integer::from(276);
    let mut errs = Vec::new();
    for _ in 0..40 {
        state = solver.sweep(&state);
        errs.push(common::rel_err(state.coefficient(0, 1).unwrap(), &want));
    }
    assert!(errs[39] < errs[9] * 1e-6);
    assert!(errs[39] < 1e-10);
}

#[test]
fn exact_j_series_is_a_fixed_point() {
    let g = index_one();
    let n = 16;
    let prec = hauptmodul::mpcore::bits_for_digits(60);
    let j = common::j_minus_744(n);
    let mut state = ExpansionState::initial(Arc::clone(&g), n, prec);
    for m in 1..=n as i64 {
        assert!(state.set_coefficient(0, m, BigComplex::from_real(Float::with_val(prec, &j[(m + 1) as usize]))));
    }
    let next = sweep(&state, 0.5).unwrap();
    for m in 1..=n as i64 {
        let got = next.coefficient(0, m).unwrap();
        let abs = (got - state.coefficient(0, m).unwrap()).abs_f64();
        // horocycle error exp(−πN) amplified by exp(πm)
        assert!(abs <= (PI * (m as f64 - n as f64)).exp() * 1e6, "m={m} abs={abs:e}");
    }
}

#[test]
fn picard_is_linear_and_gmres_is_faster() {
    let g = gamma0(2);
    let picard = solve(Arc::clone(&g), SolverConfig::new(24, 80, 1e-30, Method::Picard)).unwrap();
    let ratios = picard.report.ratios();
    let last = &ratios[ratios.len() - 10..];
    let mean = last.iter().sum::<f64>() / 10.0;
    assert!(mean < 1.0);
    assert!(last.iter().all(|r| (r / mean - 1.0).abs() <= 0.2), "{last:?}");
    let gm = solve(g, SolverConfig::new(24, 80, 1e-30, Method::Gmres)).unwrap();
    assert!(gm.report.iterations < picard.report.iterations);
    let hist = &gm.report.residuals;
    assert!(hist.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn picard_and_gmres_agree() {
    let tol = 1e-30;
    for g in [index_one(), gamma0(2), gamma0(3), gamma0(4)] {
        let cfg = |m| SolverConfig {
            max_sweeps: 2000,
            ..SolverConfig::new(24, 80, tol, m)
        };
        let p = solve(Arc::clone(&g), cfg(Method::Picard)).unwrap();
        let q = solve(Arc::clone(&g), cfg(Method::Gmres)).unwrap();
        let solver = Solver::new(Arc::clone(&g), cfg(Method::Gmres)).unwrap();
        let d = scaled_distance(&solver, &p.state, &q.state);
        assert!(d <= tol, "degree {}: {d:e}", g.degree());
    }
}

#[test]
fn truncation_consistency_on_the_horocycle() {
    // Γ0(3) at N = 8 and 20 sits on an aliasing plateau of its width-3 cusp
    let cases = [
        (index_one(), vec![8usize, 12, 16, 20]),
        (gamma0(2), vec![8, 12, 16, 20]),
        (gamma0(3), vec![12, 16]),
        (gamma0(4), vec![8, 12, 16, 20]),
    ];
    for (g, ns) in cases {
        for n in ns {
            // solve well below the truncation level so only truncation remains
            let target = (2.0 * PI * n as f64 / std::f64::consts::LN_10).ceil() as u32;
            let tol = 10f64.powi(-(target as i32));
            let a = gmres(&g, n, required_digits(n, 0.5, target), tol);
            let b = gmres(&g, n + 4, required_digits(n + 4, 0.5, target), tol);
            let bound = (-PI * n as f64).exp() * 1e3;
            for k in 0..a.num_cusps() {
                let w = g.cusps[k].width as f64;
                for m in a.mu(k)..=a.n_k(k) {
                    let x = a.coefficient(k, m).unwrap();
                    let y = b.coefficient(k, m).unwrap().with_prec(x.prec());
                    let err = (x - &y).abs_f64() * (-PI * m as f64 / w).exp();
                    assert!(err <= bound, "degree {} N={n} cusp {k} m={m}: {err:e}", g.degree());
                }
            }
        }
    }
}

#[test]
fn refuses_positive_genus() {
    let g = gamma0(11);
    assert_eq!(g.genus, 1);
    let err = solve(g, SolverConfig::new(8, 40, 1e-10, Method::Gmres)).unwrap_err();
    assert!(matches!(err, SolverError::NotGenusZero(1)));
}

#[test]
fn reports_non_convergence_with_state() {
    let mut cfg = SolverConfig::new(12, 40, 1e-20, Method::Picard);
    cfg.max_sweeps = 3;
    match solve(gamma0(2), cfg).unwrap_err() {
        SolverError::NotConverged { state, report } => {
            assert_eq!(report.iterations, 3);
            assert!(!report.converged);
            assert_eq!(state.coefficient(0, -1).unwrap().re, 1);
        }
        other => panic!("{other}"),
    }
}

#[test]
fn rejects_insufficient_precision() {
    let err = solve(gamma0(2), SolverConfig::new(24, 40, 1e-30, Method::Gmres)).unwrap_err();
    assert!(matches!(err, SolverError::Config(_)));
}

#[test]
fn principal_strip_is_periodic() {
    let g = gamma0(3);
    let state = gmres(&g, 12, 40, 1e-15);
    let prec = state.prec();
    let w0 = g.principal().width as i64;
    let z = BigComplex::from_f64(prec, 0.1, 1.3);
    let shifted = hauptmodul::subgroup::IntMatrix2::t_pow(w0).apply(&z);
    let a = state.evaluate(&z).unwrap();
    let b = state.evaluate(&shifted).unwrap();
    assert!((&a - &b).abs_f64() <= 1e-30 * a.abs_f64().max(1.0));
}

#[test]
fn coefficient_file_round_trip() {
    let g = gamma0(2);
    let state = gmres(&g, 12, 40, 1e-15);
    let text = io::write_coefficients(&state, "gamma0_2", 40);
    assert!(text.starts_with("group: gamma0_2\nN: 12\nprecision_digits: 40\n"));
    let (header, back) = io::read_coefficients(&text, Arc::clone(&g)).unwrap();
    assert_eq!(header.n, 12);
    assert_eq!(back.n(), 12);
    for k in 0..state.num_cusps() {
        for (a, b) in state.coefficients(k).iter().zip(back.coefficients(k)) {
            assert!((a - b).abs_f64() <= 1e-38 * a.abs_f64().max(1.0));
        }
    }
}
