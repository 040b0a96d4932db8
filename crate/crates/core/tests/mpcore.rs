mod common;

use hauptmodul::mpcore::{bits_for_digits, fft, gmres, norm2, BigComplex, Direction, FftPlan, GmresOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vec(rng: &mut ChaCha8Rng, len: usize, prec: u32) -> Vec<BigComplex> {
    (0..len)
        .map(|_| BigComplex::from_f64(prec, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn max_diff(a: &[BigComplex], b: &[BigComplex]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs_f64()).fold(0.0, f64::max)
}

#[test]
fn fft_matches_direct_summation() {
    let prec = 256;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in 0..=6 {
        let x = random_vec(&mut rng, 1 << k, prec);
        let got = fft(&x, Direction::Forward).unwrap();
        let want = common::naive_dft(&x);
        assert!(max_diff(&got, &want) <= 1e-70, "length {}", x.len());
    }
}

#[test]
fn inverse_undoes_forward() {
    let prec = bits_for_digits(60);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let plan = FftPlan::new(128, prec).unwrap();
    let x = random_vec(&mut rng, 128, prec);
    let back = plan
        .transform(&plan.transform(&x, Direction::Forward).unwrap(), Direction::Inverse)
        .unwrap();
    assert!(max_diff(&x, &back) <= 1e-60);
}

#[test]
fn gmres_matches_dense_elimination() {
    let n = 20;
    let prec = bits_for_digits(50);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let scale = rug::Float::with_val(prec, 1.0 / (2.0 * n as f64));
    let a: Vec<Vec<BigComplex>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigComplex> = random_vec(&mut rng, n, prec).iter().map(|v| v.scale(&scale)).collect();
            row[i] += &BigComplex::one(prec);
            row
        })
        .collect();
    let b = random_vec(&mut rng, n, prec);
    let apply = |x: &[BigComplex]| -> Vec<BigComplex> {
        a.iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(BigComplex::zero(prec), |acc, (r, v)| &acc + &(r * v))
            })
            .collect()
    };
    let opts = GmresOptions {
        tol: 1e-45,
        max_iter: 50,
        restart: None,
    };
    let out = gmres(apply, &b, &opts).unwrap();
    assert!(out.converged);
    assert!(out.applications <= n + 1);
    assert!(out.residual_history.windows(2).all(|w| w[1] <= w[0]));
    let want = common::dense_solve(&a, &b);
    let rel = max_diff(&out.solution, &want) / norm2(&want).to_f64();
    assert!(rel <= 1e-40, "{rel:e}");
}

#[test]
fn restarted_gmres_agrees_with_full() {
    let n = 12;
    let prec = bits_for_digits(40);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let diag: Vec<BigComplex> = (0..n)
        .map(|i| BigComplex::from_f64(prec, 1.0 + i as f64 / 4.0, rng.gen_range(-0.5..0.5)))
        .collect();
    let apply = |x: &[BigComplex]| -> Vec<BigComplex> { x.iter().zip(&diag).map(|(v, d)| v * d).collect() };
    let b = random_vec(&mut rng, n, prec);
    let full = gmres(apply, &b, &GmresOptions { tol: 1e-35, max_iter: 100, restart: None }).unwrap();
    let restarted = gmres(apply, &b, &GmresOptions { tol: 1e-35, max_iter: 200, restart: Some(4) }).unwrap();
    assert!(restarted.converged);
    assert!(restarted.applications > full.applications);
    assert!(max_diff(&full.solution, &restarted.solution) <= 1e-33);
}
