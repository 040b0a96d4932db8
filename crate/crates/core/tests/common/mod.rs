//! Independent reference computations shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashMap;

use hauptmodul::mpcore::BigComplex;
use hauptmodul::{Permutation, SubgroupData};
use rug::ops::Pow;
use rug::{Float, Integer};

/// Truncated power series product, both inputs indexed from `q^0`.
fn mul_series(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += Integer::from(x * y);
        }
    }
    out
}

fn sigma(n: u64, k: u32) -> Integer {
    let mut s = Integer::new();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            s += Integer::from(d).pow(k);
        }
    }
    s
}

/// `E4`, `E6` as integer series up to `q^{len−1}`.
pub fn eisenstein(len: usize) -> (Vec<Integer>, Vec<Integer>) {
    let mut e4 = vec![Integer::from(1)];
    let mut e6 = vec![Integer::from(1)];
    for n in 1..len as u64 {
        e4.push(sigma(n, 3) * 240u32);
        e6.push(sigma(n, 5) * -504i32);
    }
    (e4, e6)
}

/// Coefficients `c(−1), c(0), …, c(n)` of `j − 744 = E4³/Δ − 744`,
/// with `Δ = (E4³ − E6²)/1728`.
pub fn j_minus_744(n: usize) -> Vec<Integer> {
    // Δ = q·D(q) with D(0) = 1; need E4³/D up to q^{n+1}
    let len = n + 3;
    let (e4, e6) = eisenstein(len + 1);
    let e4_3 = mul_series(&mul_series(&e4, &e4, len + 1), &e4, len + 1);
    let e6_2 = mul_series(&e6, &e6, len + 1);
    let delta: Vec<Integer> = e4_3
        .iter()
        .zip(&e6_2)
        .map(|(a, b)| {
            let d = Integer::from(a - b);
            assert!(d.is_divisible_u(1728));
            d / 1728u32
        })
        .collect();
    assert_eq!(delta[0], 0);
    assert_eq!(delta[1], 1);
    let d: Vec<Integer> = delta[1..].to_vec();
    // 1/D by the recurrence for a monic series
    let mut inv = vec![Integer::from(1)];
    for k in 1..len {
        let mut s = Integer::new();
        for i in 1..=k.min(d.len() - 1) {
            s -= Integer::from(&d[i] * &inv[k - i]);
        }
        inv.push(s);
    }
    let mut j = mul_series(&e4_3, &inv, len);
    j.truncate(n + 2);
    j[1] -= 744;
    j
}

/// Coefficients `c(−1), c(0), …, c(n)` of `(η(z)/η(2z))^24 + 24
/// = q^{−1}·Π(1+q^k)^{−24} + 24`.
pub fn eta_quotient_gamma0_2(n: usize) -> Vec<Integer> {
    let len = n + 2;
    // Π(1+q^k)^{-1} = Π(1−q^{2k−1}) (Euler)
    let mut p = vec![Integer::new(); len];
    p[0] = Integer::from(1);
    for k in (1..len).step_by(2) {
        for i in (k..len).rev() {
            let t = p[i - k].clone();
            p[i] -= t;
        }
    }
    let mut acc = vec![Integer::new(); len];
    acc[0] = Integer::from(1);
    for _ in 0..24 {
        acc = mul_series(&acc, &p, len);
    }
    acc[1] += 24;
    acc
}

/// Permutation pair of `Γ0(N)` from its right action on `P¹(ℤ/N)`:
/// the coset `Γ0(N)g` is the bottom row of `g` up to units.
pub fn gamma0_triple(n: i64) -> (Permutation, Permutation) {
    let units: Vec<i64> = (1..n.max(2)).filter(|u| gcd(*u, n) == 1).collect();
    let units = if n == 1 { vec![0] } else { units };
    let canon = |c: i64, d: i64| -> (i64, i64) {
        units
            .iter()
            .map(|u| ((u * c).rem_euclid(n), (u * d).rem_euclid(n)))
            .min()
            .unwrap()
    };
    let mut points = vec![canon(0, 1)];
    let mut index = HashMap::new();
    index.insert(points[0], 0usize);
    for c in 0..n {
        for d in 0..n {
            if gcd(gcd(c, d), n) == 1 {
                let p = canon(c, d);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(p) {
                    e.insert(points.len());
                    points.push(p);
                }
            }
        }
    }
    // (c, d)·S = (d, −c); (c, d)·ST = (d, d − c)
    let s0: Vec<usize> = points.iter().map(|&(c, d)| index[&canon(d, -c)]).collect();
    let s1: Vec<usize> = points.iter().map(|&(c, d)| index[&canon(d, d - c)]).collect();
    (
        Permutation::from_images(s0).unwrap(),
        Permutation::from_images(s1).unwrap(),
    )
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `Γ` contains `Γ(N)` for `N` the order of the `T`-permutation iff the
/// action of `PSL₂(ℤ)` factors through `PSL₂(ℤ/N)`. Walks the Cayley graph
/// of `PSL₂(ℤ/N)` on `S` and `T` and checks that every edge is consistent.
pub fn brute_force_congruence(g: &SubgroupData) -> bool {
    let n = g.t_perm.order() as i64;
    if n == 1 {
        return true;
    }
    type M = [i64; 4];
    let norm = |m: M| -> M {
        let m = m.map(|x| x.rem_euclid(n));
        let neg = m.map(|x| (-x).rem_euclid(n));
        m.min(neg)
    };
    let mul = |a: M, b: M| -> M {
        norm([
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ])
    };
    let gens: [(M, &Permutation); 2] = [([1, 1, 0, 1], &g.t_perm), ([0, -1, 1, 0], &g.s0)];
    let start = norm([1, 0, 0, 1]);
    let mut seen: HashMap<M, Permutation> = HashMap::new();
    seen.insert(start, Permutation::identity(g.index));
    let mut queue = vec![start];
    while let Some(m) = queue.pop() {
        let p = seen[&m].clone();
        for (gm, gp) in gens {
            let next = mul(m, gm);
            let np = p.then(gp).unwrap();
            match seen.get(&next) {
                Some(existing) if *existing != np => return false,
                Some(_) => {}
                None => {
                    seen.insert(next, np);
                    queue.push(next);
                }
            }
        }
    }
    true
}

/// `X[r] = Σ_j x_j exp(−2πi·jr/M)` by direct summation.
pub fn naive_dft(x: &[BigComplex]) -> Vec<BigComplex> {
    let m = x.len();
    let prec = x[0].prec();
    (0..m)
        .map(|r| {
            let mut acc = BigComplex::zero(prec);
            for (j, v) in x.iter().enumerate() {
                let w = BigComplex::root_of_unity(prec, -((j * r % m) as i64), m as u64);
                acc += &(v * &w);
            }
            acc
        })
        .collect()
}

/// Dense Gaussian elimination with partial pivoting.
pub fn dense_solve(a: &[Vec<BigComplex>], b: &[BigComplex]) -> Vec<BigComplex> {
    let n = b.len();
    let mut m: Vec<Vec<BigComplex>> = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        m.swap(col, piv);
        rhs.swap(col, piv);
        let inv = m[col][col].recip();
        for row in col + 1..n {
            let f = &m[row][col] * &inv;
            for k in col..n {
                let t = &f * &m[col][k];
                m[row][k] -= &t;
            }
            let t = &f * &rhs[col];
            rhs[row] -= &t;
        }
    }
    let prec = b[0].prec();
    let mut x = vec![BigComplex::zero(prec); n];
    for row in (0..n).rev() {
        let mut s = rhs[row].clone();
        for k in row + 1..n {
            s -= &(&m[row][k] * &x[k]);
        }
        x[row] = s.div(&m[row][row]);
    }
    x
}

/// Relative error of a computed complex value against an integer.
pub fn rel_err(x: &BigComplex, want: &Integer) -> f64 {
    let prec = x.prec();
    let w = Float::with_val(prec, want);
    let d = BigComplex::new(Float::with_val(prec, &x.re - &w), x.im.clone());
    d.abs_f64() / w.abs().to_f64()
}

/// `(σ0, σ1)` from the 1-based cycle notation.
pub fn triple(s0: &str, s1: &str, degree: usize) -> SubgroupData {
    let s0 = Permutation::parse_cycles(s0, degree).unwrap();
    let s1 = Permutation::parse_cycles(s1, degree).unwrap();
    SubgroupData::build(&s0, &s1).unwrap()
}

/// A random element of `Γ`: a random `S`/`T` word followed by the inverse of
/// the coset representative it lands on.
pub fn random_gamma<R: rand::Rng>(g: &SubgroupData, rng: &mut R, len: usize) -> hauptmodul::subgroup::IntMatrix2 {
    use hauptmodul::subgroup::{matrix_of_word, Generator};
    let word: Vec<Generator> = (0..len)
        .map(|_| match rng.gen_range(0..3) {
            0 => Generator::S,
            1 => Generator::T,
            _ => Generator::TInv,
        })
        .collect();
    let coset = g.act(0, &word);
    assert_eq!(g.act(0, g.coset_word(coset)), coset);
    let gamma = matrix_of_word(&word) * g.coset_reps[coset].inverse();
    assert_eq!(gamma, matrix_of_word(&word) * matrix_of_word(g.coset_word(coset)).inverse());
    gamma
}

/// Uniform point with `Re z ∈ [−1/2, 1/2]`, `Im z ∈ [lo, hi]`.
pub fn random_point<R: rand::Rng>(rng: &mut R, prec: u32, lo: f64, hi: f64) -> BigComplex {
    BigComplex::from_f64(prec, rng.gen_range(-0.5..0.5), rng.gen_range(lo..hi))
}
