//! Finite-index subgroups of `PSL₂(ℤ)` given by a permutation pair.
//!
//! The modular group acts on the right cosets `Γ\PSL₂(ℤ)` by right
//! multiplication, `Γg·h = Γ(gh)`. With the left-first composition of
//! [`Permutation::then`] the assignment `word ↦ permutation` is a
//! homomorphism, fixed once here:
//!
//! | matrix            | permutation        |
//! |-------------------|--------------------|
//! | `S = (0 −1; 1 0)` | `σ0`               |
//! | `ST`              | `σ1`               |
//! | `T = S·ST`        | `σ0σ1`             |
//! | `T⁻¹`             | `σ∞ = (σ0σ1)⁻¹`    |
//! | `R = S·T⁻¹·S`     | `σ0σ∞σ0`           |
//!
//! Coset 0 is `Γ` itself. Cosets are 0-based here and 1-based in all output.

mod hsu;
mod matrix;
mod reduce;

use thiserror::Error;

use crate::perm::{PermError, Permutation};

pub use hsu::congruence_test;
pub use matrix::{Cusp, IntMatrix2};
pub use reduce::{reduce_to_fundamental_domain, ReduceError, Reduction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgroupError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("relation {0} does not hold")]
    Relation(&'static str),
    #[error("the generated group is not transitive: point {0} is unreachable from 1")]
    Intransitive(usize),
    #[error("cusp representative {0}/{1} is not reduced")]
    NotReduced(i64, i64),
    #[error("matrix entry overflow while building coset representatives")]
    Overflow,
}

/// One generator step of a word in `PSL₂(ℤ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    S,
    T,
    TInv,
}

impl Generator {
    pub fn matrix(self) -> IntMatrix2 {
        match self {
            Generator::S => IntMatrix2::S,
            Generator::T => IntMatrix2::T,
            Generator::TInv => IntMatrix2::T.inverse(),
        }
    }
}

/// A `Γ`-class of cusps, i.e. one cycle of `σ∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspClass {
    pub index: usize,
    /// Cosets of the cycle in `σ∞` order, smallest first.
    pub cycle: Vec<usize>,
    pub width: usize,
    /// `γ_m·∞` for the leader `m = cycle[0]`.
    pub representative: Cusp,
    /// Sends `representative` to `∞`.
    pub normalizer: IntMatrix2,
    pub is_principal: bool,
    /// `ν_k·γ_m = ±T^s`.
    leader_shift: i64,
}

/// Where a coset's tile sits in its cusp's local coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TilePosition {
    pub cusp: usize,
    /// Position in the cusp's `σ∞` cycle.
    pub position: usize,
    /// `ν_k·γ̃_l = T^shift` for the cusp-adapted representative `γ̃_l`.
    pub shift: i64,
}

#[derive(Debug, Clone)]
pub struct SubgroupData {
    pub s0: Permutation,
    pub s1: Permutation,
    pub s_inf: Permutation,
    /// Permutation of `T`, i.e. `σ0σ1`.
    pub t_perm: Permutation,
    pub index: usize,
    /// BFS coset representatives; `coset_reps[0]` is the identity.
    pub coset_reps: Vec<IntMatrix2>,
    /// Principal cusp first.
    pub cusps: Vec<CuspClass>,
    pub e2: usize,
    pub e3: usize,
    pub genus: usize,
    pub is_congruence: bool,
    tiles: Vec<TilePosition>,
    words: Vec<Vec<Generator>>,
}

/// Normalizer of a cusp: identity for `∞`, otherwise
/// `(p', −(pp'+1)/q; q, −p)` with the least `p' ≥ 0` solving `pp' ≡ −1 (mod q)`.
pub fn cusp_normalizer(x: Cusp) -> Result<IntMatrix2, SubgroupError> {
    let (p, q) = match x {
        Cusp::Infinity => return Ok(IntMatrix2::IDENTITY),
        Cusp::Finite { p, q } => (p, q),
    };
    if q <= 0 || matrix::gcd_i64(p, q) != 1 {
        return Err(SubgroupError::NotReduced(p, q));
    }
    let pp = if q == 1 {
        0
    } else {
        let inv = mod_inverse(p.rem_euclid(q), q).ok_or(SubgroupError::NotReduced(p, q))?;
        (q - inv) % q
    };
    let b = -(p * pp + 1) / q;
    IntMatrix2::new(pp, b, q, -p).ok_or(SubgroupError::Overflow)
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as i64)
}

impl SubgroupData {
    /// Validates `(σ0, σ1)` and computes cosets, cusps and invariants.
    pub fn build(s0: &Permutation, s1: &Permutation) -> Result<Self, SubgroupError> {
        let d = s0.degree();
        if s1.degree() != d {
            return Err(PermError::DegreeMismatch(d, s1.degree()).into());
        }
        if !s0.pow(2).is_identity() {
            return Err(SubgroupError::Relation("s0^2 = 1"));
        }
        if !s1.pow(3).is_identity() {
            return Err(SubgroupError::Relation("s1^3 = 1"));
        }
        let t_perm = s0.then(s1)?;
        let s_inf = t_perm.inverse();
        debug_assert!(s0.then(s1)?.then(&s_inf)?.is_identity());

        // BFS over T- and S-edges from coset 0; T-edges are explored first.
        let mut reps: Vec<Option<IntMatrix2>> = vec![None; d];
        let mut words: Vec<Vec<Generator>> = vec![Vec::new(); d];
        reps[0] = Some(IntMatrix2::IDENTITY);
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            let g = reps[c].expect("queued cosets have representatives");
            for (gen, perm) in [(Generator::T, &t_perm), (Generator::S, s0)] {
                let next = perm.apply(c);
                if reps[next].is_none() {
                    reps[next] = Some(g.checked_mul(&gen.matrix()).ok_or(SubgroupError::Overflow)?);
                    let mut w = words[c].clone();
                    w.push(gen);
                    words[next] = w;
                    queue.push_back(next);
                }
            }
        }
        if let Some(missing) = reps.iter().position(Option::is_none) {
            return Err(SubgroupError::Intransitive(missing + 1));
        }
        let coset_reps: Vec<IntMatrix2> = reps.into_iter().map(Option::unwrap).collect();

        let cycles = s_inf.cycle_decomposition().cycles;
        let min_width = cycles.iter().map(Vec::len).min().unwrap_or(1);
        let principal = cycles
            .iter()
            .position(|c| c.len() == min_width && c.contains(&0))
            .or_else(|| cycles.iter().position(|c| c.len() == min_width))
            .expect("at least one cycle");
        let mut order: Vec<usize> = (0..cycles.len()).collect();
        order.retain(|&i| i != principal);
        order.insert(0, principal);

        let mut cusps = Vec::with_capacity(cycles.len());
        let mut tiles = vec![
            TilePosition {
                cusp: 0,
                position: 0,
                shift: 0
            };
            d
        ];
        for (k, &ci) in order.iter().enumerate() {
            let cycle = cycles[ci].clone();
            let leader = cycle[0];
            let width = cycle.len();
            let representative = coset_reps[leader].apply_cusp(Cusp::Infinity);
            let normalizer = cusp_normalizer(representative)?;
            let leader_shift = normalizer
                .checked_mul(&coset_reps[leader])
                .and_then(|m| m.translation())
                .ok_or(SubgroupError::Overflow)?;
            // cycle[j] = leader·σ∞^j, so Γγ_{cycle[j]} = Γγ_leader·T^{−j}
            for (j, &l) in cycle.iter().enumerate() {
                tiles[l] = TilePosition {
                    cusp: k,
                    position: j,
                    shift: (leader_shift - j as i64).rem_euclid(width as i64),
                };
            }
            cusps.push(CuspClass {
                index: k,
                cycle,
                width,
                representative,
                normalizer,
                is_principal: k == 0,
                leader_shift,
            });
        }

        let e2 = s0.fixed_points();
        let e3 = s1.fixed_points();
        // 12g = 12 + d − 3e2 − 4e3 − 6c
        let twelve_g = 12 + d as i64 - 3 * e2 as i64 - 4 * e3 as i64 - 6 * cusps.len() as i64;
        assert!(
            twelve_g >= 0 && twelve_g % 12 == 0,
            "Riemann–Hurwitz violated for a valid triple"
        );

        let mut g = SubgroupData {
            s0: s0.clone(),
            s1: s1.clone(),
            s_inf,
            t_perm,
            index: d,
            coset_reps,
            cusps,
            e2,
            e3,
            genus: (twelve_g / 12) as usize,
            is_congruence: false,
            tiles,
            words,
        };
        g.is_congruence = congruence_test(&g);
        Ok(g)
    }

    pub fn degree(&self) -> usize {
        self.index
    }

    pub fn principal(&self) -> &CuspClass {
        &self.cusps[0]
    }

    /// Generalized level: lcm of the cusp widths.
    pub fn level(&self) -> u64 {
        self.t_perm.order()
    }

    /// The `S`/`T` word whose matrix is `coset_reps[coset]`.
    pub fn coset_word(&self, coset: usize) -> &[Generator] {
        &self.words[coset]
    }

    pub fn tile(&self, coset: usize) -> TilePosition {
        self.tiles[coset]
    }

    /// Representative of coset `l` adapted to its cusp: `γ_m·T^{−j}` for the
    /// cycle leader `m` and position `j`. It differs from `coset_reps[l]` by
    /// an element of `Γ` on the left.
    pub fn cusp_adapted_rep(&self, coset: usize) -> IntMatrix2 {
        let t = self.tiles[coset];
        let leader = self.cusps[t.cusp].cycle[0];
        self.coset_reps[leader] * IntMatrix2::t_pow(-(t.position as i64))
    }

    /// `ν_k·γ_m = ±T^s` for the leader `m` of cusp `k`.
    pub fn leader_shift(&self, cusp: usize) -> i64 {
        self.cusps[cusp].leader_shift
    }

    pub fn generator_perm(&self, gen: Generator) -> &Permutation {
        match gen {
            Generator::S => &self.s0,
            Generator::T => &self.t_perm,
            Generator::TInv => &self.s_inf,
        }
    }

    /// Image of coset `start` under the word, applied left to right.
    pub fn act(&self, start: usize, word: &[Generator]) -> usize {
        word.iter()
            .fold(start, |c, &g| self.generator_perm(g).apply(c))
    }

    /// Permutation of `R = S·T⁻¹·S`.
    pub fn r_perm(&self) -> Permutation {
        self.s0
            .then(&self.s_inf)
            .and_then(|p| p.then(&self.s0))
            .expect("same degree")
    }

    /// Coset `l·T^n` computed from the cycle structure.
    pub(crate) fn shift_coset(&self, coset: usize, n: i64) -> usize {
        let t = self.tiles[coset];
        let cycle = &self.cusps[t.cusp].cycle;
        let w = cycle.len() as i64;
        // T = σ∞⁻¹ moves one step backwards along the σ∞ cycle
        cycle[(t.position as i64 - n).rem_euclid(w) as usize]
    }

    /// Orders of `σ0σ1` and `σ0σ1σ0σ1²`.
    pub fn relation_orders(&self) -> (u64, u64) {
        let a = self.t_perm.order();
        let b = self
            .t_perm
            .then(&self.s0)
            .and_then(|p| p.then(&self.s1.pow(2)))
            .expect("same degree")
            .order();
        (a, b)
    }
}

pub fn matrix_of_word(word: &[Generator]) -> IntMatrix2 {
    word.iter()
        .fold(IntMatrix2::IDENTITY, |m, &g| m * g.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma0_2() -> SubgroupData {
        let s0 = Permutation::parse_cycles("(1,2)", 3).unwrap();
        let s1 = Permutation::parse_cycles("(1,2,3)", 3).unwrap();
        SubgroupData::build(&s0, &s1).unwrap()
    }

    #[test]
    fn full_modular_group() {
        let id = Permutation::identity(1);
        let g = SubgroupData::build(&id, &id).unwrap();
        assert_eq!((g.index, g.e2, g.e3, g.genus), (1, 1, 1, 0));
        assert_eq!(g.cusps.len(), 1);
        assert_eq!(g.cusps[0].width, 1);
        assert_eq!(g.cusps[0].representative, Cusp::Infinity);
        assert_eq!(g.cusps[0].normalizer, IntMatrix2::IDENTITY);
        assert!(g.is_congruence);
    }

    #[test]
    fn gamma0_2_profile() {
        let g = gamma0_2();
        assert_eq!((g.index, g.e2, g.e3, g.genus), (3, 1, 0, 0));
        let mut widths: Vec<_> = g.cusps.iter().map(|c| c.width).collect();
        widths.sort();
        assert_eq!(widths, vec![1, 2]);
        assert_eq!(g.principal().width, 1);
        assert!(g.principal().is_principal);
        assert_eq!(g.coset_reps[0], IntMatrix2::IDENTITY);
        // coset 1 is reached by S, coset 2 by T (T-edges first)
        assert_eq!(g.coset_reps[2], IntMatrix2::T);
        assert_eq!(g.coset_reps[1], IntMatrix2::S);
    }

    #[test]
    fn coset_reps_realize_cosets() {
        let g = gamma0_2();
        for l in 0..g.index {
            let word = g.coset_word(l);
            assert_eq!(matrix_of_word(word), g.coset_reps[l]);
            assert_eq!(g.act(0, word), l);
        }
    }

    #[test]
    fn normalizer_examples() {
        let n0 = cusp_normalizer(Cusp::Finite { p: 0, q: 1 }).unwrap();
        assert_eq!((n0.a, n0.b, n0.c, n0.d), (0, -1, 1, 0));
        let n = cusp_normalizer(Cusp::Finite { p: 1, q: 2 }).unwrap();
        assert_eq!((n.a, n.b, n.c, n.d), (1, -1, 2, -1));
        assert_eq!(n.det(), 1);
        assert_eq!(n.apply_cusp(Cusp::Finite { p: 1, q: 2 }), Cusp::Infinity);
        assert_eq!(cusp_normalizer(Cusp::Infinity).unwrap(), IntMatrix2::IDENTITY);
        assert_eq!(
            cusp_normalizer(Cusp::Finite { p: 2, q: 4 }).unwrap_err(),
            SubgroupError::NotReduced(2, 4)
        );
        for q in 1..30 {
            for p in -40..40 {
                if matrix::gcd_i64(p, q) == 1 {
                    let x = Cusp::Finite { p, q };
                    let n = cusp_normalizer(x).unwrap();
                    assert_eq!(n.det(), 1);
                    assert_eq!(n.apply_cusp(x), Cusp::Infinity);
                    assert!(n.a >= 0 && n.a < q.max(1));
                }
            }
        }
    }

    #[test]
    fn relation_errors() {
        let s0 = Permutation::parse_cycles("(1,2,3)", 3).unwrap();
        let s1 = Permutation::parse_cycles("(1,2,3)", 3).unwrap();
        assert_eq!(
            SubgroupData::build(&s0, &s1).unwrap_err(),
            SubgroupError::Relation("s0^2 = 1")
        );
        let s0 = Permutation::parse_cycles("(1,2)", 4).unwrap();
        let s1 = Permutation::parse_cycles("(1,2)", 4).unwrap();
        assert_eq!(
            SubgroupData::build(&s0, &s1).unwrap_err(),
            SubgroupError::Relation("s1^3 = 1")
        );
        let s0 = Permutation::parse_cycles("(1,2)", 4).unwrap();
        let s1 = Permutation::identity(4);
        assert_eq!(
            SubgroupData::build(&s0, &s1).unwrap_err(),
            SubgroupError::Intransitive(3)
        );
        let s1 = Permutation::identity(3);
        assert!(matches!(
            SubgroupData::build(&s0, &s1).unwrap_err(),
            SubgroupError::Perm(PermError::DegreeMismatch(4, 3))
        ));
    }

    #[test]
    fn tiles_sit_at_infinity() {
        let g = gamma0_2();
        for l in 0..g.index {
            let t = g.tile(l);
            let nu = g.cusps[t.cusp].normalizer;
            let m = nu * g.cusp_adapted_rep(l);
            let s = m.translation().expect("tile at infinity");
            assert_eq!(s.rem_euclid(g.cusps[t.cusp].width as i64), t.shift);
        }
    }

    #[test]
    fn shift_coset_matches_t_perm() {
        let g = gamma0_2();
        for l in 0..g.index {
            assert_eq!(g.shift_coset(l, 1), g.t_perm.apply(l));
            assert_eq!(g.shift_coset(l, -1), g.s_inf.apply(l));
            assert_eq!(g.shift_coset(l, 5), g.t_perm.pow(5).apply(l));
        }
    }
}
