//! Hsu's relation criterion for congruence subgroups.
//!
//! With `l` and `r` the permutations of `L = T` and `R = (1 0; 1 1)` and `N`
//! the order of `l`, the subgroup is congruence iff a finite list of words in
//! `l, r` act trivially. The list depends on whether `N` is odd, a power of
//! two, or of mixed parity.

use crate::perm::Permutation;

use super::SubgroupData;

/// Words are composed left to right, matching the homomorphism in `super`.
fn word(parts: &[&Permutation]) -> Permutation {
    let d = parts[0].degree();
    parts
        .iter()
        .fold(Permutation::identity(d), |acc, p| acc.then(p).expect("same degree"))
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r, 1, "{a} is not invertible modulo {m}");
    old_s.rem_euclid(m as i128) as u64
}

/// Checks the relations for a level that is a power of two.
fn power_of_two_relations(l: &Permutation, r: &Permutation, modulus: u64) -> bool {
    let fifth = inverse_mod(5, modulus) as i64;
    let s = word(&[&l.pow(20), &r.pow(fifth), &l.pow(-4), &r.inverse()]);
    let lrl = word(&[l, &r.inverse(), l]);
    // (l r⁻¹ l)⁻¹ s (l r⁻¹ l) = s⁻¹
    if !word(&[&lrl.inverse(), &s, &lrl, &s]).is_identity() {
        return false;
    }
    // s⁻¹ r s = r²⁵
    if !word(&[&s.inverse(), r, &s, &r.pow(-25)]).is_identity() {
        return false;
    }
    // (s r⁵ l r⁻¹ l)³ = 1
    word(&[&s, &r.pow(5), &lrl]).pow(3).is_identity()
}

/// `true` iff `Γ` contains the principal congruence subgroup of its level.
pub fn congruence_test(g: &SubgroupData) -> bool {
    if g.index == 1 {
        return true;
    }
    let l = &g.t_perm;
    let r = g.r_perm();
    let n = l.order();
    let e = 1u64 << n.trailing_zeros();
    let m = n / e;

    if e == 1 {
        // (r² l^{−1/2})³ = 1
        let half = inverse_mod(2, m) as i64;
        return word(&[&r, &r, &l.pow(-half)]).pow(3).is_identity();
    }
    if m == 1 {
        return power_of_two_relations(l, &r, n);
    }

    // c ≡ 0 (mod e), c ≡ 1 (mod m); d ≡ 1 (mod e), d ≡ 0 (mod m)
    let c = (e * inverse_mod(e % m, m)) % n;
    let d = (m * inverse_mod(m % e, e)) % n;
    let a = l.pow(c as i64);
    let b = r.pow(c as i64);
    let lo = l.pow(d as i64);
    let ro = r.pow(d as i64);
    let half = inverse_mod(2, m) as i64;

    // [a, r_o] = 1
    if !word(&[&a.inverse(), &ro.inverse(), &a, &ro]).is_identity() {
        return false;
    }
    let aba = word(&[&a, &b.inverse(), &a]);
    // (a b⁻¹ a)⁴ = 1
    if !aba.pow(4).is_identity() {
        return false;
    }
    // (a b⁻¹ a)² = (b⁻¹ a)³
    if !word(&[&aba.pow(2), &word(&[&b.inverse(), &a]).pow(-3)]).is_identity() {
        return false;
    }
    // (a b⁻¹ a)² = (b² a^{−1/2})³
    if !word(&[&aba.pow(2), &word(&[&b, &b, &a.pow(-half)]).pow(-3)]).is_identity() {
        return false;
    }
    // odd-free part: relations of the power-of-two case in l_o, r_o, with
    // the last one twisted by (l_o r_o⁻¹ l_o)²
    let fifth = inverse_mod(5, e) as i64;
    let s = word(&[&lo.pow(20), &ro.pow(fifth), &lo.pow(-4), &ro.inverse()]);
    let lrl = word(&[&lo, &ro.inverse(), &lo]);
    if !word(&[&lrl.inverse(), &s, &lrl, &s]).is_identity() {
        return false;
    }
    if !word(&[&s.inverse(), &ro, &s, &ro.pow(-25)]).is_identity() {
        return false;
    }
    // (l_o r_o⁻¹ l_o)² = (s r_o⁵ l_o r_o⁻¹ l_o)³
    word(&[&lrl.pow(2), &word(&[&s, &ro.pow(5), &lrl]).pow(-3)]).is_identity()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_inverses() {
        assert_eq!(inverse_mod(2, 7), 4);
        assert_eq!(inverse_mod(5, 8), 5);
        assert_eq!(inverse_mod(5, 2), 1);
        assert_eq!(inverse_mod(3, 1), 0);
    }
}
