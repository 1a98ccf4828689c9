//! Exact integer combinatorics: binomials, the gcd/lcm invariants attached to a hook,
//! and the compositions indexing summands of the resolution.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// The hook partition `(a, 1^b)`: a row of length `a` and `b` further boxes in the
/// first column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HookShape {
    a: usize,
    b: usize,
}

impl HookShape {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a < 1 {
            return Err(invalid(format!("hook arm must be at least 1, got a = {a}")));
        }
        Ok(HookShape { a, b })
    }

    /// Arm length, corner included.
    pub fn a(&self) -> usize {
        self.a
    }

    /// Leg length, corner excluded.
    pub fn b(&self) -> usize {
        self.b
    }

    pub fn degree(&self) -> usize {
        self.a + self.b
    }

    /// `h(k) = (a + k, 1^{b - k})`, defined for `0 <= k <= b`.
    pub fn shift(&self, k: usize) -> Result<Self> {
        if k > self.b {
            return Err(invalid(format!("shift k = {k} exceeds leg length b = {}", self.b)));
        }
        Ok(HookShape { a: self.a + k, b: self.b - k })
    }
}

impl fmt::Display for HookShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "({})", self.a)
        } else {
            write!(f, "({},1^{})", self.a, self.b)
        }
    }
}

/// A composition `(a_1, ..., a_m)` labelling a weight space, or equivalently the
/// projective summand `D(a_1, ..., a_m)`. Ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<usize>);

impl Weight {
    pub fn new(parts: Vec<usize>) -> Self {
        Weight(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    /// The weight obtained by adding part `t + 1` into part `t` (1-based), i.e. the
    /// target weight of the letter substitution `j -> j - 1` for `j > t`.
    pub fn merge(&self, t: usize) -> Option<Weight> {
        if t == 0 || t >= self.0.len() {
            return None;
        }
        let mut parts = self.0.clone();
        let next = parts.remove(t);
        parts[t - 1] += next;
        Some(Weight(parts))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, p) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Exact binomial coefficient; zero outside `0 <= k <= n`.
pub fn binom(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

fn gcd_of_binomials(n: u64, range: std::ops::RangeInclusive<u64>) -> u64 {
    let g = range.fold(BigInt::zero(), |g, j| g.gcd(&binom(n, j as i64)));
    g.to_u64().expect("gcd of binomials is bounded by n")
}

/// `r_k = gcd(C(k+1, 1), ..., C(k+1, k))`. Equals `p` when `k + 1` is a power of the
/// prime `p`, and 1 otherwise.
pub fn r_k(k: u64) -> u64 {
    gcd_of_binomials(k + 1, 1..=k)
}

/// `d_k = gcd(C(r, 1), ..., C(r, k))`.
pub fn d_k(r: u64, k: u64) -> u64 {
    gcd_of_binomials(r, 1..=k)
}

/// `l_k = lcm{ i : 1 <= i <= k, i | r }`, so that `r / l_k = d_k(r, k)`.
pub fn l_k_formula(r: u64, k: u64) -> u64 {
    (1..=k).filter(|i| r.is_multiple_of(*i)).fold(1, |l, i| l.lcm(&i))
}

/// Remainder of `m` modulo 2, always 0 or 1.
pub fn epsilon(m: i64) -> u8 {
    m.rem_euclid(2) as u8
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `p` if `m = p^e` with `p` prime and `e >= 1`.
pub fn prime_power_base(m: u64) -> Option<u64> {
    if m < 2 {
        return None;
    }
    let p = (2..=m).find(|d| m.is_multiple_of(*d))?;
    let mut rest = m;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    (rest == 1).then_some(p)
}

/// All sequences of `len` non-negative integers summing to `total`, ascending
/// lexicographically.
pub fn weak_compositions(total: usize, len: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, remaining: usize, slots: usize, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in 0..=remaining {
            prefix.push(x);
            rec(prefix, remaining - x, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(&mut Vec::with_capacity(len), total, len, &mut out);
    out
}

/// The compositions indexing the summands `D(a_1, ..., a_{b+1-i})` of `P_i(a, b)`:
/// positive parts, sum `a + b`, first part in `[a, a + i]`. Returned in descending
/// lexicographic order, which is the block order used for all Hom-space bases.
pub fn resolution_compositions(a: usize, b: usize, i: usize) -> Result<Vec<Weight>> {
    if a < 1 {
        return Err(invalid(format!("a must be at least 1, got {a}")));
    }
    if i > b {
        return Err(invalid(format!("resolution degree i = {i} exceeds b = {b}")));
    }
    let len = b + 1 - i;
    let total = a + b;
    let mut out = Vec::new();
    for first in a..=(a + i).min(total) {
        let rest_total = total - first;
        let rest_len = len - 1;
        // positive parts: subtract one from each and enumerate weak compositions
        if rest_total < rest_len || (rest_len == 0 && rest_total != 0) {
            continue;
        }
        for tail in weak_compositions(rest_total - rest_len, rest_len) {
            let mut parts = Vec::with_capacity(len);
            parts.push(first);
            parts.extend(tail.into_iter().map(|x| x + 1));
            out.push(Weight(parts));
        }
    }
    out.sort_by(|x, y| y.cmp(x));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal_row(n: usize) -> Vec<BigInt> {
        let mut row = vec![BigInt::one()];
        for _ in 0..n {
            let mut next = vec![BigInt::one(); row.len() + 1];
            for j in 1..row.len() {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
        }
        row
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(6, 2), BigInt::from(15));
        for n in 0..10 {
            assert_eq!(binom(n, 0), BigInt::one());
        }
        assert_eq!(binom(30, 15), pascal_row(30)[15]);
        assert_eq!(binom(30, 15), BigInt::from(155_117_520u64));
        assert_eq!(binom(4, -1), BigInt::zero());
        assert_eq!(binom(4, 5), BigInt::zero());
        for n in 0..40u64 {
            let row = pascal_row(n as usize);
            for k in 0..=n {
                assert_eq!(binom(n, k as i64), row[k as usize]);
            }
        }
    }

    #[test]
    fn r_k_values() {
        assert_eq!(r_k(2), 3);
        assert_eq!(r_k(5), 1);
        assert_eq!(r_k(3), 2);
        for k in 1..=32u64 {
            let expected = prime_power_base(k + 1).unwrap_or(1);
            assert_eq!(r_k(k), expected, "k = {k}");
            assert_eq!(r_k(k), d_k(k + 1, k));
        }
    }

    #[test]
    fn d_k_and_l_k() {
        assert_eq!(d_k(6, 2), 3);
        assert_eq!(d_k(6, 1), 6);
        assert_eq!(d_k(12, 4), 1);
        assert_eq!(l_k_formula(12, 4), 12);
        assert_eq!(l_k_formula(6, 2), 2);
        assert_eq!(l_k_formula(5, 1), 1);
        for r in 2..=64u64 {
            for k in 1..r {
                assert_eq!(d_k(r, k), r / l_k_formula(r, k), "r = {r}, k = {k}");
                if k + 1 < r {
                    assert_eq!(d_k(r, k) % d_k(r, k + 1), 0);
                }
            }
        }
    }

    #[test]
    fn epsilon_is_non_negative() {
        assert_eq!(epsilon(4), 0);
        assert_eq!(epsilon(5), 1);
        assert_eq!(epsilon(-3), 1);
        assert_eq!(epsilon(-4), 0);
    }

    #[test]
    fn compositions_examples() {
        let w = |v: &[usize]| Weight(v.to_vec());
        assert_eq!(resolution_compositions(2, 3, 0).unwrap(), vec![w(&[2, 1, 1, 1])]);
        assert_eq!(
            resolution_compositions(2, 3, 1).unwrap(),
            vec![w(&[3, 1, 1]), w(&[2, 2, 1]), w(&[2, 1, 2])]
        );
        assert_eq!(resolution_compositions(2, 3, 3).unwrap(), vec![w(&[5])]);
        assert!(resolution_compositions(2, 3, 4).is_err());
        assert!(resolution_compositions(0, 3, 1).is_err());
    }

    fn brute_force_compositions(a: usize, b: usize, i: usize) -> Vec<Weight> {
        let len = b + 1 - i;
        let mut out: Vec<Weight> = weak_compositions(a + b, len)
            .into_iter()
            .filter(|c| c.iter().all(|&x| x >= 1) && c[0] >= a && c[0] <= a + i)
            .map(Weight)
            .collect();
        out.sort_by(|x, y| y.cmp(x));
        out
    }

    #[test]
    fn compositions_match_brute_force_and_recursion() {
        for a in 1..=4 {
            for b in 0..=6 {
                for i in 0..=b {
                    let got = resolution_compositions(a, b, i).unwrap();
                    assert_eq!(got, brute_force_compositions(a, b, i));
                    if i == 0 {
                        let mut expect = vec![a];
                        expect.extend(std::iter::repeat_n(1, b));
                        assert_eq!(got, vec![Weight(expect)]);
                    } else if b >= 1 {
                        // P_i(a,b) = P_{i-1}(a+1,b-1) ⊕ D(a) ⊗ P_i(1,b-1)
                        let upper: Vec<Weight> =
                            got.iter().filter(|w| w.0[0] > a).cloned().collect();
                        assert_eq!(upper, resolution_compositions(a + 1, b - 1, i - 1).unwrap());
                        let lower_len = got.len() - upper.len();
                        let tail = if i < b {
                            resolution_compositions(1, b - 1, i).unwrap().len()
                        } else {
                            0
                        };
                        assert_eq!(lower_len, tail);
                        // the a_1 > a summands come first
                        assert!(got[..upper.len()].iter().all(|w| w.0[0] > a));
                    }
                }
            }
        }
    }

    #[test]
    fn hook_shift() {
        let h = HookShape::new(2, 3).unwrap();
        assert_eq!(h.shift(2).unwrap(), HookShape::new(4, 1).unwrap());
        assert!(h.shift(4).is_err());
        assert!(HookShape::new(0, 2).is_err());
        assert_eq!(h.to_string(), "(2,1^3)");
    }

    #[test]
    fn weight_merge() {
        let w = Weight(vec![2, 1, 3]);
        assert_eq!(w.merge(1), Some(Weight(vec![3, 3])));
        assert_eq!(w.merge(2), Some(Weight(vec![2, 4])));
        assert_eq!(w.merge(3), None);
        assert_eq!(w.merge(0), None);
    }
}
