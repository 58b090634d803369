//! Enumeration of r×r Hermite normal forms with determinant Δ, the two
//! symmetry reductions on them, and the class counts H, H_op, H_≃.

use crate::equiv::canonical_hnf_key;
use crate::hnf::{hnf, HnfMatrix};
use crate::matrix::IntMatrix;
use crate::{Error, Result};
use num_bigint::BigUint;
use num_integer::gcd;
use std::collections::HashSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumMode {
    All,
    /// Only forms surviving the diagonal-sorting reduction (non-decreasing
    /// diagonal with a_ii <= gcd(a_{i,i+1}, a_{i+1,i+1})) and, for diagonal
    /// (1,…,1,Δ), the last-column normalization 0 <= v₁ <= … <= v_{r-1} <= Δ/2.
    OpReduced,
}

#[derive(Clone, Debug)]
pub struct HnfEnumConfig {
    pub delta: i64,
    pub r: usize,
    pub mode: EnumMode,
}

/// All ordered factorizations of delta into r positive factors, in
/// lexicographic order.
fn ordered_factorizations(delta: i64, r: usize) -> Vec<Vec<i64>> {
    fn rec(rest: i64, slots: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if slots == 1 {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for d in 1..=rest {
            if rest % d == 0 {
                prefix.push(d);
                rec(rest / d, slots - 1, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(delta, r, &mut Vec::new(), &mut out);
    out
}

/// Per-diagonal filling generator.
enum FillIter {
    /// Independent positions, row-major counter order (last position fastest).
    Odometer {
        diag: Vec<i64>,
        positions: Vec<(usize, usize)>,
        allowed: Vec<Vec<i64>>,
        state: Option<Vec<usize>>,
    },
    /// Non-decreasing last column capped at Δ/2, for diagonal (1,…,1,Δ).
    SortedTail { diag: Vec<i64>, cap: i64, state: Option<Vec<i64>> },
}

impl FillIter {
    fn build(diag: &[i64], fill: impl Fn(usize, usize) -> i64) -> HnfMatrix {
        let r = diag.len();
        let mut m = IntMatrix::zeros(r, r);
        for i in 0..r {
            m.set(i, i, diag[i]);
            for j in i + 1..r {
                m.set(i, j, fill(i, j));
            }
        }
        HnfMatrix::try_new(m).expect("generated filling violates normal form invariants")
    }
}

impl Iterator for FillIter {
    type Item = HnfMatrix;

    fn next(&mut self) -> Option<HnfMatrix> {
        match self {
            FillIter::Odometer { diag, positions, allowed, state } => {
                let cur = state.take()?;
                let out = FillIter::build(diag, |i, j| {
                    let p = positions.iter().position(|&q| q == (i, j)).unwrap();
                    allowed[p][cur[p]]
                });
                // advance the counter, last position fastest
                let mut next = cur;
                for p in (0..positions.len()).rev() {
                    next[p] += 1;
                    if next[p] < allowed[p].len() {
                        *state = Some(next);
                        return Some(out);
                    }
                    next[p] = 0;
                }
                // wrapped around: cur was the last one (state stays None)
                Some(out)
            }
            FillIter::SortedTail { diag, cap, state } => {
                let cur = state.take()?;
                let r = diag.len();
                let out = FillIter::build(diag, |i, j| if j == r - 1 { cur[i] } else { 0 });
                let mut next = cur;
                for p in (0..next.len()).rev() {
                    if next[p] < *cap {
                        let v = next[p] + 1;
                        for q in next.iter_mut().skip(p) {
                            *q = v;
                        }
                        *state = Some(next);
                        return Some(out);
                    }
                }
                Some(out)
            }
        }
    }
}

pub struct HnfStream {
    mode: EnumMode,
    delta: i64,
    diags: std::vec::IntoIter<Vec<i64>>,
    current: Option<FillIter>,
}

impl HnfStream {
    fn fill_iter(&self, diag: Vec<i64>) -> FillIter {
        let r = diag.len();
        let is_unit_tail = r >= 1 && diag[..r - 1].iter().all(|&d| d == 1);
        if self.mode == EnumMode::OpReduced && is_unit_tail && r >= 2 {
            return FillIter::SortedTail {
                cap: self.delta / 2,
                state: Some(vec![0; r - 1]),
                diag,
            };
        }
        let mut positions = Vec::new();
        let mut allowed = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                let vals: Vec<i64> = (0..diag[j])
                    .filter(|&v| {
                        self.mode == EnumMode::All
                            || j != i + 1
                            || gcd(v, diag[j]) >= diag[i]
                    })
                    .collect();
                positions.push((i, j));
                allowed.push(vals);
            }
        }
        let state = if allowed.iter().all(|a| !a.is_empty()) {
            Some(vec![0; positions.len()])
        } else {
            None
        };
        FillIter::Odometer { diag, positions, allowed, state }
    }
}

impl Iterator for HnfStream {
    type Item = HnfMatrix;

    fn next(&mut self) -> Option<HnfMatrix> {
        loop {
            if let Some(cur) = &mut self.current {
                if let Some(m) = cur.next() {
                    return Some(m);
                }
            }
            let diag = self.diags.next()?;
            self.current = Some(self.fill_iter(diag));
        }
    }
}

/// Stream every r×r Hermite normal form of determinant Δ (each exactly once,
/// deterministic order: diagonals lexicographically, fillings in row-major
/// counter order), or only the reduction survivors in op-reduced mode.
pub fn enumerate_hnf(cfg: &HnfEnumConfig) -> Result<HnfStream> {
    if cfg.delta < 1 {
        return Err(Error::InvalidParam("delta must be positive".into()));
    }
    if cfg.r < 1 {
        return Err(Error::InvalidParam("rank must be at least 1".into()));
    }
    let mut diags = ordered_factorizations(cfg.delta, cfg.r);
    if cfg.mode == EnumMode::OpReduced {
        diags.retain(|d| d.windows(2).all(|w| w[0] <= w[1]));
    }
    Ok(HnfStream {
        mode: cfg.mode,
        delta: cfg.delta,
        diags: diags.into_iter(),
        current: None,
    })
}

/// Number of r×r Hermite normal forms of determinant Δ, via the closed
/// formula over the prime decomposition Δ = ∏ p_i^{e_i}:
/// ∏_i ∏_{j=1}^{e_i} (p_i^{j+r-1} − 1)/(p_i^j − 1).
/// The division is exact only at the level of the whole per-prime product,
/// which is where it is performed.
pub fn count_hnf_closed_form(delta: i64, r: usize) -> Result<u128> {
    if delta < 1 || r < 1 {
        return Err(Error::InvalidParam("delta and r must be positive".into()));
    }
    let mut total = BigUint::from(1u32);
    let mut rest = delta as u64;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            total *= per_prime_factor(p, e, r)?;
        }
        p += 1;
    }
    if rest > 1 {
        total *= per_prime_factor(rest, 1, r)?;
    }
    u128::try_from(&total).map_err(|_| Error::Overflow)
}

fn per_prime_factor(p: u64, e: u32, r: usize) -> Result<BigUint> {
    let p = BigUint::from(p);
    let one = BigUint::from(1u32);
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for j in 1..=e {
        num *= p.pow(j + r as u32 - 1) - &one;
        den *= p.pow(j) - &one;
    }
    if &num % &den != BigUint::ZERO {
        return Err(Error::VerificationFailed(
            "per-prime product in the normal-form count is not divisible".into(),
        ));
    }
    Ok(num / den)
}

/// Sort the diagonal by repeated adjacent swaps: while some position has
/// gcd(a_{i,i+1}, a_{i+1,i+1}) < a_ii, swap columns i, i+1 and renormalize.
/// Each swap strictly lowers the diagonal lexicographically, and the result
/// is equivalent to the input (the moves are column swaps plus a
/// left-unimodular renormalization).
pub fn reduce_op1(a: &HnfMatrix) -> Result<HnfMatrix> {
    let mut m = a.matrix().clone();
    let r = m.rows();
    loop {
        let bad = (0..r.saturating_sub(1))
            .find(|&i| gcd(m.get(i, i + 1), m.get(i + 1, i + 1)) < m.get(i, i));
        let Some(i) = bad else {
            return HnfMatrix::try_new(m);
        };
        m.swap_cols(i, i + 1);
        m = hnf(&m)?.1.into_matrix();
    }
}

/// Normalize the last column of a form with diagonal (1,…,1,Δ) to
/// 0 <= v₁ <= … <= v_{r-1} <= Δ/2 (entries above Δ/2 are reflected to Δ−v,
/// then sorted). Output is equivalent to the input.
pub fn reduce_op2(a: &HnfMatrix) -> Result<HnfMatrix> {
    let r = a.dim();
    let m = a.matrix();
    let delta = m.get(r - 1, r - 1);
    if (0..r - 1).any(|i| m.get(i, i) != 1) {
        return Err(Error::InvalidParam(
            "last-column normalization needs diagonal (1,…,1,Δ)".into(),
        ));
    }
    let mut v: Vec<i64> = (0..r - 1)
        .map(|i| {
            let x = m.get(i, r - 1);
            if 2 * x > delta {
                delta - x
            } else {
                x
            }
        })
        .collect();
    v.sort_unstable();
    let mut out = IntMatrix::identity(r);
    out.set(r - 1, r - 1, delta);
    for (i, &x) in v.iter().enumerate() {
        out.set(i, r - 1, x);
    }
    HnfMatrix::try_new(out)
}

/// Number of equivalence classes among the Hermite normal forms of
/// determinant Δ, computed over the op-reduced survivors (every class has at
/// least one survivor) by grouping on the canonical orbit key.
pub fn count_inequivalent(delta: i64, r: usize, cap: usize) -> Result<usize> {
    let cfg = HnfEnumConfig { delta, r, mode: EnumMode::OpReduced };
    let mut keys = HashSet::new();
    for (count, h) in enumerate_hnf(&cfg)?.enumerate() {
        if count >= cap {
            return Err(Error::ResourceCap {
                detail: format!("more than {cap} reduced normal forms at delta={delta}, r={r}"),
            });
        }
        keys.insert(canonical_hnf_key(h.matrix())?);
    }
    Ok(keys.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::equivalent;

    fn stream(delta: i64, r: usize, mode: EnumMode) -> Vec<HnfMatrix> {
        enumerate_hnf(&HnfEnumConfig { delta, r, mode }).unwrap().collect()
    }

    #[test]
    fn determinant_one_is_identity_only() {
        let all = stream(1, 3, EnumMode::All);
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].matrix(), &IntMatrix::identity(3));
    }

    #[test]
    fn small_counts_match_closed_form() {
        for delta in 1..=10 {
            for r in 1..=3 {
                let n = stream(delta, r, EnumMode::All).len() as u128;
                assert_eq!(n, count_hnf_closed_form(delta, r).unwrap(), "delta={delta} r={r}");
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(count_hnf_closed_form(13, 4).unwrap(), 2380);
        assert_eq!(count_hnf_closed_form(12, 4).unwrap(), 6200);
        assert_eq!(count_hnf_closed_form(1, 4).unwrap(), 1);
        // per-prime product with a non-integral inner term: (2^5-1)/(2^2-1)
        assert_eq!(count_hnf_closed_form(4, 4).unwrap(), 155);
    }

    #[test]
    fn op_reduction_counts() {
        assert_eq!(stream(13, 4, EnumMode::OpReduced).len(), 84);
        assert_eq!(stream(13, 4, EnumMode::All).len(), 2380);
    }

    #[test]
    fn every_emitted_matrix_has_the_right_determinant() {
        for h in stream(8, 3, EnumMode::All) {
            assert_eq!(h.det().unwrap(), 8);
        }
        let op = stream(8, 3, EnumMode::OpReduced);
        let all: HashSet<Vec<i64>> = stream(8, 3, EnumMode::All)
            .into_iter()
            .map(|h| h.matrix().row(0).to_vec())
            .collect();
        // op-reduced is a sublist of the full list
        for h in &op {
            assert!(all.contains(&h.matrix().row(0).to_vec()) || h.dim() != 3);
        }
    }

    #[test]
    fn sort_reduction_worked_example() {
        // gcd(a_12, a_22) = gcd(0,1) = 1 < 7 forces a swap; hand reduction of the
        // swapped matrix gives diag (1,7)
        let a = HnfMatrix::try_new(IntMatrix::from_rows(&[vec![7, 0], vec![0, 1]]).unwrap()).unwrap();
        let b = reduce_op1(&a).unwrap();
        assert_eq!(b.diag(), vec![1, 7]);
        assert!(equivalent(a.matrix(), b.matrix()).unwrap());

        // nonzero off-diagonal case: swap of [[2,1],[0,4]] row-reduces to [[1,2],[0,8]]
        let a = HnfMatrix::try_new(IntMatrix::from_rows(&[vec![2, 1], vec![0, 4]]).unwrap()).unwrap();
        let b = reduce_op1(&a).unwrap();
        assert_eq!(b.diag(), vec![1, 8]);
        assert_eq!(b.matrix().get(0, 1), 2);
        assert!(equivalent(a.matrix(), b.matrix()).unwrap());
    }

    #[test]
    fn sort_reduction_keeps_sorted_input() {
        let a = HnfMatrix::try_new(IntMatrix::from_rows(&[
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 6],
        ])
        .unwrap())
        .unwrap();
        assert_eq!(reduce_op1(&a).unwrap(), a);
    }

    #[test]
    fn last_column_normalization() {
        let a = HnfMatrix::try_new(IntMatrix::from_rows(&[
            vec![1, 0, 5],
            vec![0, 1, 6],
            vec![0, 0, 7],
        ])
        .unwrap())
        .unwrap();
        let b = reduce_op2(&a).unwrap();
        assert_eq!(b.matrix().col(2), vec![1, 2, 7]);
        assert!(equivalent(a.matrix(), b.matrix()).unwrap());

        let c = HnfMatrix::try_new(IntMatrix::from_rows(&[vec![1, 7], vec![0, 10]]).unwrap()).unwrap();
        assert_eq!(reduce_op2(&c).unwrap().matrix().col(1), vec![3, 10]);
    }

    #[test]
    fn class_count_examples() {
        assert_eq!(count_inequivalent(13, 4, 10_000).unwrap(), 37);
        assert_eq!(count_inequivalent(1, 3, 10_000).unwrap(), 1);
    }

    #[test]
    fn class_count_cap() {
        assert!(matches!(
            count_inequivalent(12, 4, 10),
            Err(Error::ResourceCap { .. })
        ));
    }
}
