//! The matrix equivalence relation A₂ = S·A₁·D·P (unimodular S, ±1-diagonal D,
//! column permutation P) and a canonical orbit key for it.

use crate::hnf::hnf;
use crate::matrix::IntMatrix;
use crate::{Error, Result};
use itertools::Itertools;

fn signed_permuted(a: &IntMatrix, perm: &[usize], mask: u32) -> IntMatrix {
    let n = a.rows();
    let mut b = IntMatrix::zeros(n, n);
    for (k, &src) in perm.iter().enumerate() {
        let sign = if mask & (1 << k) != 0 { -1 } else { 1 };
        for i in 0..n {
            b.set(i, k, sign * a.get(i, src));
        }
    }
    b
}

/// Decide A₂ = S·A₁·D·P by brute force over the r!·2^r signed column
/// permutations; the left-unimodular factor S is absorbed by HNF uniqueness.
/// Only square nonsingular inputs are supported (the only case the
/// enumeration pipeline needs).
pub fn equivalent(a1: &IntMatrix, a2: &IntMatrix) -> Result<bool> {
    if a1.rows() != a2.rows() || a1.cols() != a2.cols() {
        return Err(Error::Shape("equivalence requires equal shapes".into()));
    }
    if !a1.is_square() {
        return Err(Error::Shape("the decision procedure needs square matrices".into()));
    }
    if a1.det()? == 0 || a2.det()? == 0 {
        return Err(Error::Singular);
    }
    if a1.det()?.abs() != a2.det()?.abs() {
        return Ok(false);
    }
    let n = a1.rows();
    let target = hnf(a2)?.1;
    for perm in (0..n).permutations(n) {
        for mask in 0..(1u32 << n) {
            let b = signed_permuted(a1, &perm, mask);
            if hnf(&b)?.1 == target {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Canonical key of the equivalence class of a square nonsingular matrix:
/// the lexicographically smallest hnf(A·D·P).H over all signed column
/// permutations (D, P). Signed permutations form a group and HNF absorbs any
/// left-unimodular factor, so two matrices are equivalent iff their keys are
/// equal. This makes class counting linear in the list instead of quadratic.
pub fn canonical_hnf_key(a: &IntMatrix) -> Result<Vec<i64>> {
    if !a.is_square() || a.det()? == 0 {
        return Err(Error::Shape("canonical key needs a square nonsingular matrix".into()));
    }
    let n = a.rows();
    let mut best: Option<Vec<i64>> = None;
    for perm in (0..n).permutations(n) {
        for mask in 0..(1u32 << n) {
            let b = signed_permuted(a, &perm, mask);
            let h = hnf(&b)?.1;
            let key: Vec<i64> = (0..n).flat_map(|i| h.matrix().row(i).to_vec()).collect();
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    Ok(best.expect("orbit is nonempty"))
}
