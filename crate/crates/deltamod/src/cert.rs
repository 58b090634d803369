//! Predicates for Δ-(sub)modularity, genericity, total genericity and
//! Δ-boundedness, plus the independent certificate report used to re-verify
//! every witness the search produces.

use crate::matrix::IntMatrix;
use crate::{Error, Result};
use std::collections::HashSet;

/// Column subsets of {0..n-1} of size k in colexicographic order. Violations
/// tend to sit among nearby columns, so early-exit callers see them fast.
pub(crate) struct ColexCombinations {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl ColexCombinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        let cur = if k <= n && k > 0 { Some((0..k).collect()) } else { None };
        ColexCombinations { n, cur }
    }
}

impl Iterator for ColexCombinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.cur.take()?;
        let k = cur.len();
        let mut next = cur.clone();
        let mut i = 0;
        loop {
            if i == k {
                // cur was the last subset
                self.cur = None;
                break;
            }
            let limit = if i + 1 < k { next[i + 1] } else { self.n };
            if next[i] + 1 < limit {
                next[i] += 1;
                for (j, slot) in next.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                self.cur = Some(next);
                break;
            }
            i += 1;
        }
        Some(cur)
    }
}

fn pow_i128(base: i64, exp: usize) -> Result<i128> {
    let mut acc: i128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as i128).ok_or(Error::Overflow)?;
    }
    Ok(acc)
}

fn require_full_row_rank(a: &IntMatrix) -> Result<()> {
    if a.rank()? != a.rows() {
        return Err(Error::RankDeficient);
    }
    Ok(())
}

/// True iff every rank×rank (= rows×rows) minor is nonzero.
pub fn is_generic(a: &IntMatrix) -> Result<bool> {
    require_full_row_rank(a)?;
    let r = a.rows();
    let rows: Vec<usize> = (0..r).collect();
    for cols in ColexCombinations::new(a.cols(), r) {
        if a.minor(&rows, &cols)? == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff the maximum absolute top minor equals `delta` exactly.
pub fn is_delta_modular(a: &IntMatrix, delta: i64) -> Result<bool> {
    if delta < 1 {
        return Err(Error::InvalidParam("delta must be positive".into()));
    }
    require_full_row_rank(a)?;
    let r = a.rows();
    let rows: Vec<usize> = (0..r).collect();
    let mut max_abs: i128 = 0;
    for cols in ColexCombinations::new(a.cols(), r) {
        let m = a.minor(&rows, &cols)?.abs();
        if m > delta as i128 {
            return Ok(false); // submodularity already lost
        }
        max_abs = max_abs.max(m);
    }
    Ok(max_abs == delta as i128)
}

/// True iff every m×m minor, 1 <= m <= rows, is nonzero (in particular all
/// entries are nonzero).
pub fn is_totally_generic(a: &IntMatrix) -> Result<bool> {
    let top = a.rows().min(a.cols());
    for m in 1..=top {
        for rows in ColexCombinations::new(a.rows(), m) {
            for cols in ColexCombinations::new(a.cols(), m) {
                if a.minor(&rows, &cols)? == 0 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// True iff every m×m minor has absolute value at most delta^m.
pub fn is_delta_bound(a: &IntMatrix, delta: i64) -> Result<bool> {
    if delta < 1 {
        return Err(Error::InvalidParam("delta must be positive".into()));
    }
    let top = a.rows().min(a.cols());
    for m in 1..=top {
        let cap = pow_i128(delta, m)?;
        for rows in ColexCombinations::new(a.rows(), m) {
            for cols in ColexCombinations::new(a.cols(), m) {
                if a.minor(&rows, &cols)?.abs() > cap {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Verification report over the rank-sized minors of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertReport {
    pub rank: usize,
    pub max_abs_top_minor: i128,
    pub zero_top_minor_count: u64,
    pub is_generic: bool,
    pub is_delta_submodular: bool,
    pub is_delta_modular: bool,
    pub columns_distinct: bool,
}

/// Full report; rank-deficient inputs are reported, never rejected. The top
/// minors are the rank(A)-sized ones (over all row and column selections of
/// that size; at full row rank that is the usual sweep over column subsets).
pub fn certify(a: &IntMatrix, delta: i64) -> Result<CertReport> {
    if delta < 1 {
        return Err(Error::InvalidParam("delta must be positive".into()));
    }
    let rank = a.rank()?;
    let mut max_abs: i128 = 0;
    let mut zero_count: u64 = 0;
    if rank > 0 {
        for rows in ColexCombinations::new(a.rows(), rank) {
            for cols in ColexCombinations::new(a.cols(), rank) {
                let m = a.minor(&rows, &cols)?.abs();
                if m == 0 {
                    zero_count += 1;
                } else {
                    max_abs = max_abs.max(m);
                }
            }
        }
    }
    let mut seen = HashSet::new();
    let columns_distinct = (0..a.cols()).all(|j| seen.insert(a.col(j)));
    let is_delta_submodular = max_abs <= delta as i128;
    Ok(CertReport {
        rank,
        max_abs_top_minor: max_abs,
        zero_top_minor_count: zero_count,
        is_generic: rank == a.rows() && zero_count == 0,
        is_delta_submodular,
        is_delta_modular: is_delta_submodular && max_abs == delta as i128,
        columns_distinct,
    })
}
