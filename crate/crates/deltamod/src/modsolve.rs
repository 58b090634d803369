//! Solutions of A·x ≡ 0 (mod Δ) for a normal form A of determinant Δ, and
//! the lift of each residue class to its relevant integer representatives.

use crate::hnf::HnfMatrix;
use crate::snf::snf;
use crate::{Error, Result};
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "generic")]
    Generic,
    #[serde(rename = "nonGeneric")]
    NonGeneric,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSolutionSet {
    pub delta: i64,
    pub r: usize,
    /// Exactly Δ vectors with entries in {0,…,Δ−1}, each solving A·x ≡ 0 (mod Δ).
    pub solutions: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateColumns {
    pub mode: Mode,
    pub columns: Vec<Vec<i64>>,
}

/// All solutions of A·x ≡ 0 (mod Δ), via P·A·Q = diag(α₁,…,α_r): in y-space
/// the congruence splits per coordinate into α_i·y_i ≡ 0, whose solutions are
/// y_i = m·(Δ/α_i) for 0 ≤ m < α_i (α_i divides Δ), and x = Q·y mod Δ. The
/// map y ↦ x is injective mod Δ, so exactly ∏α_i = Δ distinct solutions.
pub fn solve_mod(a: &HnfMatrix, delta: i64) -> Result<ResidueSolutionSet> {
    if delta < 1 {
        return Err(Error::InvalidParam("delta must be positive".into()));
    }
    if a.det()? != delta as i128 {
        return Err(Error::InvalidParam(format!(
            "determinant {} does not match delta {delta}",
            a.det()?
        )));
    }
    let dec = snf(a.matrix())?;
    let r = a.dim();
    let steps: Vec<i64> = dec.alphas.iter().map(|&al| delta / al).collect();
    let mut solutions = Vec::with_capacity(delta as usize);
    let mut m = vec![0i64; r];
    'odometer: loop {
        let x: Vec<i64> = (0..r)
            .map(|i| {
                let mut acc: i128 = 0;
                for j in 0..r {
                    acc += dec.q.get(i, j) as i128 * (m[j] * steps[j]) as i128;
                }
                acc.rem_euclid(delta as i128) as i64
            })
            .collect();
        debug_assert!((0..r).all(|i| {
            let row: i128 = (0..r)
                .map(|j| a.matrix().get(i, j) as i128 * x[j] as i128)
                .sum();
            row % delta as i128 == 0
        }));
        solutions.push(x);
        for k in (0..r).rev() {
            m[k] += 1;
            if m[k] < dec.alphas[k] {
                continue 'odometer;
            }
            m[k] = 0;
        }
        break;
    }
    debug_assert_eq!(solutions.len(), delta as usize);
    Ok(ResidueSolutionSet { delta, r, solutions })
}

/// Integer representatives of a residue-class solution, per-entry:
/// 0 lifts to {Δ, −Δ} and k ≠ 0 lifts to {k, k−Δ}. Generic mode keeps the
/// 2^{r−1} sign patterns whose first entry is positive. Non-generic mode
/// widens the zero option to {0, Δ, −Δ}, drops the zero vector, flips each
/// vector so its first nonzero entry is positive, and deduplicates.
pub fn lift_representatives(x: &[i64], delta: i64, mode: Mode) -> Result<Vec<Vec<i64>>> {
    if delta < 1 {
        return Err(Error::InvalidParam("delta must be positive".into()));
    }
    if x.iter().any(|&k| k < 0 || k >= delta) {
        return Err(Error::InvalidParam("residue entry out of range".into()));
    }
    let options: Vec<Vec<i64>> = x
        .iter()
        .enumerate()
        .map(|(i, &k)| match mode {
            Mode::Generic if i == 0 => vec![if k == 0 { delta } else { k }],
            Mode::Generic if k == 0 => vec![delta, -delta],
            Mode::Generic => vec![k, k - delta],
            Mode::NonGeneric if k == 0 => vec![0, delta, -delta],
            Mode::NonGeneric => vec![k, k - delta],
        })
        .collect();
    let product = options.into_iter().multi_cartesian_product();
    match mode {
        Mode::Generic => Ok(product.collect()),
        Mode::NonGeneric => {
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            for mut v in product {
                let Some(lead) = v.iter().position(|&e| e != 0) else {
                    continue;
                };
                if v[lead] < 0 {
                    for e in &mut v {
                        *e = -*e;
                    }
                }
                if seen.insert(v.clone()) {
                    out.push(v);
                }
            }
            Ok(out)
        }
    }
}

/// The unrestricted non-generic universe: same per-entry options with the
/// zero option kept wide ({0, Δ, −Δ}), no sign normalization, and the
/// all-zero vector kept (it lifts to the zero column, which the unrestricted
/// count includes). Distinct residues lift to disjoint vector sets, so no
/// cross-residue deduplication is needed.
pub fn lift_representatives_unrestricted(x: &[i64], delta: i64) -> Result<Vec<Vec<i64>>> {
    if delta < 1 {
        return Err(Error::InvalidParam("delta must be positive".into()));
    }
    if x.iter().any(|&k| k < 0 || k >= delta) {
        return Err(Error::InvalidParam("residue entry out of range".into()));
    }
    let options: Vec<Vec<i64>> = x
        .iter()
        .map(|&k| if k == 0 { vec![0, delta, -delta] } else { vec![k, k - delta] })
        .collect();
    Ok(options.into_iter().multi_cartesian_product().collect())
}

/// Drop every column that is a multiple of a shorter parallel one; among
/// parallel columns only the smallest multiple of the common primitive
/// direction can matter (scaling a column down keeps all minors nonzero and
/// shrinks their absolute values).
pub fn prune_parallel(cands: CandidateColumns) -> Result<CandidateColumns> {
    if cands.mode != Mode::Generic {
        return Err(Error::InvalidParam(
            "parallel pruning applies to the generic universe only".into(),
        ));
    }
    let mut shortest: std::collections::HashMap<Vec<i64>, i64> = std::collections::HashMap::new();
    let mut dirs = Vec::with_capacity(cands.columns.len());
    for v in &cands.columns {
        let g = v.iter().fold(0i64, |acc, &e| num_integer::gcd(acc, e.abs()));
        let dir: Vec<i64> = v.iter().map(|&e| e / g).collect();
        let best = shortest.entry(dir.clone()).or_insert(g);
        if g < *best {
            *best = g;
        }
        dirs.push((dir, g));
    }
    let columns = cands
        .columns
        .into_iter()
        .zip(dirs)
        .filter(|(_, (dir, g))| shortest[dir] == *g)
        .map(|(v, _)| v)
        .collect();
    Ok(CandidateColumns { mode: Mode::Generic, columns })
}

/// Full candidate universe for one normal form: solve, lift every residue,
/// and normalize the list for the requested mode (parallel pruning in
/// generic mode, global deduplication in non-generic mode).
pub fn candidate_columns(a: &HnfMatrix, delta: i64, mode: Mode) -> Result<CandidateColumns> {
    let residues = solve_mod(a, delta)?;
    let mut columns = Vec::new();
    for x in &residues.solutions {
        columns.extend(lift_representatives(x, delta, mode)?);
    }
    match mode {
        Mode::Generic => prune_parallel(CandidateColumns { mode, columns }),
        Mode::NonGeneric => {
            let mut seen = HashSet::new();
            columns.retain(|v| seen.insert(v.clone()));
            Ok(CandidateColumns { mode, columns })
        }
    }
}
