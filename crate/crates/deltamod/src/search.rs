//! End-to-end computation of g(Δ,r) and h(Δ,r): enumerate the op-reduced
//! normal forms, build each one's candidate universe, run the exact clique
//! search, and assemble the witness D = (A | A·C/Δ) from the best instance.

use crate::bounds::bound_report;
use crate::cert::certify;
use crate::clique::{max_clique_graph, max_hyperclique, CliqueInstance, SearchLimits};
use crate::hnf::HnfMatrix;
use crate::hnfspace::{enumerate_hnf, EnumMode, HnfEnumConfig};
use crate::matrix::IntMatrix;
use crate::modsolve::{
    candidate_columns, lift_representatives_unrestricted, solve_mod, CandidateColumns, Mode,
};
use crate::textio::witness_field;
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Never pass cross-instance clique hints, so reruns and any parallel
    /// schedule produce byte-identical witnesses. Off = benchmark mode.
    pub deterministic: bool,
    /// Per-clique-search node limit.
    pub node_cap: Option<u64>,
    /// Per-clique-search wall-clock limit.
    pub wall_budget: Option<Duration>,
    /// h-mode only: search the unrestricted candidate universe (zero vector
    /// and both signs of every column kept) instead of the normalized one.
    /// Same reported value, much larger search; useful as a cross-check.
    pub allow_negations: bool,
    /// Run the outer normal-form loop on a thread pool.
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            deterministic: true,
            node_cap: Some(1_000_000_000),
            wall_budget: None,
            allow_negations: false,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComputationResult {
    pub delta: i64,
    pub r: usize,
    pub mode: Mode,
    /// g(Δ,r) or h(Δ,r): r plus the best clique size.
    pub value: usize,
    /// r×value matrix that attains the value, re-certified before return.
    pub witness: IntMatrix,
    /// Normal form whose instance produced the winning clique; absent for
    /// the brute-force oracle, which uses no normal-form theory.
    pub source_hnf: Option<HnfMatrix>,
    pub hnfs_processed: u64,
    /// Wall-clock time; excluded from serialization so cached results are
    /// byte-stable.
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Computes g(Δ,r): the most pairwise-distinct columns a generic Δ-modular
/// rank-r matrix can have.
pub fn compute_g(delta: i64, r: usize, options: &SearchOptions) -> Result<ComputationResult> {
    compute_core(delta, r, Mode::Generic, options)
}

/// Computes h(Δ,r): the non-generic variant, over the restricted candidate
/// universe (no zero column, no ±pairs) unless options.allow_negations.
/// h counts distinct columns with the zero column and ±pairs allowed. A
/// maximal such matrix is {0} ∪ S ∪ −S for a maximal matrix S from the
/// restricted class (no zero column, no ±pairs): negating columns and
/// appending zero preserve Δ-modularity, distinctness and rank, and the
/// reverse direction strips zero and keeps one sign per pair. The default
/// therefore searches the half-sized restricted universe and reports
/// 2·(r+L)+1; with allow_negations the universe is left unrestricted (zero
/// vector and both signs kept) and r+L is the value directly. Both roads
/// give h, the second much more slowly.
pub fn compute_h(delta: i64, r: usize, options: &SearchOptions) -> Result<ComputationResult> {
    compute_core(delta, r, Mode::NonGeneric, options)
}

/// True for +Δ·e_j. Its witness column A·(Δe_j)/Δ duplicates the j-th column
/// of A, so it can never extend the distinct-column count and is dropped
/// from the h-mode universe. (−Δ·e_j stays in the unrestricted universe: it
/// contributes the legitimately distinct column −a_j.)
fn is_delta_unit(v: &[i64], delta: i64) -> bool {
    v.iter().filter(|&&e| e == delta).count() == 1 && v.iter().all(|&e| e == 0 || e == delta)
}

fn h_universe(a: &HnfMatrix, delta: i64, allow_negations: bool) -> Result<CandidateColumns> {
    let mut cands = if allow_negations {
        let residues = solve_mod(a, delta)?;
        let mut columns = Vec::new();
        for x in &residues.solutions {
            columns.extend(lift_representatives_unrestricted(x, delta)?);
        }
        CandidateColumns { mode: Mode::NonGeneric, columns }
    } else {
        candidate_columns(a, delta, Mode::NonGeneric)?
    };
    cands.columns.retain(|v| !is_delta_unit(v, delta));
    Ok(cands)
}

/// (D | −D | 0): the expansion that turns a restricted h-witness into the
/// unrestricted one actually counted by h.
fn expand_h_witness(d: &IntMatrix) -> Result<IntMatrix> {
    let mut cols = d.columns();
    for j in 0..d.cols() {
        cols.push(d.col(j).iter().map(|&x| -x).collect());
    }
    cols.push(vec![0; d.rows()]);
    IntMatrix::from_cols(&cols)
}

fn compute_core(delta: i64, r: usize, mode: Mode, options: &SearchOptions) -> Result<ComputationResult> {
    if delta < 1 {
        return Err(Error::InvalidParam("delta must be positive".into()));
    }
    if r < 2 {
        return Err(Error::InvalidParam("rank must be at least 2".into()));
    }
    let start = Instant::now();
    let cfg = HnfEnumConfig { delta, r, mode: EnumMode::OpReduced };
    let hnfs: Vec<HnfMatrix> = enumerate_hnf(&cfg)?.collect();
    let shared_best = AtomicUsize::new(0);
    let limits = SearchLimits { node_cap: options.node_cap, wall_budget: options.wall_budget };

    let run_one = |(idx, a): (usize, &HnfMatrix)| -> Result<(usize, usize, Vec<Vec<i64>>)> {
        let cands = match mode {
            Mode::Generic => candidate_columns(a, delta, Mode::Generic)?,
            Mode::NonGeneric => h_universe(a, delta, options.allow_negations)?,
        };
        let hint = if options.deterministic { 0 } else { shared_best.load(Ordering::Relaxed) };
        let inst = CliqueInstance::new(cands, delta, r, hint)?;
        let found = if r == 2 {
            max_clique_graph(&inst, &limits)
        } else {
            max_hyperclique(&inst, &limits)
        }
        .map_err(|e| match e {
            Error::ResourceCap { detail } => Error::ResourceCap {
                detail: format!("delta={delta} r={r}, normal form #{idx}: {detail}"),
            },
            other => other,
        })?;
        if !options.deterministic {
            shared_best.fetch_max(found.size, Ordering::Relaxed);
        }
        let cols = found
            .members
            .iter()
            .map(|&i| inst.columns.columns[i].clone())
            .collect();
        Ok((found.size, idx, cols))
    };

    let per_hnf: Vec<(usize, usize, Vec<Vec<i64>>)> = if options.parallel {
        hnfs.par_iter().enumerate().map(run_one).collect::<Result<_>>()?
    } else {
        hnfs.iter().enumerate().map(run_one).collect::<Result<_>>()?
    };
    let (best_l, best_idx, best_cols) = per_hnf
        .into_iter()
        .max_by_key(|&(l, idx, _)| (l, std::cmp::Reverse(idx)))
        .expect("at least one normal form exists for every delta >= 1");

    let source = &hnfs[best_idx];
    let mut witness = assemble_witness(source, &best_cols, delta)?;
    let mut value = r + best_l;
    if mode == Mode::NonGeneric && !options.allow_negations {
        witness = expand_h_witness(&witness)?;
        value = 2 * value + 1;
    }
    let rep = certify(&witness, delta)?;
    let sound = match mode {
        Mode::Generic => rep.is_generic && rep.is_delta_modular && rep.columns_distinct,
        Mode::NonGeneric => rep.is_delta_modular && rep.columns_distinct,
    };
    if !sound || witness.cols() != value {
        return Err(Error::VerificationFailed(format!(
            "witness for delta={delta} r={r} failed re-certification: {rep:?}"
        )));
    }
    Ok(ComputationResult {
        delta,
        r,
        mode,
        value,
        witness,
        source_hnf: Some(source.clone()),
        hnfs_processed: hnfs.len() as u64,
        elapsed: start.elapsed(),
    })
}

/// D = (A | A·C/Δ). Every clique member c satisfies A·c ≡ 0 (mod Δ), so the
/// division must be exact; a nonzero remainder is an internal bug, reported
/// as such rather than truncated.
fn assemble_witness(a: &HnfMatrix, member_cols: &[Vec<i64>], delta: i64) -> Result<IntMatrix> {
    if member_cols.is_empty() {
        return Err(Error::VerificationFailed(
            "clique search returned no members for the winning instance".into(),
        ));
    }
    let c = IntMatrix::from_cols(member_cols)?;
    let prod = a.matrix().mul(&c)?;
    let mut scaled = IntMatrix::zeros(prod.rows(), prod.cols());
    for i in 0..prod.rows() {
        for j in 0..prod.cols() {
            let e = prod.get(i, j);
            if e % delta != 0 {
                return Err(Error::VerificationFailed(
                    "A·C has an entry not divisible by delta".into(),
                ));
            }
            scaled.set(i, j, e / delta);
        }
    }
    a.matrix().hstack(&scaled)
}

/// Brute-force g(Δ,2) for Δ ≤ 3, independent of all normal-form machinery:
/// maximize |S| over sign-normalized nonzero columns in [−Δ,Δ]² subject to
/// every 2×2 minor being nonzero with absolute value ≤ Δ and some minor
/// attaining Δ.
pub fn oracle_g(delta: i64, r: usize) -> Result<ComputationResult> {
    if r != 2 {
        return Err(Error::InvalidParam("the brute-force oracle handles r = 2 only".into()));
    }
    if !(1..=3).contains(&delta) {
        return Err(Error::InvalidParam("the brute-force oracle handles delta <= 3".into()));
    }
    let start = Instant::now();
    let mut universe: Vec<Vec<i64>> = Vec::new();
    for a in -delta..=delta {
        for b in -delta..=delta {
            if (a, b) == (0, 0) {
                continue;
            }
            let lead = if a != 0 { a } else { b };
            if lead > 0 {
                universe.push(vec![a, b]);
            }
        }
    }
    let n = universe.len();
    let minor = |i: usize, j: usize| -> i64 {
        universe[i][0] * universe[j][1] - universe[i][1] * universe[j][0]
    };
    let compatible = |i: usize, j: usize| -> bool {
        let d = minor(i, j).abs();
        d != 0 && d <= delta
    };

    fn extend(
        best: &mut Vec<usize>,
        cur: &mut Vec<usize>,
        cand: &[usize],
        compatible: &dyn Fn(usize, usize) -> bool,
    ) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        for (pos, &v) in cand.iter().enumerate() {
            if cur.len() + (cand.len() - pos) <= best.len() {
                return;
            }
            let next: Vec<usize> = cand[pos + 1..]
                .iter()
                .copied()
                .filter(|&w| compatible(v, w))
                .collect();
            cur.push(v);
            extend(best, cur, &next, compatible);
            cur.pop();
        }
    }

    // every valid witness contains a pair attaining Δ; grow around each one,
    // over all remaining vertices (the pair need not have the lowest indices)
    let mut best: Vec<usize> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if minor(i, j).abs() != delta {
                continue;
            }
            let cand: Vec<usize> = (0..n)
                .filter(|&k| k != i && k != j && compatible(i, k) && compatible(j, k))
                .collect();
            let mut cur = vec![i, j];
            extend(&mut best, &mut cur, &cand, &compatible);
        }
    }
    if best.len() < 2 {
        return Err(Error::VerificationFailed(
            "oracle found no delta-attaining pair".into(),
        ));
    }
    let cols: Vec<Vec<i64>> = best.iter().map(|&i| universe[i].clone()).collect();
    let witness = IntMatrix::from_cols(&cols)?;
    let rep = certify(&witness, delta)?;
    if !(rep.is_generic && rep.is_delta_modular && rep.columns_distinct) {
        return Err(Error::VerificationFailed(
            "oracle witness failed re-certification".into(),
        ));
    }
    Ok(ComputationResult {
        delta,
        r,
        mode: Mode::Generic,
        value: best.len(),
        witness,
        source_hnf: None,
        hnfs_processed: 0,
        elapsed: start.elapsed(),
    })
}

/// One CSV row per (Δ, rank) with Δ = 2..=delta_max, rows in ascending
/// (rank, Δ); the excess column value − (Δ+2) is filled for rank 2 only.
pub fn compute_table<W: Write>(
    ranks: &[usize],
    delta_max: i64,
    mode: Mode,
    options: &SearchOptions,
    out: &mut W,
) -> Result<()> {
    writeln!(
        out,
        "delta,rank,mode,value,lower_bound,upper_linear,upper_sublinear,excess,witness,elapsed_ms"
    )?;
    let mut ranks = ranks.to_vec();
    ranks.sort_unstable();
    ranks.dedup();
    for &r in &ranks {
        for delta in 2..=delta_max {
            let res = compute_core(delta, r, mode, options)?;
            let b = bound_report(delta, r)?;
            let mode_name = match mode {
                Mode::Generic => "generic",
                Mode::NonGeneric => "nongeneric",
            };
            let sublinear = b.upper_sublinear.map(|u| u.to_string()).unwrap_or_default();
            let excess = if r == 2 {
                (res.value as i64 - (delta + 2)).to_string()
            } else {
                String::new()
            };
            writeln!(
                out,
                "{delta},{r},{mode_name},{},{},{},{sublinear},{excess},\"{}\",{}",
                res.value,
                b.lower_bound.expect("lower bound always defined for r >= 2"),
                b.upper_linear.expect("linear upper bound always defined for r >= 2"),
                witness_field(&res.witness),
                res.elapsed.as_millis()
            )?;
        }
    }
    Ok(())
}
