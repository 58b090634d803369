//! Exact maximum clique (r = 2) and maximum hyperclique (r ≥ 3) search over
//! the compatibility structure on candidate columns.
//!
//! An index set I with 1 < |I| ≤ r is a hyperedge iff the selected columns
//! form a totally generic Δ-bound matrix (generic mode) or a Δ-bound matrix
//! with distinct columns (non-generic mode). The family is downward-closed,
//! so the search only ever has to test the minors that involve the newest
//! column of a branch; everything a search returns is re-certified on the
//! assembled submatrix before it leaves this module.

use crate::cert::{is_delta_bound, is_totally_generic};
use crate::matrix::IntMatrix;
use crate::modsolve::{CandidateColumns, Mode};
use crate::{Error, Result};
use itertools::Itertools;
use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

#[derive(Clone, Debug, Default)]
pub struct SearchLimits {
    /// Abort with an explicit resource-cap error after this many search nodes.
    pub node_cap: Option<u64>,
    /// Abort with an explicit resource-cap error once this much time elapsed.
    pub wall_budget: Option<Duration>,
}

#[derive(Clone, Debug)]
pub struct CliqueInstance {
    pub delta: i64,
    pub r: usize,
    pub columns: CandidateColumns,
    /// Known clique size from elsewhere (monotone hint, may be stale). The
    /// search only reports cliques strictly larger than lower_bound − 1, so a
    /// stale-but-valid hint never changes the aggregated maximum.
    pub lower_bound: usize,
    adjacency: Vec<Vec<u64>>,
    degree_order: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CliqueResult {
    pub size: usize,
    pub members: Vec<usize>,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

/// The full hyperedge predicate on an index set: assemble the column
/// submatrix and certify it. Individually valid columns are the candidate
/// universe's responsibility; the search layers below only test pairs and up.
pub fn is_hyperedge(inst: &CliqueInstance, idx: &[usize]) -> Result<bool> {
    if idx.is_empty() || idx.len() > inst.r {
        return Err(Error::InvalidParam(format!(
            "hyperedge index sets have size 1..={}, got {}",
            inst.r,
            idx.len()
        )));
    }
    let n = inst.columns.columns.len();
    if idx.iter().any(|&i| i >= n) {
        return Err(Error::IndexOutOfRange);
    }
    if idx.iter().collect::<HashSet<_>>().len() != idx.len() {
        return Err(Error::DuplicateIndex);
    }
    let cols: Vec<Vec<i64>> = idx.iter().map(|&i| inst.columns.columns[i].clone()).collect();
    let m = IntMatrix::from_cols(&cols)?;
    Ok(match inst.columns.mode {
        Mode::Generic => is_totally_generic(&m)? && is_delta_bound(&m, inst.delta)?,
        Mode::NonGeneric => {
            is_delta_bound(&m, inst.delta)?
                && cols.iter().collect::<HashSet<_>>().len() == cols.len()
        }
    })
}

/// The incremental slice of the predicate: only the |idx|×|idx| minors that
/// use every column of idx. Sound as a full test exactly when all proper
/// subsets of idx are already known to pass (downward closure).
fn top_minors_pass(inst: &CliqueInstance, idx: &[usize]) -> bool {
    let m = idx.len();
    let bound = (inst.delta as i128).pow(m as u32);
    let mut rows: Vec<usize> = (0..m).collect();
    loop {
        let mut sub = IntMatrix::zeros(m, m);
        for (ri, &row) in rows.iter().enumerate() {
            for (ci, &col) in idx.iter().enumerate() {
                sub.set(ri, ci, inst.columns.columns[col][row]);
            }
        }
        let d = sub.det().expect("minor of bounded entries cannot overflow");
        let ok = match inst.columns.mode {
            Mode::Generic => d != 0 && d.abs() as i128 <= bound,
            Mode::NonGeneric => d.abs() as i128 <= bound,
        };
        if !ok {
            return false;
        }
        // next row combination in colex order
        let mut i = 0;
        loop {
            if i == m {
                return true;
            }
            let limit = if i + 1 < m { rows[i + 1] } else { inst.r };
            if rows[i] + 1 < limit {
                rows[i] += 1;
                for (j, slot) in rows.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                break;
            }
            i += 1;
        }
    }
}

impl CliqueInstance {
    pub fn new(columns: CandidateColumns, delta: i64, r: usize, lower_bound: usize) -> Result<Self> {
        if delta < 1 || r < 1 {
            return Err(Error::InvalidParam("delta and r must be positive".into()));
        }
        if columns.columns.iter().any(|c| c.len() != r) {
            return Err(Error::Shape("candidate column length must equal r".into()));
        }
        let n = columns.columns.len();
        let words = n.div_ceil(64).max(1);
        let mut inst = CliqueInstance {
            delta,
            r,
            columns,
            lower_bound,
            adjacency: vec![vec![0u64; words]; n],
            degree_order: Vec::new(),
        };
        for i in 0..n {
            for j in i + 1..n {
                if top_minors_pass(&inst, &[i, j]) {
                    inst.adjacency[i][j / 64] |= 1 << (j % 64);
                    inst.adjacency[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        let degree = |i: usize| -> u32 { inst.adjacency[i].iter().map(|w| w.count_ones()).sum() };
        order.sort_by_key(|&i| (std::cmp::Reverse(degree(i)), i));
        inst.degree_order = order;
        Ok(inst)
    }

    pub fn candidate_count(&self) -> usize {
        self.columns.columns.len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j / 64] >> (j % 64) & 1 == 1
    }
}

/// Maximum clique of the pair-compatibility graph (the r = 2 case, where the
/// hypergraph is a simple graph).
pub fn max_clique_graph(inst: &CliqueInstance, limits: &SearchLimits) -> Result<CliqueResult> {
    if inst.r != 2 {
        return Err(Error::InvalidParam("pair-graph search requires r = 2".into()));
    }
    run_search(inst, limits)
}

/// Maximum hyperclique for r ≥ 3: a set whose every subset of size ≤ r is a
/// hyperedge.
pub fn max_hyperclique(inst: &CliqueInstance, limits: &SearchLimits) -> Result<CliqueResult> {
    if inst.r < 3 {
        return Err(Error::InvalidParam("hyperclique search requires r >= 3".into()));
    }
    run_search(inst, limits)
}

struct Engine<'a> {
    inst: &'a CliqueInstance,
    limits: &'a SearchLimits,
    deadline: Option<Instant>,
    nodes: u64,
    best_size: usize,
    best: Vec<usize>,
    memo: HashMap<Box<[u32]>, bool>,
}

impl Engine<'_> {
    fn cap_error(&self, what: String) -> Error {
        Error::ResourceCap {
            detail: format!("{what}; largest clique found before stopping: {}", self.best.len()),
        }
    }

    /// Greedy coloring of the candidate list (kept in global degree order);
    /// returns (vertex, color) sorted by ascending color. A clique can use at
    /// most one vertex per color class, so color numbers bound extensions.
    fn color_sort(&self, cand: &[usize]) -> Vec<(usize, usize)> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in cand {
            match classes
                .iter_mut()
                .find(|class| class.iter().all(|&u| !self.inst.adjacent(u, v)))
            {
                Some(class) => class.push(v),
                None => classes.push(vec![v]),
            }
        }
        classes
            .iter()
            .enumerate()
            .flat_map(|(ci, class)| class.iter().map(move |&v| (v, ci + 1)))
            .collect()
    }

    /// Incremental candidate filter: with clique K and newly chosen v, w stays
    /// viable iff T ∪ {v, w} is an edge for every T ⊆ K with |T| ≤ r − 2. All
    /// smaller obligations were established when w survived earlier levels.
    fn extension_ok(&mut self, clique: &[usize], v: usize, w: usize) -> bool {
        let t_max = (self.inst.r - 2).min(clique.len());
        for t in 1..=t_max {
            for comb in clique.iter().copied().combinations(t) {
                let mut idx: Vec<u32> = comb.into_iter().map(|x| x as u32).collect();
                idx.push(v as u32);
                idx.push(w as u32);
                idx.sort_unstable();
                if !self.edge_ok(idx) {
                    return false;
                }
            }
        }
        true
    }

    fn edge_ok(&mut self, sorted_idx: Vec<u32>) -> bool {
        if let Some(&hit) = self.memo.get(sorted_idx.as_slice()) {
            return hit;
        }
        let idx: Vec<usize> = sorted_idx.iter().map(|&x| x as usize).collect();
        let pass = top_minors_pass(self.inst, &idx);
        self.memo.insert(sorted_idx.into_boxed_slice(), pass);
        pass
    }

    fn expand(&mut self, clique: &mut Vec<usize>, cand: &[usize]) -> Result<()> {
        self.nodes += 1;
        if let Some(cap) = self.limits.node_cap {
            if self.nodes > cap {
                return Err(self.cap_error(format!("search node cap {cap} exceeded")));
            }
        }
        if self.nodes % 4096 == 0 {
            if let (Some(deadline), Some(budget)) = (self.deadline, self.limits.wall_budget) {
                if Instant::now() > deadline {
                    return Err(self.cap_error(format!("wall budget {budget:?} exceeded")));
                }
            }
        }
        if clique.len() > self.best_size {
            self.best_size = clique.len();
            self.best = clique.clone();
        }
        if cand.is_empty() {
            return Ok(());
        }
        let colored = self.color_sort(cand);
        let n = self.inst.candidate_count();
        for i in (0..colored.len()).rev() {
            let (v, color) = colored[i];
            if clique.len() + color <= self.best_size {
                return Ok(());
            }
            let mut prefix = vec![0u64; n.div_ceil(64).max(1)];
            for &(w, _) in &colored[..i] {
                prefix[w / 64] |= 1 << (w % 64);
            }
            let mut next: Vec<usize> = cand
                .iter()
                .copied()
                .filter(|&w| prefix[w / 64] >> (w % 64) & 1 == 1 && self.inst.adjacent(v, w))
                .collect();
            if self.inst.r >= 3 {
                let snapshot = clique.clone();
                next.retain(|&w| self.extension_ok(&snapshot, v, w));
            }
            clique.push(v);
            self.expand(clique, &next)?;
            clique.pop();
        }
        Ok(())
    }
}

fn run_search(inst: &CliqueInstance, limits: &SearchLimits) -> Result<CliqueResult> {
    let start = Instant::now();
    let mut engine = Engine {
        inst,
        limits,
        deadline: limits.wall_budget.map(|b| start + b),
        nodes: 0,
        best_size: inst.lower_bound.saturating_sub(1),
        best: Vec::new(),
        memo: HashMap::new(),
    };
    engine.expand(&mut Vec::new(), &inst.degree_order)?;
    let mut members = engine.best;
    members.sort_unstable();
    if !members.is_empty() {
        verify_members(inst, &members)?;
    }
    Ok(CliqueResult {
        size: members.len(),
        members,
        nodes_explored: engine.nodes,
        elapsed: start.elapsed(),
    })
}

/// Re-certify a result on the assembled submatrix, independently of the
/// incremental edge checks the search used.
fn verify_members(inst: &CliqueInstance, members: &[usize]) -> Result<()> {
    let cols: Vec<Vec<i64>> = members.iter().map(|&i| inst.columns.columns[i].clone()).collect();
    let m = IntMatrix::from_cols(&cols)?;
    let ok = match inst.columns.mode {
        Mode::Generic => is_totally_generic(&m)? && is_delta_bound(&m, inst.delta)?,
        Mode::NonGeneric => {
            is_delta_bound(&m, inst.delta)?
                && cols.iter().collect::<HashSet<_>>().len() == cols.len()
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::VerificationFailed(
            "clique search returned a member set that fails re-certification".into(),
        ))
    }
}

/// Brute-force maximum by subset enumeration, for cross-checking the search
/// on small instances. Downward closure makes a mask valid iff the mask minus
/// its lowest vertex v is valid and every edge T ∪ {v} with T inside the rest
/// passes.
pub fn exhaustive_max(inst: &CliqueInstance) -> Result<CliqueResult> {
    let start = Instant::now();
    let n = inst.candidate_count();
    if n > 18 {
        return Err(Error::InvalidParam(
            "exhaustive oracle is limited to 18 candidates".into(),
        ));
    }
    let mut valid = vec![false; 1usize << n];
    valid[0] = true;
    let mut memo: HashMap<Box<[u32]>, bool> = HashMap::new();
    let mut edge = |idx: Vec<u32>| -> bool {
        if let Some(&hit) = memo.get(idx.as_slice()) {
            return hit;
        }
        let usizes: Vec<usize> = idx.iter().map(|&x| x as usize).collect();
        let pass = top_minors_pass(inst, &usizes);
        memo.insert(idx.into_boxed_slice(), pass);
        pass
    };
    let mut best_mask = 0usize;
    let mut best_size = 0usize;
    for mask in 1..(1usize << n) {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if !valid[rest] {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| rest >> i & 1 == 1).collect();
        let t_max = (inst.r - 1).min(members.len());
        let ok = (1..=t_max).all(|t| {
            members.iter().copied().combinations(t).all(|comb| {
                let mut idx: Vec<u32> = comb.into_iter().map(|x| x as u32).collect();
                idx.push(v as u32);
                idx.sort_unstable();
                edge(idx)
            })
        });
        if ok {
            valid[mask] = true;
            let size = mask.count_ones() as usize;
            if size > best_size {
                best_size = size;
                best_mask = mask;
            }
        }
    }
    Ok(CliqueResult {
        size: best_size,
        members: (0..n).filter(|&i| best_mask >> i & 1 == 1).collect(),
        nodes_explored: (1u64 << n) - 1,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hnf::HnfMatrix;
    use crate::hnfspace::{enumerate_hnf, EnumMode, HnfEnumConfig};
    use crate::modsolve::candidate_columns;

    fn generic_inst(columns: Vec<Vec<i64>>, delta: i64, r: usize) -> CliqueInstance {
        let cands = CandidateColumns { mode: Mode::Generic, columns };
        CliqueInstance::new(cands, delta, r, 0).unwrap()
    }

    fn diag_hnf(diag: &[i64]) -> HnfMatrix {
        let mut m = IntMatrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        HnfMatrix::try_new(m).unwrap()
    }

    #[test]
    fn complete_graph_on_five() {
        let cols: Vec<Vec<i64>> = (1..=5).map(|k| vec![1, k]).collect();
        let inst = generic_inst(cols, 25, 2);
        let res = max_clique_graph(&inst, &SearchLimits::default()).unwrap();
        assert_eq!(res.size, 5);
        assert_eq!(res.members, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn edgeless_graph_has_singletons() {
        // pairwise parallel columns: every 2×2 minor vanishes
        let inst = generic_inst(vec![vec![1, 1], vec![2, 2], vec![3, 3]], 3, 2);
        let res = max_clique_graph(&inst, &SearchLimits::default()).unwrap();
        assert_eq!(res.size, 1);
    }

    #[test]
    fn hyperedge_predicate_examples() {
        let inst = generic_inst(vec![vec![1, 1], vec![1, 2]], 2, 2);
        assert!(is_hyperedge(&inst, &[0, 1]).unwrap());
        let inst = generic_inst(vec![vec![1, 1], vec![2, 2]], 5, 2);
        assert!(!is_hyperedge(&inst, &[0, 1]).unwrap());
        let inst = generic_inst(vec![vec![2, 1], vec![1, 2]], 1, 2);
        assert!(!is_hyperedge(&inst, &[0, 1]).unwrap());
    }

    #[test]
    fn full_edge_gives_hyperclique_of_its_size() {
        let cols = vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]];
        let inst = generic_inst(cols, 4, 3);
        assert!(is_hyperedge(&inst, &[0, 1, 2]).unwrap());
        let res = max_hyperclique(&inst, &SearchLimits::default()).unwrap();
        assert_eq!(res.size, 3);
    }

    #[test]
    fn edgeless_hypergraph_has_singletons() {
        let inst = generic_inst(vec![vec![1, 1, 1], vec![2, 2, 2]], 2, 3);
        let res = max_hyperclique(&inst, &SearchLimits::default()).unwrap();
        assert_eq!(res.size, 1);
    }

    #[test]
    fn pair_instances_at_delta_seven() {
        // diag(1,7) alone: candidates are (7,k) for k in ±{1..7}; an edge needs
        // |7(l-k)| ≤ 49, so a clique is a 0-free window of span ≤ 7, size ≤ 7.
        let a = diag_hnf(&[1, 7]);
        let cands = candidate_columns(&a, 7, Mode::Generic).unwrap();
        let inst = CliqueInstance::new(cands, 7, 2, 0).unwrap();
        let res = max_clique_graph(&inst, &SearchLimits::default()).unwrap();
        assert_eq!(res.size, 7);

        // the outer loop over op-reduced forms reaches 8 = g(7,2) − 2 (at [[1,2],[0,7]])
        let mut best = 0;
        for h in enumerate_hnf(&HnfEnumConfig { delta: 7, r: 2, mode: EnumMode::OpReduced }).unwrap()
        {
            let cands = candidate_columns(&h, 7, Mode::Generic).unwrap();
            let inst = CliqueInstance::new(cands, 7, 2, 0).unwrap();
            best = best.max(max_clique_graph(&inst, &SearchLimits::default()).unwrap().size);
        }
        assert_eq!(best, 8);
    }

    #[test]
    fn engine_matches_exhaustive_oracle() {
        let a = diag_hnf(&[1, 7]);
        let cands = candidate_columns(&a, 7, Mode::Generic).unwrap();
        let inst = CliqueInstance::new(cands, 7, 2, 0).unwrap();
        assert!(inst.candidate_count() <= 18);
        let fast = max_clique_graph(&inst, &SearchLimits::default()).unwrap();
        let slow = exhaustive_max(&inst).unwrap();
        assert_eq!(fast.size, slow.size);

        let a = diag_hnf(&[1, 1, 3]);
        let cands = candidate_columns(&a, 3, Mode::Generic).unwrap();
        let inst = CliqueInstance::new(cands, 3, 3, 0).unwrap();
        assert!(inst.candidate_count() <= 18);
        let fast = max_hyperclique(&inst, &SearchLimits::default()).unwrap();
        let slow = exhaustive_max(&inst).unwrap();
        assert_eq!(fast.size, slow.size);
    }

    #[test]
    fn hint_never_changes_size() {
        let a = diag_hnf(&[1, 7]);
        let cands = candidate_columns(&a, 7, Mode::Generic).unwrap();
        let base = CliqueInstance::new(cands.clone(), 7, 2, 0).unwrap();
        let size = max_clique_graph(&base, &SearchLimits::default()).unwrap().size;
        for hint in 1..=size {
            let inst = CliqueInstance::new(cands.clone(), 7, 2, hint).unwrap();
            let res = max_clique_graph(&inst, &SearchLimits::default()).unwrap();
            assert_eq!(res.size, size, "hint {hint}");
        }
    }

    #[test]
    fn node_cap_is_an_explicit_failure() {
        let a = diag_hnf(&[1, 7]);
        let cands = candidate_columns(&a, 7, Mode::Generic).unwrap();
        let inst = CliqueInstance::new(cands, 7, 2, 0).unwrap();
        let limits = SearchLimits { node_cap: Some(3), wall_budget: None };
        assert!(matches!(
            max_clique_graph(&inst, &limits),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn rank_preconditions() {
        let inst = generic_inst(vec![vec![1, 1]], 2, 2);
        assert!(max_hyperclique(&inst, &SearchLimits::default()).is_err());
        let inst3 = generic_inst(vec![vec![1, 1, 1]], 2, 3);
        assert!(max_clique_graph(&inst3, &SearchLimits::default()).is_err());
    }
}
