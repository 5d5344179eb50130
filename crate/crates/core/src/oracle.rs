//! Brute-force ground truth for small sequences.
//!
//! Everything here works from first principles: realizations are enumerated by
//! backtracking over adjacency rows, maximal sets by testing every subset, and 3-cycle
//! membership directly on the adjacency bits. Nothing here calls the slack machinery
//! except the arc-status verdict, which exists to be compared against enumeration.

use std::collections::HashMap;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph_core::Digraph;
use crate::seq_core::{is_digraphic, DegreePair, IndexSet, IntPairSeq, IntSeq};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationBudget {
    pub max_vertices: usize,
    /// Exceeding this many collected realizations is an error, not a truncation.
    pub max_results: Option<usize>,
    /// Cap on backtracking nodes per search.
    pub node_limit: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_vertices: 7, max_results: None, node_limit: 50_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BudgetLimit {
    Vertices { n: usize, max: usize },
    Results { max: usize },
    Nodes { limit: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("budget exceeded: {0:?}")]
    BudgetExceeded(BudgetLimit),
    #[error("the sequence has no realization")]
    NotRealizable,
}

fn check_size(n: usize, max: usize) -> Result<(), OracleError> {
    if n > max || n > 32 {
        Err(OracleError::BudgetExceeded(BudgetLimit::Vertices { n, max: max.min(32) }))
    } else {
        Ok(())
    }
}

/// Row-by-row search. `rows[v]` is the out-neighbourhood bitmask of vertex `v` (0-based).
struct Search<'a, F> {
    n: usize,
    outs: Vec<u32>,
    need_in: Vec<u32>,
    order: Vec<usize>,
    rows: Vec<u32>,
    nodes: u64,
    limit: u64,
    visit: &'a mut F,
}

impl<F: FnMut(&[u32]) -> ControlFlow<()>> Search<'_, F> {
    fn tick(&mut self) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.limit {
            Err(OracleError::BudgetExceeded(BudgetLimit::Nodes { limit: self.limit }))
        } else {
            Ok(())
        }
    }

    /// Necessary conditions for the rows `order[t..]` to absorb the remaining in-demand.
    fn feasible(&self, t: usize) -> bool {
        let pending = &self.order[t..];
        for v in 0..self.n {
            let available = pending.iter().filter(|&&r| r != v).count() as u32;
            if self.need_in[v] > available {
                return false;
            }
        }
        let mut demands: Vec<u32> = pending.iter().map(|&r| self.outs[r]).collect();
        demands.sort_unstable_by(|a, b| b.cmp(a));
        let mut prefix = 0u32;
        for (p, &a) in demands.iter().enumerate() {
            prefix += a;
            let cap: u32 = self.need_in.iter().map(|&b| b.min(p as u32 + 1)).sum();
            if prefix > cap {
                return false;
            }
        }
        true
    }

    fn row(&mut self, t: usize) -> Result<ControlFlow<()>, OracleError> {
        self.tick()?;
        if t == self.n {
            if self.need_in.iter().all(|&b| b == 0) {
                return Ok((self.visit)(&self.rows));
            }
            return Ok(ControlFlow::Continue(()));
        }
        if !self.feasible(t) {
            return Ok(ControlFlow::Continue(()));
        }
        let r = self.order[t];
        let candidates: Vec<usize> =
            (0..self.n).filter(|&c| c != r && self.need_in[c] > 0).collect();
        let k = self.outs[r] as usize;
        if candidates.len() < k {
            return Ok(ControlFlow::Continue(()));
        }
        self.choose(t, r, &candidates, 0, k, 0)
    }

    fn choose(
        &mut self,
        t: usize,
        r: usize,
        candidates: &[usize],
        from: usize,
        left: usize,
        mask: u32,
    ) -> Result<ControlFlow<()>, OracleError> {
        if left == 0 {
            self.rows[r] = mask;
            for &c in candidates {
                if mask >> c & 1 == 1 {
                    self.need_in[c] -= 1;
                }
            }
            let flow = self.row(t + 1);
            for &c in candidates {
                if mask >> c & 1 == 1 {
                    self.need_in[c] += 1;
                }
            }
            self.rows[r] = 0;
            return flow;
        }
        for pos in from..=candidates.len() - left {
            self.tick()?;
            let flow = self.choose(t, r, candidates, pos + 1, left - 1, mask | 1 << candidates[pos])?;
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Runs `visit` on the adjacency rows of every realization until it breaks.
/// Returns `true` when the search ran to completion.
fn search_rows<F: FnMut(&[u32]) -> ControlFlow<()>>(
    d: &IntPairSeq,
    budget: &EnumerationBudget,
    visit: &mut F,
) -> Result<bool, OracleError> {
    let n = d.len();
    check_size(n, budget.max_vertices)?;
    let outs: Vec<u32> = d.pairs().iter().map(|p| p.out_deg).collect();
    let need_in: Vec<u32> = d.pairs().iter().map(|p| p.in_deg).collect();
    let total_out: u64 = outs.iter().map(|&v| u64::from(v)).sum();
    let total_in: u64 = need_in.iter().map(|&v| u64::from(v)).sum();
    if total_out != total_in || outs.iter().chain(&need_in).any(|&v| v as usize >= n.max(1)) {
        return Ok(true);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(outs[v]), v));
    let mut search = Search {
        n,
        outs,
        need_in,
        order,
        rows: vec![0; n],
        nodes: 0,
        limit: budget.node_limit,
        visit,
    };
    Ok(search.row(0)?.is_continue())
}

fn graph_from_rows(rows: &[u32]) -> Digraph {
    let n = rows.len();
    let arcs = (0..n).flat_map(|u| (0..n).filter(move |&v| rows[u] >> v & 1 == 1).map(move |v| (u + 1, v + 1)));
    Digraph::from_arcs(n, arcs).expect("enumerated rows are simple")
}

/// Calls `visit` on each realization of `d` in search order until it breaks.
/// Returns `true` when every realization was visited.
pub fn for_each_realization(
    d: &IntPairSeq,
    budget: &EnumerationBudget,
    mut visit: impl FnMut(&Digraph) -> ControlFlow<()>,
) -> Result<bool, OracleError> {
    search_rows(d, budget, &mut |rows: &[u32]| visit(&graph_from_rows(rows)))
}

/// Every labeled realization of `d`, sorted by arc list.
pub fn enumerate_realizations(
    d: &IntPairSeq,
    budget: &EnumerationBudget,
) -> Result<Vec<Digraph>, OracleError> {
    let mut out = Vec::new();
    let mut overflow = false;
    search_rows(d, budget, &mut |rows: &[u32]| {
        if budget.max_results.is_some_and(|max| out.len() >= max) {
            overflow = true;
            return ControlFlow::Break(());
        }
        out.push(graph_from_rows(rows));
        ControlFlow::Continue(())
    })?;
    if overflow {
        let max = budget.max_results.unwrap_or(0);
        return Err(OracleError::BudgetExceeded(BudgetLimit::Results { max }));
    }
    out.sort();
    Ok(out)
}

/// Number of labeled realizations of `d`.
pub fn count_realizations(d: &IntPairSeq, budget: &EnumerationBudget) -> Result<u64, OracleError> {
    let mut count = 0u64;
    search_rows(d, budget, &mut |_: &[u32]| {
        count += 1;
        ControlFlow::Continue(())
    })?;
    Ok(count)
}

pub fn exists_realization(d: &IntPairSeq, budget: &EnumerationBudget) -> Result<bool, OracleError> {
    let mut found = false;
    search_rows(d, budget, &mut |_: &[u32]| {
        found = true;
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Whether some simple undirected graph has degree sequence `d`.
pub fn exists_undirected_realization(
    d: &IntSeq,
    budget: &EnumerationBudget,
) -> Result<bool, OracleError> {
    let n = d.len();
    check_size(n, budget.max_vertices)?;
    if !d.sum().is_multiple_of(2) {
        return Ok(false);
    }
    fn place(left: &mut [u32], v: usize, from: usize, nodes: &mut u64, limit: u64) -> Result<bool, OracleError> {
        *nodes += 1;
        if *nodes > limit {
            return Err(OracleError::BudgetExceeded(BudgetLimit::Nodes { limit }));
        }
        let n = left.len();
        if v == n {
            return Ok(true);
        }
        if left[v] == 0 {
            return place(left, v + 1, v + 2, nodes, limit);
        }
        for w in from..n {
            if left[w] == 0 {
                continue;
            }
            left[v] -= 1;
            left[w] -= 1;
            let next = if left[v] == 0 { place(left, v + 1, v + 2, nodes, limit) } else { place(left, v, w + 1, nodes, limit) };
            left[v] += 1;
            left[w] += 1;
            if next? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    let mut left = d.values().to_vec();
    let mut nodes = 0;
    place(&mut left, 0, 1, &mut nodes, budget.node_limit)
}

fn later(a: DegreePair, b: DegreePair, out_major: bool) -> bool {
    if out_major {
        (a.out_deg, a.in_deg) > (b.out_deg, b.in_deg)
    } else {
        (a.in_deg, a.out_deg) > (b.in_deg, b.out_deg)
    }
}

fn maximal_subsets(d: &IntPairSeq, i: usize, size: usize, out_major: bool) -> Vec<IndexSet> {
    let others: Vec<usize> = d.indices().filter(|&j| j != i).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << others.len()) {
        if mask.count_ones() as usize != size {
            continue;
        }
        let inside: Vec<usize> = (0..others.len()).filter(|&b| mask >> b & 1 == 1).map(|b| others[b]).collect();
        let outside: Vec<usize> = (0..others.len()).filter(|&b| mask >> b & 1 == 0).map(|b| others[b]).collect();
        let dominated = outside
            .iter()
            .any(|&o| inside.iter().any(|&m| later(d.get(o), d.get(m), out_major)));
        if !dominated {
            out.push(inside.into_iter().collect());
        }
    }
    out
}

/// Every pair `(kplus, kminus)` of maximal index sets for `i`, found by testing all subsets.
pub fn all_maximal_pairs(d: &IntPairSeq, i: usize) -> Vec<(IndexSet, IndexSet)> {
    let p = d.get(i);
    let plus = maximal_subsets(d, i, p.in_deg as usize, true);
    let minus = maximal_subsets(d, i, p.out_deg as usize, false);
    plus.iter()
        .flat_map(|kp| minus.iter().map(move |km| (kp.clone(), km.clone())))
        .collect()
}

/// The parallel residual computed directly; `None` when a degree would go negative.
pub fn parallel_residual(
    d: &IntPairSeq,
    i: usize,
    kplus: &IndexSet,
    kminus: &IndexSet,
) -> Option<IntPairSeq> {
    let mut pairs = d.pairs().to_vec();
    pairs[i - 1] = DegreePair::ZERO;
    for &j in kplus {
        pairs[j - 1].out_deg = pairs[j - 1].out_deg.checked_sub(1)?;
    }
    for &j in kminus {
        pairs[j - 1].in_deg = pairs[j - 1].in_deg.checked_sub(1)?;
    }
    Some(IntPairSeq::new(pairs))
}

/// Realizability memoized on the sorted multiset of pairs.
struct Existence<'a> {
    budget: &'a EnumerationBudget,
    known: HashMap<Vec<DegreePair>, bool>,
}

impl Existence<'_> {
    fn check(&mut self, d: &IntPairSeq) -> Result<bool, OracleError> {
        let mut key = d.pairs().to_vec();
        key.sort_unstable();
        if let Some(&v) = self.known.get(&key) {
            return Ok(v);
        }
        let v = exists_realization(d, self.budget)?;
        self.known.insert(key, v);
        Ok(v)
    }
}

/// Indices for which some pair of maximal sets leaves an unrealizable parallel residual.
pub fn ill_defined_indices_oracle(
    d: &IntPairSeq,
    budget: &EnumerationBudget,
) -> Result<IndexSet, OracleError> {
    let mut existence = Existence { budget, known: HashMap::new() };
    if !existence.check(d)? {
        return Err(OracleError::NotRealizable);
    }
    let mut out = IndexSet::new();
    for i in d.indices() {
        for (kplus, kminus) in all_maximal_pairs(d, i) {
            let bad = match parallel_residual(d, i, &kplus, &kminus) {
                None => true,
                Some(residual) => !existence.check(&residual)?,
            };
            if bad {
                out.insert(i);
                break;
            }
        }
    }
    Ok(out)
}

/// Sorted triples through `v` (0-based rows) inducing a directed 3-cycle, 1-based.
fn c3_triples_through(rows: &[u32], v: usize) -> Vec<[usize; 3]> {
    let n = rows.len();
    let arc = |a: usize, b: usize| rows[a] >> b & 1 == 1;
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == v || b == v || a == b {
                continue;
            }
            let cycle = arc(v, a) && arc(a, b) && arc(b, v);
            let no_reverse = !arc(a, v) && !arc(b, a) && !arc(v, b);
            if cycle && no_reverse {
                let mut t = [v + 1, a + 1, b + 1];
                t.sort_unstable();
                out.push(t);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Indices lying on an induced directed 3-cycle in every realization.
pub fn anchored_indices_oracle(
    d: &IntPairSeq,
    budget: &EnumerationBudget,
) -> Result<IndexSet, OracleError> {
    let n = d.len();
    let mut candidates: Vec<usize> = (0..n).collect();
    let mut seen = false;
    search_rows(d, budget, &mut |rows: &[u32]| {
        seen = true;
        candidates.retain(|&v| !c3_triples_through(rows, v).is_empty());
        if candidates.is_empty() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    if !seen {
        return Err(OracleError::NotRealizable);
    }
    Ok(candidates.into_iter().map(|v| v + 1).collect())
}

/// Every index appearing on some induced directed 3-cycle through `j`, over all
/// realizations (including `j` itself when any such cycle exists).
pub fn scaffold_oracle(
    d: &IntPairSeq,
    j: usize,
    budget: &EnumerationBudget,
) -> Result<IndexSet, OracleError> {
    let mut out = IndexSet::new();
    let mut seen = false;
    search_rows(d, budget, &mut |rows: &[u32]| {
        seen = true;
        out.extend(c3_triples_through(rows, j - 1).into_iter().flatten());
        ControlFlow::Continue(())
    })?;
    if !seen {
        return Err(OracleError::NotRealizable);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArcStatus {
    /// In every realization.
    Forced,
    /// In no realization.
    Forbidden,
    Free,
    /// Both tests fail, so the sequence itself is not realizable.
    BothInfeasible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcStatusReport {
    /// From digraphicality of the sequence with the arc added or removed.
    pub degree_test: ArcStatus,
    /// From enumerating every realization.
    pub exact: ArcStatus,
}

impl ArcStatusReport {
    /// The degree test only gives sufficient conditions, so it is consistent when it
    /// says `Free` or agrees with the exact status. Without realizations every verdict
    /// holds vacuously.
    pub fn consistent(&self) -> bool {
        self.exact == ArcStatus::BothInfeasible
            || self.degree_test == ArcStatus::Free
            || self.degree_test == self.exact
    }
}

fn shifted(d: &IntPairSeq, i: usize, j: usize, delta: i64) -> Option<IntPairSeq> {
    let bump = |v: u32| u32::try_from(i64::from(v) + delta).ok();
    let pi = d.get(i);
    let pj = d.get(j);
    let with_i = d.with(i, DegreePair::new(bump(pi.out_deg)?, pi.in_deg));
    Some(with_i.with(j, DegreePair::new(pj.out_deg, bump(pj.in_deg)?)))
}

/// Status of arc `(i, j)` across the realizations of `d`.
pub fn arc_status(
    d: &IntPairSeq,
    i: usize,
    j: usize,
    budget: &EnumerationBudget,
) -> Result<ArcStatusReport, OracleError> {
    let with_arc_ok = shifted(d, i, j, 1).is_some_and(|s| is_digraphic(&s));
    let without_arc_ok = shifted(d, i, j, -1).is_some_and(|s| is_digraphic(&s));
    let degree_test = match (with_arc_ok, without_arc_ok) {
        (false, false) => ArcStatus::BothInfeasible,
        (false, true) => ArcStatus::Forced,
        (true, false) => ArcStatus::Forbidden,
        (true, true) => ArcStatus::Free,
    };
    let (mut with, mut without) = (false, false);
    search_rows(d, budget, &mut |rows: &[u32]| {
        if rows[i - 1] >> (j - 1) & 1 == 1 {
            with = true;
        } else {
            without = true;
        }
        if with && without {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    let exact = match (with, without) {
        (false, false) => ArcStatus::BothInfeasible,
        (true, false) => ArcStatus::Forced,
        (false, true) => ArcStatus::Forbidden,
        (true, true) => ArcStatus::Free,
    };
    Ok(ArcStatusReport { degree_test, exact })
}

/// Whether some vertex bijection maps the arcs of `a` exactly onto those of `b`.
pub fn isomorphic(a: &Digraph, b: &Digraph) -> Result<bool, OracleError> {
    let n = a.n_vertices();
    check_size(n, 8)?;
    if b.n_vertices() != n || a.arc_count() != b.arc_count() {
        return Ok(false);
    }
    let deg = |g: &Digraph, v: usize| (g.out_degree(v), g.in_degree(v));
    let mut da: Vec<_> = a.vertices().map(|v| deg(a, v)).collect();
    let mut db: Vec<_> = b.vertices().map(|v| deg(b, v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return Ok(false);
    }
    fn extend(a: &Digraph, b: &Digraph, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let v = map.len() + 1;
        if v > a.n_vertices() {
            return true;
        }
        for w in b.vertices() {
            if used[w - 1] || (a.out_degree(v), a.in_degree(v)) != (b.out_degree(w), b.in_degree(w)) {
                continue;
            }
            let fits = map.iter().enumerate().all(|(p, &image)| {
                let u = p + 1;
                a.has_arc(u, v) == b.has_arc(image, w) && a.has_arc(v, u) == b.has_arc(w, image)
            });
            if !fits {
                continue;
            }
            map.push(w);
            used[w - 1] = true;
            if extend(a, b, map, used) {
                return true;
            }
            map.pop();
            used[w - 1] = false;
        }
        false
    }
    Ok(extend(a, b, &mut Vec::with_capacity(n), &mut vec![false; n]))
}
