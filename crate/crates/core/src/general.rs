//! Arbitrary seat graphs: a neighborhood-stable assignment whenever a
//! directed feedback vertex set of the preferences fits on the seat graph's
//! leaves, and a fully stable one when the preferences are acyclic.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{AgentIdx, Assignment, Instance, PreferenceGraph, SeatGraph, SeatIdx};

pub const DEFAULT_DFVS_BUDGET: usize = 20;

/// A directed feedback vertex set, sorted. `exact` marks a computed minimum
/// as opposed to a caller-supplied set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfvsResult {
    pub set: Vec<AgentIdx>,
    pub exact: bool,
}

/// Whether the preferences restricted to agents outside `excluded` are
/// acyclic.
pub fn is_acyclic_without(prefs: &PreferenceGraph, excluded: &[bool]) -> bool {
    let n = prefs.n();
    let mut indeg = vec![0usize; n];
    for (i, j) in prefs.arcs() {
        if !excluded[i] && !excluded[j] {
            indeg[j] += 1;
        }
    }
    let mut stack: Vec<_> = (0..n).filter(|&v| !excluded[v] && indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = stack.pop() {
        removed += 1;
        for &w in prefs.out_neighbors(v) {
            if !excluded[w] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
    }
    removed == excluded.iter().filter(|&&x| !x).count()
}

/// Agents lying on some directed cycle (members of a strongly connected
/// component with an internal arc). Minimum feedback sets only use these.
fn cyclic_agents(prefs: &PreferenceGraph) -> Vec<AgentIdx> {
    let n = prefs.n();
    // Kosaraju: finish order on the graph, then components on the reverse.
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let outs = prefs.out_neighbors(v);
            if let Some(&w) = outs.get(*next) {
                *next += 1;
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut size = 0;
        comp[root] = id;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            size += 1;
            for &u in prefs.in_neighbors(v) {
                if comp[u] == usize::MAX {
                    comp[u] = id;
                    stack.push(u);
                }
            }
        }
        sizes.push(size);
    }
    // no self arcs, so a singleton component is never cyclic
    (0..n).filter(|&v| sizes[comp[v]] > 1).collect()
}

/// Advances `combo` (strictly increasing indices into `0..m`) to the next
/// combination in lexicographic order; `false` when exhausted.
fn next_combination(combo: &mut [usize], m: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < m - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// First acyclic-complement subset of `candidates` of size `k` whose first
/// element is `candidates[first]`, in lexicographic order.
fn first_with_prefix(
    prefs: &PreferenceGraph,
    candidates: &[AgentIdx],
    k: usize,
    first: usize,
) -> Option<Vec<AgentIdx>> {
    let m = candidates.len();
    let rest_len = k - 1;
    let rest_pool = m - first - 1;
    if rest_len > rest_pool {
        return None;
    }
    let mut excluded = vec![false; prefs.n()];
    let mut combo: Vec<usize> = (0..rest_len).collect();
    loop {
        excluded.iter_mut().for_each(|x| *x = false);
        excluded[candidates[first]] = true;
        for &c in &combo {
            excluded[candidates[first + 1 + c]] = true;
        }
        if is_acyclic_without(prefs, &excluded) {
            let mut set = vec![candidates[first]];
            set.extend(combo.iter().map(|&c| candidates[first + 1 + c]));
            return Some(set);
        }
        if rest_len == 0 || !next_combination(&mut combo, rest_pool) {
            return None;
        }
    }
}

/// Minimum directed feedback vertex set by enumerating subsets in increasing
/// size; the lexicographically smallest among the minimum ones.
pub fn compute_dfvs(prefs: &PreferenceGraph, budget: usize) -> Result<DfvsResult> {
    compute_dfvs_with(prefs, budget, Execution::default())
}

pub fn compute_dfvs_with(prefs: &PreferenceGraph, budget: usize, exec: Execution) -> Result<DfvsResult> {
    let n = prefs.n();
    if n > budget {
        return Err(Error::BudgetExceeded { n, budget });
    }
    if is_acyclic_without(prefs, &vec![false; n]) {
        return Ok(DfvsResult { set: Vec::new(), exact: true });
    }
    let candidates = cyclic_agents(prefs);
    for k in 1..=candidates.len() {
        let found = exec.find_map_first(0..candidates.len(), |first| {
            first_with_prefix(prefs, &candidates, k, first)
        });
        if let Some(set) = found {
            return Ok(DfvsResult { set, exact: true });
        }
    }
    unreachable!("removing every cyclic agent leaves a DAG")
}

/// Peels sinks (smallest index first) off the preferences restricted to
/// agents outside `excluded`. Each agent in the output approves only
/// excluded agents and agents listed before it.
pub fn sink_order(prefs: &PreferenceGraph, excluded: &[AgentIdx]) -> Result<Vec<AgentIdx>> {
    let n = prefs.n();
    let mut gone = vec![false; n];
    for &x in excluded {
        if x >= n {
            return Err(Error::BadParameter(format!("agent {x} out of range")));
        }
        gone[x] = true;
    }
    let mut remaining_out: Vec<usize> = (0..n)
        .map(|v| prefs.out_neighbors(v).iter().filter(|&&w| !gone[w]).count())
        .collect();
    let mut sinks: BTreeSet<AgentIdx> = (0..n).filter(|&v| !gone[v] && remaining_out[v] == 0).collect();
    let mut order = Vec::with_capacity(n - excluded.len());
    while let Some(s) = sinks.pop_first() {
        gone[s] = true;
        order.push(s);
        for &u in prefs.in_neighbors(s) {
            if !gone[u] {
                remaining_out[u] -= 1;
                if remaining_out[u] == 0 {
                    sinks.insert(u);
                }
            }
        }
    }
    if gone.iter().any(|&g| !g) {
        return Err(Error::NotAcyclic);
    }
    Ok(order)
}

/// Vertices of degree exactly one.
pub fn leaves(seats: &SeatGraph) -> Vec<SeatIdx> {
    seats.leaves()
}

/// Output of [`solve_general`]: the assignment and the feedback set used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralSolution {
    pub assignment: Assignment,
    pub dfvs: DfvsResult,
}

/// Places the feedback set on leaves (smallest agent on smallest leaf), then
/// lets the remaining agents pick, in sink order, the free seat adjacent to
/// the most agents they approve (ties to the smallest seat).
///
/// Requires `|X| <= |leaves|`. With an empty feedback set the output has no
/// blocking pair at any distance.
pub fn solve_general(
    inst: &Instance,
    supplied_dfvs: Option<&[AgentIdx]>,
    budget: usize,
) -> Result<GeneralSolution> {
    let prefs = inst.prefs();
    let seats = inst.seats();
    let n = inst.n();
    let dfvs = match supplied_dfvs {
        Some(set) => {
            let mut set = set.to_vec();
            set.sort_unstable();
            set.dedup();
            DfvsResult { set, exact: false }
        }
        None => compute_dfvs(prefs, budget)?,
    };
    let order = sink_order(prefs, &dfvs.set)?;
    let leaf_seats = leaves(seats);
    if dfvs.set.len() > leaf_seats.len() {
        return Err(Error::InsufficientLeaves { dfvs: dfvs.set.len(), leaves: leaf_seats.len() });
    }

    let mut occupant: Vec<Option<AgentIdx>> = vec![None; n];
    let mut seat_of = vec![usize::MAX; n];
    for (&x, &leaf) in dfvs.set.iter().zip(&leaf_seats) {
        occupant[leaf] = Some(x);
        seat_of[x] = leaf;
    }
    for s in order {
        let score = |v: SeatIdx| {
            seats
                .neighbors(v)
                .iter()
                .filter(|&&u| occupant[u].is_some_and(|o| prefs.approves(s, o)))
                .count()
        };
        let mut best: Option<(usize, SeatIdx)> = None;
        for v in (0..n).filter(|&v| occupant[v].is_none()) {
            let sc = score(v);
            if best.is_none_or(|(b, _)| sc > b) {
                best = Some((sc, v));
            }
        }
        let (_, v) = best.expect("a free seat remains for every unseated agent");
        occupant[v] = Some(s);
        seat_of[s] = v;
    }
    Ok(GeneralSolution { assignment: Assignment::new(seat_of)?, dfvs })
}
