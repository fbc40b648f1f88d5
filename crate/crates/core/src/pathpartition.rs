//! Directed paths in the preference graph, minimal path partitions, and the
//! map laying a partition around a cycle of seats.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{AgentIdx, Assignment, Instance, PreferenceGraph};
use crate::stability::require_cycle;

/// Non-empty sequence of distinct agents, each approving the next.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedPath(Vec<AgentIdx>);

impl DirectedPath {
    pub fn new(prefs: &PreferenceGraph, vertices: Vec<AgentIdx>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::BadParameter("a directed path needs at least one agent".into()));
        }
        let mut seen = vec![false; prefs.n()];
        for &v in &vertices {
            if v >= prefs.n() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::BadParameter(format!("agent {v} repeated or out of range")));
            }
        }
        if let Some(w) = vertices.windows(2).find(|w| !prefs.approves(w[0], w[1])) {
            return Err(Error::BadParameter(format!("{} does not approve {}", w[0], w[1])));
        }
        Ok(DirectedPath(vertices))
    }

    pub fn singleton(v: AgentIdx) -> Self {
        DirectedPath(vec![v])
    }

    pub fn head(&self) -> AgentIdx {
        self.0[0]
    }

    pub fn tail(&self) -> AgentIdx {
        *self.0.last().expect("non-empty")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self) -> &[AgentIdx] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<AgentIdx> {
        self.0
    }

    /// Callers guarantee the arcs exist.
    pub(crate) fn from_raw(vertices: Vec<AgentIdx>) -> Self {
        debug_assert!(!vertices.is_empty());
        DirectedPath(vertices)
    }

    /// Whether every consecutive pair is an arc and no agent repeats.
    pub fn is_valid(&self, prefs: &PreferenceGraph) -> bool {
        DirectedPath::new(prefs, self.0.clone()).is_ok()
    }
}

/// Ordered collection of vertex-disjoint directed paths.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathPartition(Vec<DirectedPath>);

impl PathPartition {
    pub fn new(paths: Vec<DirectedPath>) -> Self {
        PathPartition(paths)
    }

    pub fn paths(&self) -> &[DirectedPath] {
        &self.0
    }

    pub fn into_paths(self) -> Vec<DirectedPath> {
        self.0
    }

    /// Number of paths.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Agents in path order.
    pub fn concatenation(&self) -> Vec<AgentIdx> {
        self.0.iter().flat_map(|p| p.vertices().iter().copied()).collect()
    }

    /// Every agent of `prefs` lies on exactly one path and every path is valid.
    pub fn covers(&self, prefs: &PreferenceGraph) -> bool {
        let mut count = vec![0usize; prefs.n()];
        for p in &self.0 {
            if !p.is_valid(prefs) {
                return false;
            }
            for &v in p.vertices() {
                count[v] += 1;
            }
        }
        count.iter().all(|&c| c == 1)
    }

    /// No path's tail approves another path's head.
    pub fn is_minimal(&self, prefs: &PreferenceGraph) -> bool {
        self.first_joinable(prefs).is_none()
    }

    fn first_joinable(&self, prefs: &PreferenceGraph) -> Option<(usize, usize)> {
        let k = self.0.len();
        (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && prefs.approves(self.0[i].tail(), self.0[j].head()))
    }

    /// Paths as lists of agent labels.
    pub fn to_value(&self, inst: &Instance) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|p| p.vertices().iter().map(|&v| Value::from(inst.label(v))).collect())
                .collect(),
        )
    }
}

/// Grows a path through `seed` inside `alive`: first forward from the tail,
/// then backward from the head, always taking the smallest available agent.
pub fn maximal_path_from(prefs: &PreferenceGraph, alive: &[bool], seed: AgentIdx) -> DirectedPath {
    debug_assert!(alive[seed]);
    let mut used = vec![false; prefs.n()];
    used[seed] = true;
    let mut forward = vec![seed];
    let free = |v: &&AgentIdx, used: &[bool]| alive[**v] && !used[**v];
    while let Some(&next) = prefs
        .out_neighbors(*forward.last().expect("non-empty"))
        .iter()
        .find(|v| free(v, &used))
    {
        used[next] = true;
        forward.push(next);
    }
    let mut backward = Vec::new();
    let mut head = seed;
    while let Some(&prev) = prefs.in_neighbors(head).iter().find(|v| free(v, &used)) {
        used[prev] = true;
        backward.push(prev);
        head = prev;
    }
    backward.reverse();
    backward.extend(forward);
    DirectedPath::from_raw(backward)
}

/// Repeatedly extracts a maximal path seeded at the smallest remaining agent.
/// The result is minimal.
pub fn initial_minimal_partition(prefs: &PreferenceGraph) -> PathPartition {
    let n = prefs.n();
    let mut alive = vec![true; n];
    let mut paths = Vec::new();
    let mut next_seed = 0;
    while next_seed < n {
        if !alive[next_seed] {
            next_seed += 1;
            continue;
        }
        let path = maximal_path_from(prefs, &alive, next_seed);
        for &v in path.vertices() {
            alive[v] = false;
        }
        paths.push(path);
    }
    PathPartition(paths)
}

/// Concatenates `P_i` and `P_j` whenever `tail(P_i) -> head(P_j)`, taking the
/// first such pair in index order and rescanning after every merge.
pub fn minimalize(prefs: &PreferenceGraph, part: PathPartition) -> PathPartition {
    let mut paths = part.0;
    loop {
        let view = PathPartition(paths);
        let Some((i, j)) = view.first_joinable(prefs) else {
            return view;
        };
        paths = view.0;
        let tail_part = std::mem::replace(&mut paths[j], DirectedPath(Vec::new()));
        paths[i].0.extend(tail_part.0);
        paths.remove(j);
    }
}

/// Inserts `s` (not on `path`) so that the result is still a directed path:
/// in front when `s` approves the head, otherwise between the first
/// consecutive `p(j) -> p(j+1)` with `p(j) -> s -> p(j+1)`.
///
/// Such a slot exists whenever `s` approves the tail and every two agents
/// approving a common agent are joined by an arc.
pub fn insert_agent(prefs: &PreferenceGraph, path: &DirectedPath, s: AgentIdx) -> Result<DirectedPath> {
    if path.vertices().contains(&s) {
        return Err(Error::BadParameter(format!("agent {s} already on the path")));
    }
    let vs = path.vertices();
    if prefs.approves(s, vs[0]) {
        let mut out = Vec::with_capacity(vs.len() + 1);
        out.push(s);
        out.extend_from_slice(vs);
        return Ok(DirectedPath(out));
    }
    let slot = vs
        .windows(2)
        .position(|w| prefs.approves(w[0], s) && prefs.approves(s, w[1]))
        .ok_or(Error::NoInsertionPoint { agent: s })?;
    let mut out = vs.to_vec();
    out.insert(slot + 1, s);
    Ok(DirectedPath(out))
}

/// Lays the paths out consecutively: the `j`-th agent of the concatenation
/// takes seat `j`.
pub fn phi(part: &PathPartition, n: usize) -> Result<Assignment> {
    let occupants = part.concatenation();
    if occupants.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: occupants.len() });
    }
    Assignment::from_occupants(occupants)
}

/// Number of cycle positions whose occupant approves the occupant
/// immediately clockwise.
pub fn right_approval_count(inst: &Instance, asg: &Assignment) -> Result<usize> {
    let n = require_cycle(inst)?;
    let prefs = inst.prefs();
    Ok((0..n)
        .filter(|&v| prefs.approves(asg.occupant(v), asg.occupant((v + 1) % n)))
        .count())
}
