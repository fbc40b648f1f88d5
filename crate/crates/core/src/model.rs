//! Domain types: preference graphs, seat graphs, instances and assignments.
//!
//! Agents are addressed by their 0-based index in label-sorted order. Labels
//! only appear at I/O boundaries.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Agent index, `0..n` in label-sorted order.
pub type AgentIdx = usize;
/// Seat vertex index, `0..n`.
pub type SeatIdx = usize;

/// All-pairs distance tables are memoized up to this many seats.
pub const DISTANCE_TABLE_LIMIT: usize = 512;

/// Directed approval graph: an arc `i -> j` means agent `i` approves agent `j`.
#[derive(Clone, PartialEq, Eq)]
pub struct PreferenceGraph {
    n: usize,
    matrix: Vec<bool>,
    out: Vec<Vec<AgentIdx>>,
    inc: Vec<Vec<AgentIdx>>,
}

impl PreferenceGraph {
    /// Builds the graph from an arc list. Duplicate arcs collapse; self arcs
    /// and out-of-range endpoints are rejected.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (AgentIdx, AgentIdx)>) -> Result<Self> {
        let mut matrix = vec![false; n * n];
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (i, j) in arcs {
            if i >= n || j >= n {
                return Err(Error::VertexOutOfRange { vertex: i.max(j), n });
            }
            if i == j {
                return Err(Error::SelfLoop(i.to_string()));
            }
            if !matrix[i * n + j] {
                matrix[i * n + j] = true;
                out[i].push(j);
                inc[j].push(i);
            }
        }
        out.iter_mut().for_each(|v| v.sort_unstable());
        inc.iter_mut().for_each(|v| v.sort_unstable());
        Ok(PreferenceGraph { n, matrix, out, inc })
    }

    pub fn empty(n: usize) -> Self {
        PreferenceGraph {
            n,
            matrix: vec![false; n * n],
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn approves(&self, i: AgentIdx, j: AgentIdx) -> bool {
        self.matrix[i * self.n + j]
    }

    /// Agents approved by `i`, ascending.
    pub fn out_neighbors(&self, i: AgentIdx) -> &[AgentIdx] {
        &self.out[i]
    }

    /// Agents approving `i`, ascending.
    pub fn in_neighbors(&self, i: AgentIdx) -> &[AgentIdx] {
        &self.inc[i]
    }

    pub fn out_degree(&self, i: AgentIdx) -> usize {
        self.out[i].len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (AgentIdx, AgentIdx)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, js)| js.iter().map(move |&j| (i, j)))
    }
}

impl fmt::Debug for PreferenceGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PreferenceGraph")
            .field("n", &self.n)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

/// How a seat graph was declared. Cycle and path seats are numbered along
/// the cycle or path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeatShape {
    Cycle,
    Path,
    Custom,
}

impl SeatShape {
    pub fn as_str(self) -> &'static str {
        match self {
            SeatShape::Cycle => "cycle",
            SeatShape::Path => "path",
            SeatShape::Custom => "custom",
        }
    }
}

impl std::str::FromStr for SeatShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(SeatShape::Cycle),
            "path" => Ok(SeatShape::Path),
            "custom" => Ok(SeatShape::Custom),
            other => Err(Error::MalformedDocument(format!("unknown seat graph shape `{other}`"))),
        }
    }
}

/// Simple undirected seat graph.
pub struct SeatGraph {
    n: usize,
    shape: SeatShape,
    adj: Vec<Vec<SeatIdx>>,
    distances: OnceLock<Vec<u32>>,
}

impl Clone for SeatGraph {
    fn clone(&self) -> Self {
        SeatGraph {
            n: self.n,
            shape: self.shape,
            adj: self.adj.clone(),
            distances: OnceLock::new(),
        }
    }
}

impl PartialEq for SeatGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.shape == other.shape && self.adj == other.adj
    }
}

impl Eq for SeatGraph {}

impl fmt::Debug for SeatGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeatGraph")
            .field("n", &self.n)
            .field("shape", &self.shape)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl SeatGraph {
    fn from_adjacency(n: usize, shape: SeatShape, mut adj: Vec<Vec<SeatIdx>>) -> Self {
        for nbrs in &mut adj {
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        SeatGraph {
            n,
            shape,
            adj,
            distances: OnceLock::new(),
        }
    }

    /// The cycle `v0 - v1 - ... - v(n-1) - v0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::ShapeMismatch(format!("a cycle needs at least 3 vertices, got {n}")));
        }
        let adj = (0..n).map(|v| vec![(v + n - 1) % n, (v + 1) % n]).collect();
        Ok(Self::from_adjacency(n, SeatShape::Cycle, adj))
    }

    /// The path `v0 - v1 - ... - v(n-1)`; requires `n >= 1`.
    pub fn path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ShapeMismatch("a path needs at least 1 vertex".into()));
        }
        let adj = (0..n)
            .map(|v| {
                let mut nb = Vec::with_capacity(2);
                if v > 0 {
                    nb.push(v - 1);
                }
                if v + 1 < n {
                    nb.push(v + 1);
                }
                nb
            })
            .collect();
        Ok(Self::from_adjacency(n, SeatShape::Path, adj))
    }

    /// An arbitrary simple graph with user-given numbering. Duplicate edges
    /// collapse.
    pub fn custom(n: usize, edges: impl IntoIterator<Item = (SeatIdx, SeatIdx)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ShapeMismatch("a seat graph needs at least 1 vertex".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::SelfLoop(format!("v{u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_adjacency(n, SeatShape::Custom, adj))
    }

    /// Builds a graph of the declared shape. For cycle and path shapes,
    /// `edges` may be omitted; when present they must be exactly the canonical
    /// edge set.
    pub fn with_shape(
        shape: SeatShape,
        n: usize,
        edges: Option<Vec<(SeatIdx, SeatIdx)>>,
    ) -> Result<Self> {
        let g = match shape {
            SeatShape::Cycle => Self::cycle(n)?,
            SeatShape::Path => Self::path(n)?,
            SeatShape::Custom => {
                let edges = edges.ok_or_else(|| {
                    Error::MalformedDocument("custom seat graph requires `edges`".into())
                })?;
                return Self::custom(n, edges);
            }
        };
        if let Some(edges) = edges {
            let given = Self::custom(n, edges)?;
            if given.adj != g.adj {
                return Err(Error::ShapeMismatch(format!(
                    "edges do not form the canonical {} on {n} vertices",
                    shape.as_str()
                )));
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> SeatShape {
        self.shape
    }

    pub fn neighbors(&self, v: SeatIdx) -> &[SeatIdx] {
        &self.adj[v]
    }

    pub fn degree(&self, v: SeatIdx) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn adjacent(&self, u: SeatIdx, v: SeatIdx) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (SeatIdx, SeatIdx)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Vertices of degree exactly one.
    pub fn leaves(&self) -> Vec<SeatIdx> {
        (0..self.n).filter(|&v| self.adj[v].len() == 1).collect()
    }

    fn bfs_from(&self, src: SeatIdx, out: &mut [u32]) {
        out.iter_mut().for_each(|d| *d = u32::MAX);
        out[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if out[w] == u32::MAX {
                    out[w] = out[u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }

    /// Shortest-path distance, `None` when `u` and `v` lie in different
    /// components.
    pub fn distance(&self, u: SeatIdx, v: SeatIdx) -> Option<u32> {
        let d = if self.n <= DISTANCE_TABLE_LIMIT {
            self.distance_table()[u * self.n + v]
        } else {
            let mut row = vec![0; self.n];
            self.bfs_from(u, &mut row);
            row[v]
        };
        (d != u32::MAX).then_some(d)
    }

    fn distance_table(&self) -> &[u32] {
        self.distances.get_or_init(|| {
            let n = self.n;
            let mut table = vec![0; n * n];
            for (src, row) in table.chunks_mut(n).enumerate() {
                self.bfs_from(src, row);
            }
            table
        })
    }

    /// Seats within `bound` hops of `v`, excluding `v` itself, ascending.
    pub fn ball(&self, v: SeatIdx, bound: u32) -> Vec<SeatIdx> {
        if bound == 1 {
            return self.adj[v].clone();
        }
        let mut dist = vec![u32::MAX; self.n];
        dist[v] = 0;
        let mut queue = VecDeque::from([v]);
        let mut found = Vec::new();
        while let Some(u) = queue.pop_front() {
            if dist[u] == bound {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    found.push(w);
                    queue.push_back(w);
                }
            }
        }
        found.sort_unstable();
        found
    }
}

/// Bijection from agents to seats, stored with its inverse.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    seat_of: Vec<SeatIdx>,
    occupant: Vec<AgentIdx>,
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Assignment{:?}", self.seat_of)
    }
}

impl Assignment {
    /// `seat_of[i]` is the seat of agent `i`; must be a permutation of `0..n`.
    pub fn new(seat_of: Vec<SeatIdx>) -> Result<Self> {
        let n = seat_of.len();
        let mut occupant = vec![usize::MAX; n];
        for (agent, &seat) in seat_of.iter().enumerate() {
            if seat >= n {
                return Err(Error::InvalidAssignment(format!("seat {seat} out of range")));
            }
            if occupant[seat] != usize::MAX {
                return Err(Error::InvalidAssignment(format!("seat {seat} assigned twice")));
            }
            occupant[seat] = agent;
        }
        Ok(Assignment { seat_of, occupant })
    }

    /// `occupants[v]` is the agent sitting at seat `v`.
    pub fn from_occupants(occupants: Vec<AgentIdx>) -> Result<Self> {
        let inv = Assignment::new(occupants)?;
        Ok(Assignment {
            seat_of: inv.occupant,
            occupant: inv.seat_of,
        })
    }

    pub fn identity(n: usize) -> Self {
        Assignment {
            seat_of: (0..n).collect(),
            occupant: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.seat_of.len()
    }

    #[inline]
    pub fn seat(&self, agent: AgentIdx) -> SeatIdx {
        self.seat_of[agent]
    }

    #[inline]
    pub fn occupant(&self, seat: SeatIdx) -> AgentIdx {
        self.occupant[seat]
    }

    pub fn seats(&self) -> &[SeatIdx] {
        &self.seat_of
    }

    pub fn occupants(&self) -> &[AgentIdx] {
        &self.occupant
    }

    /// The assignment with the seats of `i` and `j` exchanged.
    pub fn swap(&self, i: AgentIdx, j: AgentIdx) -> Result<Assignment> {
        if i == j {
            return Err(Error::SameAgent(i));
        }
        let mut next = self.clone();
        next.swap_in_place(i, j);
        Ok(next)
    }

    pub(crate) fn swap_in_place(&mut self, i: AgentIdx, j: AgentIdx) {
        let (si, sj) = (self.seat_of[i], self.seat_of[j]);
        self.seat_of.swap(i, j);
        self.occupant[si] = j;
        self.occupant[sj] = i;
    }
}

/// A validated problem instance. `agents` is sorted and unique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    agents: Vec<String>,
    prefs: PreferenceGraph,
    seats: SeatGraph,
}

impl Instance {
    /// `agents` must be sorted, unique and non-empty labels; sizes must agree.
    pub fn new(agents: Vec<String>, prefs: PreferenceGraph, seats: SeatGraph) -> Result<Self> {
        for w in agents.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateAgent(w[0].clone()));
            }
            if w[0] > w[1] {
                return Err(Error::BadParameter("agent labels must be sorted".into()));
            }
        }
        if agents.iter().any(String::is_empty) {
            return Err(Error::EmptyLabel);
        }
        if prefs.n() != agents.len() {
            return Err(Error::SizeMismatch { expected: agents.len(), found: prefs.n() });
        }
        if seats.n() != agents.len() {
            return Err(Error::SizeMismatch { expected: agents.len(), found: seats.n() });
        }
        Ok(Instance { agents, prefs, seats })
    }

    /// Builds an instance from labels in any order and labelled arcs.
    pub fn from_labels<S: AsRef<str>>(
        labels: &[S],
        arcs: &[(S, S)],
        seats: SeatGraph,
    ) -> Result<Self> {
        let mut agents: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        agents.sort();
        if let Some(w) = agents.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateAgent(w[0].clone()));
        }
        let index = |l: &str| {
            agents
                .binary_search_by(|a| a.as_str().cmp(l))
                .map_err(|_| Error::UnknownAgent(l.to_owned()))
        };
        let mut idx_arcs = Vec::with_capacity(arcs.len());
        for (a, b) in arcs {
            let (a, b) = (a.as_ref(), b.as_ref());
            let (i, j) = (index(a)?, index(b)?);
            if i == j {
                return Err(Error::SelfLoop(a.to_owned()));
            }
            idx_arcs.push((i, j));
        }
        let prefs = PreferenceGraph::new(agents.len(), idx_arcs)?;
        Instance::new(agents, prefs, seats)
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn label(&self, i: AgentIdx) -> &str {
        &self.agents[i]
    }

    pub fn agent_index(&self, label: &str) -> Result<AgentIdx> {
        self.agents
            .binary_search_by(|a| a.as_str().cmp(label))
            .map_err(|_| Error::UnknownAgent(label.to_owned()))
    }

    pub fn prefs(&self) -> &PreferenceGraph {
        &self.prefs
    }

    pub fn seats(&self) -> &SeatGraph {
        &self.seats
    }

    /// Same agents and preferences on a different seat graph.
    pub fn with_seats(&self, seats: SeatGraph) -> Result<Instance> {
        Instance::new(self.agents.clone(), self.prefs.clone(), seats)
    }

    /// Errors unless `asg` is a bijection onto this instance's seats.
    pub fn validate_assignment(&self, asg: &Assignment) -> Result<()> {
        if asg.n() != self.n() {
            return Err(Error::SizeMismatch { expected: self.n(), found: asg.n() });
        }
        Ok(())
    }
}

/// Occupants of the seats adjacent to `agent`'s seat, ascending by agent index.
pub fn neighbors(asg: &Assignment, seats: &SeatGraph, agent: AgentIdx) -> BTreeSet<AgentIdx> {
    seats
        .neighbors(asg.seat(agent))
        .iter()
        .map(|&v| asg.occupant(v))
        .collect()
}
