//! Graph representation and the query vocabulary of the general graph model.
//!
//! Vertices are 0-based ids. Neighbor indices in [`Query::Neighbor`] are
//! 1-based, matching a per-vertex bijection `Γ(v) → {1..deg(v)}`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryKind {
    Degree,
    Neighbor,
    Pair,
    RandomEdge,
}

impl QueryKind {
    pub const ALL: [QueryKind; 4] = [
        QueryKind::Degree,
        QueryKind::Neighbor,
        QueryKind::Pair,
        QueryKind::RandomEdge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            QueryKind::Degree => "degree",
            QueryKind::Neighbor => "neighbor",
            QueryKind::Pair => "pair",
            QueryKind::RandomEdge => "random_edge",
        }
    }
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Query {
    Degree(VertexId),
    /// `Neighbor(v, i)`: the `i`-th neighbor of `v`, with `i` starting at 1.
    Neighbor(VertexId, usize),
    Pair(VertexId, VertexId),
    RandomEdge,
}

impl Query {
    pub fn kind(&self) -> QueryKind {
        match self {
            Query::Degree(_) => QueryKind::Degree,
            Query::Neighbor(..) => QueryKind::Neighbor,
            Query::Pair(..) => QueryKind::Pair,
            Query::RandomEdge => QueryKind::RandomEdge,
        }
    }

    /// Checks vertex ids and the neighbor index against a vertex count.
    pub fn check(&self, n: usize) -> Result<(), QueryError> {
        let in_range = |v: VertexId| {
            if v < n {
                Ok(())
            } else {
                Err(QueryError::VertexOutOfRange { v, n })
            }
        };
        match *self {
            Query::Degree(v) => in_range(v),
            Query::Neighbor(v, i) => {
                in_range(v)?;
                if i == 0 {
                    Err(QueryError::NeighborIndexOutOfRange { i, n })
                } else {
                    Ok(())
                }
            }
            Query::Pair(u, v) => {
                in_range(u)?;
                in_range(v)
            }
            Query::RandomEdge => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QueryAnswer {
    DegreeIs(usize),
    /// `None` is the ∅ answer: the index exceeds the degree.
    NeighborIs(Option<VertexId>),
    PairIs(bool),
    /// Lower id first.
    EdgeIs(VertexId, VertexId),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: VertexId, n: usize },
    #[error("neighbor index {i} is not 1-based (graph on {n} vertices)")]
    NeighborIndexOutOfRange { i: usize, n: usize },
    #[error("graph has no edges")]
    NoEdges,
    #[error("{kind} queries are not supported by {oracle}")]
    Unsupported { kind: QueryKind, oracle: &'static str },
    #[error("query budget of {budget} exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("capability violation: {0}")]
    CapabilityViolation(String),
}

/// Query access to a graph.
///
/// Answers are deterministic functions of the graph except `RandomEdge`,
/// which also consumes the oracle's randomness. Every answered query bumps
/// the counter by one.
pub trait GraphOracle {
    fn vertex_count(&self) -> usize;

    fn supports(&self, kind: QueryKind) -> bool;

    fn query(&mut self, q: Query) -> Result<QueryAnswer, QueryError>;

    fn queries_answered(&self) -> u64;

    fn degree(&mut self, v: VertexId) -> Result<usize, QueryError> {
        match self.query(Query::Degree(v))? {
            QueryAnswer::DegreeIs(d) => Ok(d),
            other => unreachable!("degree query answered with {other:?}"),
        }
    }

    fn neighbor(&mut self, v: VertexId, i: usize) -> Result<Option<VertexId>, QueryError> {
        match self.query(Query::Neighbor(v, i))? {
            QueryAnswer::NeighborIs(w) => Ok(w),
            other => unreachable!("neighbor query answered with {other:?}"),
        }
    }

    fn pair(&mut self, u: VertexId, v: VertexId) -> Result<bool, QueryError> {
        match self.query(Query::Pair(u, v))? {
            QueryAnswer::PairIs(b) => Ok(b),
            other => unreachable!("pair query answered with {other:?}"),
        }
    }

    fn random_edge(&mut self) -> Result<(VertexId, VertexId), QueryError> {
        match self.query(Query::RandomEdge)? {
            QueryAnswer::EdgeIs(u, v) => Ok((u, v)),
            other => unreachable!("random edge query answered with {other:?}"),
        }
    }
}

/// A simple undirected graph with an explicit neighbor ordering per vertex.
///
/// The ordering of `adjacency[v]` realizes the bijection onto `1..=deg(v)`.
/// Construction does not validate; call [`validate_graph`] for that.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitGraph {
    adjacency: Vec<Vec<VertexId>>,
    sorted: Vec<Vec<VertexId>>,
}

impl ExplicitGraph {
    pub fn from_adjacency(adjacency: Vec<Vec<VertexId>>) -> Self {
        let sorted = adjacency
            .iter()
            .map(|list| {
                let mut s = list.clone();
                s.sort_unstable();
                s
            })
            .collect();
        ExplicitGraph { adjacency, sorted }
    }

    /// Builds a graph from an undirected edge list; each vertex's neighbors
    /// are ordered by ascending id. Self-loops and repeated edges are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Self::from_adjacency(adjacency)
    }

    pub fn empty(n: usize) -> Self {
        Self::from_adjacency(vec![Vec::new(); n])
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of unordered edges (half the degree sum).
    pub fn m(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn sorted_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.sorted[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let (a, b) = if self.sorted[u].len() <= self.sorted[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.sorted[a].binary_search(&b).is_ok()
    }

    pub fn adjacency(&self) -> &[Vec<VertexId>] {
        &self.adjacency
    }

    /// Unordered edges `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.m());
        for (u, list) in self.sorted.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn degree_table(&self) -> DegreeTable {
        DegreeTable::from_degrees(&self.adjacency.iter().map(Vec::len).collect::<Vec<_>>())
    }

    pub fn without_edge(&self, u: VertexId, v: VertexId) -> Self {
        let mut adjacency = self.adjacency.clone();
        adjacency[u].retain(|&w| w != v);
        adjacency[v].retain(|&w| w != u);
        Self::from_adjacency(adjacency)
    }

    /// Serializes to the edge-list text format: a header `n <count>` followed
    /// by one `v: w1 w2 ... wd` line per vertex in neighbor order.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n());
        for (v, list) in self.adjacency.iter().enumerate() {
            out.push_str(&v.to_string());
            out.push(':');
            for w in list {
                out.push(' ');
                out.push_str(&w.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self, EdgeListError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(EdgeListError::MissingHeader)?;
        let n: usize = header
            .strip_prefix("n ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or(EdgeListError::MissingHeader)?;
        let mut adjacency = Vec::with_capacity(n);
        for (lineno, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let bad = || EdgeListError::BadLine { line: lineno + 1 };
            let (head, rest) = line.split_once(':').ok_or_else(bad)?;
            let v: usize = head.trim().parse().map_err(|_| bad())?;
            if v != adjacency.len() {
                return Err(EdgeListError::OutOfOrder { line: lineno + 1, expected: adjacency.len(), found: v });
            }
            let list = rest
                .split_whitespace()
                .map(|tok| tok.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(&w) = list.iter().find(|&&w| w >= n) {
                return Err(EdgeListError::VertexOutOfRange { line: lineno + 1, v: w, n });
            }
            adjacency.push(list);
        }
        if adjacency.len() != n {
            return Err(EdgeListError::VertexCount { expected: n, found: adjacency.len() });
        }
        Ok(Self::from_adjacency(adjacency))
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EdgeListError {
    #[error("missing or malformed `n <count>` header")]
    MissingHeader,
    #[error("line {line}: expected `v: w1 w2 ...`")]
    BadLine { line: usize },
    #[error("line {line}: expected vertex {expected}, found {found}")]
    OutOfOrder { line: usize, expected: usize, found: usize },
    #[error("line {line}: vertex {v} out of range for n = {n}")]
    VertexOutOfRange { line: usize, v: usize, n: usize },
    #[error("header declares {expected} vertices but {found} lines follow")]
    VertexCount { expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "finding", rename_all = "snake_case")]
pub enum ValidationFinding {
    /// `v` lists `w` but `w` does not list `v`.
    Asymmetric { v: VertexId, w: VertexId },
    SelfLoop { v: VertexId },
    Duplicate { v: VertexId, w: VertexId },
    OutOfRange { v: VertexId, w: VertexId },
}

/// Reports every violated invariant of a simple undirected graph with
/// ordered neighbor lists. An empty report means the graph is valid.
pub fn validate_graph(g: &ExplicitGraph) -> Vec<ValidationFinding> {
    let n = g.n();
    let mut findings = Vec::new();
    for v in 0..n {
        let sorted = g.sorted_neighbors(v);
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                findings.push(ValidationFinding::Duplicate { v, w: pair[0] });
            }
        }
        for &w in g.neighbors(v) {
            if w >= n {
                findings.push(ValidationFinding::OutOfRange { v, w });
            } else if w == v {
                findings.push(ValidationFinding::SelfLoop { v });
            } else if g.sorted_neighbors(w).binary_search(&v).is_err() {
                findings.push(ValidationFinding::Asymmetric { v, w });
            }
        }
    }
    findings
}

/// Answers a query against a materialized graph. `rng` is consumed only by
/// `RandomEdge`, which is uniform over the unordered edges.
pub fn answer_on_explicit<R: Rng + ?Sized>(
    g: &ExplicitGraph,
    q: Query,
    rng: &mut R,
) -> Result<QueryAnswer, QueryError> {
    q.check(g.n())?;
    Ok(match q {
        Query::Degree(v) => QueryAnswer::DegreeIs(g.degree(v)),
        Query::Neighbor(v, i) => QueryAnswer::NeighborIs(g.neighbors(v).get(i - 1).copied()),
        Query::Pair(u, v) => QueryAnswer::PairIs(u != v && g.has_edge(u, v)),
        Query::RandomEdge => {
            let table = g.degree_table();
            let (u, v) = sample_edge_by_degrees(&table, |v, i| Ok(g.neighbors(v)[i - 1]), rng)?;
            QueryAnswer::EdgeIs(u, v)
        }
    })
}

/// A run-length degree table: consecutive vertex ranges sharing one degree.
///
/// Structured constructions describe their (input-independent) degree
/// sequences in a handful of runs, so sampling proportional to degree never
/// needs a per-vertex table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeTable {
    runs: Vec<DegreeRun>,
    #[serde(skip)]
    cumulative: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRun {
    pub start: VertexId,
    pub len: usize,
    pub degree: usize,
}

impl DegreeTable {
    /// Runs must be contiguous, starting at vertex 0.
    pub fn from_runs(runs: impl IntoIterator<Item = DegreeRun>) -> Self {
        let mut merged: Vec<DegreeRun> = Vec::new();
        for run in runs.into_iter().filter(|r| r.len > 0) {
            let next_start = merged.last().map_or(0, |r| r.start + r.len);
            assert_eq!(run.start, next_start, "degree runs must be contiguous");
            match merged.last_mut() {
                Some(last) if last.degree == run.degree => last.len += run.len,
                _ => merged.push(run),
            }
        }
        let mut total = 0u64;
        let cumulative = merged
            .iter()
            .map(|r| {
                total += (r.len as u64) * (r.degree as u64);
                total
            })
            .collect();
        DegreeTable { runs: merged, cumulative }
    }

    pub fn from_degrees(degrees: &[usize]) -> Self {
        Self::from_runs(
            degrees
                .iter()
                .enumerate()
                .map(|(v, &degree)| DegreeRun { start: v, len: 1, degree }),
        )
    }

    pub fn runs(&self) -> &[DegreeRun] {
        &self.runs
    }

    pub fn vertex_count(&self) -> usize {
        self.runs.last().map_or(0, |r| r.start + r.len)
    }

    pub fn total_degree(&self) -> u64 {
        self.cumulative.last().copied().unwrap_or(0)
    }

    pub fn degree_of(&self, v: VertexId) -> Option<usize> {
        let idx = self.runs.partition_point(|r| r.start + r.len <= v);
        self.runs.get(idx).filter(|r| r.start <= v).map(|r| r.degree)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.runs
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.degree, r.len))
            .collect()
    }

    /// Draws a uniform `(vertex, index)` slot among all `Σ deg(v)` slots.
    fn sample_slot<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<(VertexId, usize)> {
        let total = self.total_degree();
        if total == 0 {
            return None;
        }
        let draw = rng.gen_range(0..total);
        let idx = self.cumulative.partition_point(|&c| c <= draw);
        let run = self.runs[idx];
        let before = if idx == 0 { 0 } else { self.cumulative[idx - 1] };
        let offset = draw - before;
        let degree = run.degree as u64;
        Some((run.start + (offset / degree) as usize, (offset % degree) as usize + 1))
    }
}

/// Samples an edge by choosing a vertex with probability proportional to
/// its degree, then a uniform index into its neighbor list.
///
/// Each unordered edge `{u, v}` is reached through `(u, i)` and `(v, j)`,
/// so its probability is `deg(u)/2m · 1/deg(u) + deg(v)/2m · 1/deg(v) = 1/m`.
pub fn sample_edge_by_degrees<R, F>(
    degrees: &DegreeTable,
    mut neighbor: F,
    rng: &mut R,
) -> Result<(VertexId, VertexId), QueryError>
where
    R: Rng + ?Sized,
    F: FnMut(VertexId, usize) -> Result<VertexId, QueryError>,
{
    let (v, i) = degrees.sample_slot(rng).ok_or(QueryError::NoEdges)?;
    let w = neighbor(v, i)?;
    Ok((v.min(w), v.max(w)))
}

/// A [`GraphOracle`] over a materialized graph.
pub struct ExplicitOracle<'g, R> {
    graph: &'g ExplicitGraph,
    rng: R,
    answered: u64,
}

impl<'g, R: Rng> ExplicitOracle<'g, R> {
    pub fn new(graph: &'g ExplicitGraph, rng: R) -> Self {
        ExplicitOracle { graph, rng, answered: 0 }
    }
}

impl<R: Rng> GraphOracle for ExplicitOracle<'_, R> {
    fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    fn supports(&self, _kind: QueryKind) -> bool {
        true
    }

    fn query(&mut self, q: Query) -> Result<QueryAnswer, QueryError> {
        let answer = answer_on_explicit(self.graph, q, &mut self.rng)?;
        self.answered += 1;
        Ok(answer)
    }

    fn queries_answered(&self) -> u64 {
        self.answered
    }
}
