//! Brute-force certificates for the gap claims, in exact arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::pow;
use crate::embeddings::{materialize, EmbeddingInstance, EmbeddingParams};
use crate::graph::{validate_graph, ExplicitGraph, VertexId};
use crate::inputs::{BitVector, PromisePair, Side};

pub type Exact = Ratio<u128>;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("{what} needs n ≤ {limit}, graph has {n} vertices")]
    TooLarge { what: &'static str, n: usize, limit: usize },
    #[error("search budget of {budget} nodes exhausted after finding {partial} cliques")]
    BudgetExceeded { budget: u64, partial: u64 },
    #[error("distributions are over different universes")]
    UniverseMismatch,
    #[error("empty distribution")]
    Empty,
}

/// Number of triangles, each counted once.
pub fn count_triangles(g: &ExplicitGraph) -> u64 {
    let mut count = 0;
    for u in 0..g.n() {
        let up: Vec<VertexId> = g.sorted_neighbors(u).iter().copied().filter(|&v| v > u).collect();
        for (a, &v) in up.iter().enumerate() {
            for &w in &up[a + 1..] {
                if g.has_edge(v, w) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Number of `r`-cliques, by backtracking over increasing vertex ids.
/// `budget` caps the number of search nodes.
pub fn count_r_cliques(g: &ExplicitGraph, r: usize, budget: Option<u64>) -> Result<u64, VerifyError> {
    assert!(r >= 1, "clique size must be positive");
    let eligible: Vec<VertexId> = (0..g.n()).filter(|&v| g.degree(v) + 1 >= r).collect();
    let mut search = CliqueSearch { g, r, budget, explored: 0, found: 0 };
    for &v in &eligible {
        let cands: Vec<VertexId> = g
            .sorted_neighbors(v)
            .iter()
            .copied()
            .filter(|&w| w > v && g.degree(w) + 1 >= r)
            .collect();
        search.extend(1, &cands)?;
    }
    Ok(search.found)
}

struct CliqueSearch<'g> {
    g: &'g ExplicitGraph,
    r: usize,
    budget: Option<u64>,
    explored: u64,
    found: u64,
}

impl CliqueSearch<'_> {
    fn extend(&mut self, size: usize, cands: &[VertexId]) -> Result<(), VerifyError> {
        self.explored += 1;
        if let Some(budget) = self.budget {
            if self.explored > budget {
                return Err(VerifyError::BudgetExceeded { budget, partial: self.found });
            }
        }
        if size == self.r {
            self.found += 1;
            return Ok(());
        }
        if size + cands.len() < self.r {
            return Ok(());
        }
        for (a, &v) in cands.iter().enumerate() {
            let next: Vec<VertexId> = cands[a + 1..].iter().copied().filter(|&w| self.g.has_edge(v, w)).collect();
            self.extend(size + 1, &next)?;
        }
        Ok(())
    }
}

pub fn connected_components(g: &ExplicitGraph) -> usize {
    let mut seen = vec![false; g.n()];
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        stack.push(s);
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MinCut {
    /// Global edge min cut; 0 iff disconnected.
    pub value: u64,
    pub components: usize,
}

/// Global minimum edge cut by Stoer–Wagner; short-circuits to 0 on a
/// disconnected graph.
pub fn min_cut(g: &ExplicitGraph) -> MinCut {
    let components = connected_components(g);
    let n = g.n();
    if components != 1 || n < 2 {
        return MinCut { value: 0, components };
    }
    let mut w = vec![vec![0u64; n]; n];
    for (u, list) in g.adjacency().iter().enumerate() {
        for &v in list {
            w[u][v] = 1;
        }
    }
    let mut alive: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    while alive.len() > 1 {
        let mut weight = vec![0u64; n];
        let mut added = vec![false; n];
        let mut prev = alive[0];
        let mut last = alive[0];
        for step in 0..alive.len() {
            let next = *alive
                .iter()
                .filter(|&&v| !added[v])
                .max_by_key(|&&v| (weight[v], std::cmp::Reverse(v)))
                .expect("unadded vertex remains");
            added[next] = true;
            if step == alive.len() - 1 {
                best = best.min(weight[next]);
                prev = last;
                last = next;
                break;
            }
            last = next;
            for &v in &alive {
                if !added[v] {
                    weight[v] += w[next][v];
                }
            }
        }
        // merge `last` into `prev`
        for &v in &alive {
            w[prev][v] += w[last][v];
            w[v][prev] = w[prev][v];
        }
        w[prev][prev] = 0;
        alive.retain(|&v| v != last);
    }
    MinCut { value: best, components }
}

/// `M_s = Σ_v deg(v)^s`.
pub fn moment(g: &ExplicitGraph, s: u32) -> u128 {
    crate::embeddings::moment_of(g, s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensestSubgraph {
    /// `max ⌈m_S / (|S| − 1)⌉`, the arboricity.
    pub arboricity: u64,
    /// The subset attaining the maximum.
    pub witness: Vec<VertexId>,
    #[serde(serialize_with = "ser_ratio64")]
    pub density: Ratio<u64>,
}

pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Exact arboricity by enumerating every vertex subset of size at least 2.
pub fn densest_subgraph_bruteforce(g: &ExplicitGraph) -> Result<DensestSubgraph, VerifyError> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(VerifyError::TooLarge { what: "densest-subgraph enumeration", n, limit: BRUTE_FORCE_LIMIT });
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let mut best = DensestSubgraph { arboricity: 0, witness: Vec::new(), density: Ratio::from_integer(0) };
    let mut best_mask = 0u32;
    for set in 1u32..(1u32 << n).max(1) {
        let size = set.count_ones() as u64;
        if size < 2 {
            continue;
        }
        let twice: u64 = (0..n).filter(|&v| set & 1 << v != 0).map(|v| (masks[v] & set).count_ones() as u64).sum();
        let density = Ratio::new(twice / 2, size - 1);
        if density > best.density {
            best.density = density;
            best_mask = set;
        }
    }
    best.arboricity = best.density.ceil().to_integer();
    best.witness = (0..n).filter(|&v| best_mask & 1 << v != 0).collect();
    Ok(best)
}

/// Bounds `lower ≤ α(G) ≤ upper` from a min-degree peel: every peel suffix
/// is a subgraph (Nash–Williams lower bound), and orienting each edge toward
/// the later-peeled endpoint splits the edges into `degeneracy` forests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ArboricityBounds {
    pub lower: u64,
    pub upper: u64,
}

pub fn arboricity_bounds(g: &ExplicitGraph) -> ArboricityBounds {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<VertexId>> = vec![Vec::new(); max_deg + 1];
    for v in 0..n {
        buckets[deg[v]].push(v);
    }
    let mut edges_left = g.m() as u64;
    let mut left = n as u64;
    let mut degeneracy = 0usize;
    let mut lower = Ratio::from_integer(0u64);
    let mut cursor = 0usize;
    for _ in 0..n {
        if left >= 2 {
            lower = lower.max(Ratio::new(edges_left, left - 1));
        }
        cursor = cursor.saturating_sub(1);
        let v = loop {
            while buckets[cursor].is_empty() {
                cursor += 1;
            }
            let v = buckets[cursor].pop().expect("nonempty bucket");
            if !removed[v] && deg[v] == cursor {
                break v;
            }
        };
        degeneracy = degeneracy.max(cursor);
        removed[v] = true;
        left -= 1;
        edges_left -= deg[v] as u64;
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
                buckets[deg[w]].push(w);
            }
        }
    }
    ArboricityBounds { lower: lower.ceil().to_integer(), upper: degeneracy as u64 }
}

/// A finite distribution with exact probabilities.
pub type Distribution<K> = BTreeMap<K, Exact>;

pub fn uniform<K: Ord + Clone>(support: &[K]) -> Distribution<K> {
    let p = Exact::new(1, support.len() as u128);
    support.iter().map(|k| (k.clone(), p)).collect()
}

/// The empirical distribution of a histogram, over the histogram's keys.
pub fn empirical<K: Ord + Clone>(counts: &BTreeMap<K, u64>) -> Distribution<K> {
    let total: u64 = counts.values().sum();
    counts.iter().map(|(k, &c)| (k.clone(), Exact::new(c as u128, total as u128))).collect()
}

/// `½ Σ |p(k) − q(k)|`. Both distributions must name the same universe
/// (absent keys count as probability 0 only if present in the other as 0).
pub fn tvd<K: Ord>(p: &Distribution<K>, q: &Distribution<K>) -> Result<Exact, VerifyError> {
    if p.is_empty() || q.is_empty() {
        return Err(VerifyError::Empty);
    }
    if p.len() != q.len() || p.keys().zip(q.keys()).any(|(a, b)| a != b) {
        return Err(VerifyError::UniverseMismatch);
    }
    let sum = p
        .values()
        .zip(q.values())
        .map(|(&a, &b)| if a > b { a - b } else { b - a })
        .fold(Exact::from_integer(0), |acc, d| acc + d);
    Ok(sum / 2)
}

/// Extends a histogram so that every key in `support` is present.
pub fn fill_support<K: Ord + Clone>(counts: &mut BTreeMap<K, u64>, support: &[K]) {
    for k in support {
        counts.entry(k.clone()).or_insert(0);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "quantity", rename_all = "snake_case")]
pub enum Quantity {
    VertexCount,
    EdgeCount,
    TriangleCount,
    RCliqueCount { r: usize },
    MinCut,
    ConnectedComponents,
    Moment { s: u32 },
    DensestSubgraphRatio,
    Tvd,
    /// Structural validity of the graph: number of findings.
    ValidationFindings,
}

/// The predicate a value must satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    Eq(Exact),
    Ge(Exact),
    Le(Exact),
    /// `M_s/n^s ≤ α ≤ M_s^{1/(s+1)}` for an arboricity known to lie in
    /// `[α, upper]`.
    AlphaBounds { s: u32, n: u128, moment: u128, upper: u128 },
}

impl Claim {
    pub fn holds(&self, value: &Exact) -> bool {
        match self {
            Claim::Eq(b) => value == b,
            Claim::Ge(b) => value >= b,
            Claim::Le(b) => value <= b,
            Claim::AlphaBounds { s, n, moment, upper } => {
                let lower = value.to_integer();
                let lower_side = pow(*n as u64, *s)
                    .and_then(|ns| ns.checked_mul(lower))
                    .is_none_or(|bound| *moment <= bound);
                let upper_side = pow(*upper as u64, s + 1).is_some_and(|p| p <= *moment);
                value.is_integer() && lower_side && upper_side
            }
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Eq(b) => write!(f, "== {b}"),
            Claim::Ge(b) => write!(f, ">= {b}"),
            Claim::Le(b) => write!(f, "<= {b}"),
            Claim::AlphaBounds { s, n, moment, upper } => write!(
                f,
                "M_s/n^s <= alpha, alpha_upper^(s+1) <= M_s (s = {s}, n = {n}, M_s = {moment}, alpha_upper = {upper})"
            ),
        }
    }
}

impl Serialize for Claim {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One check: `pass` is always `claim.holds(value)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    #[serde(flatten)]
    pub quantity: Quantity,
    #[serde(serialize_with = "ser_exact")]
    pub value: Exact,
    pub claim: Claim,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, quantity: Quantity, value: Exact, claim: Claim) -> Self {
        let pass = claim.holds(&value);
        VerificationReport { check: check.into(), quantity, value, claim, pass, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// A check that could not run; never passes.
    pub fn refused(check: impl Into<String>, quantity: Quantity, reason: impl Into<String>) -> Self {
        VerificationReport {
            check: check.into(),
            quantity,
            value: Exact::from_integer(0),
            claim: Claim::Eq(Exact::from_integer(0)),
            pass: false,
            note: Some(format!("refused: {}", reason.into())),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn int(v: impl Into<u128>) -> Exact {
    Exact::from_integer(v.into())
}

fn ser_exact<S: Serializer>(v: &Exact, s: S) -> Result<S::Ok, S::Error> {
    if v.is_integer() {
        s.serialize_u128(v.to_integer())
    } else {
        s.collect_str(v)
    }
}

fn ser_ratio64<S: Serializer>(v: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Checks the two-sided arboricity claim. `alpha` is exact at `n ≤ 20`
/// (brute force) and otherwise the interval from [`arboricity_bounds`].
pub fn check_alpha_bounds(g: &ExplicitGraph, s: u32, alpha: u64) -> VerificationReport {
    check_alpha_interval(g, s, alpha, alpha)
}

fn check_alpha_interval(g: &ExplicitGraph, s: u32, lower: u64, upper: u64) -> VerificationReport {
    let claim = Claim::AlphaBounds { s, n: g.n() as u128, moment: moment(g, s), upper: upper as u128 };
    VerificationReport::new("alpha_bounds", Quantity::DensestSubgraphRatio, int(lower), claim)
}

/// The arboricity claim with `α` from enumeration when `n ≤ 20`, otherwise
/// from the peel bounds (sound but possibly inconclusive).
pub fn check_alpha_bounds_auto(g: &ExplicitGraph, s: u32) -> VerificationReport {
    match densest_subgraph_bruteforce(g) {
        Ok(d) => check_alpha_bounds(g, s, d.arboricity).with_note("alpha by Nash-Williams enumeration"),
        Err(_) => {
            let b = arboricity_bounds(g);
            check_alpha_interval(g, s, b.lower, b.upper)
                .with_note(format!("alpha in [{}, {}] by peel witness", b.lower, b.upper))
        }
    }
}

/// Runs every gap check for `inst`'s construction against `g`, which is
/// normally `materialize(inst)` but may be any graph claiming to be it.
pub fn verify_instance(inst: &EmbeddingInstance, g: &ExplicitGraph) -> Vec<VerificationReport> {
    let side = inst.side();
    let hit = side == Side::Intersecting;
    let hits = inst.inputs().intersection_size() as u128;
    let mut out = Vec::new();
    let findings = validate_graph(g).len() as u128;
    out.push(VerificationReport::new("simple_undirected", Quantity::ValidationFindings, int(findings), Claim::Eq(int(0u8))));
    out.push(VerificationReport::new("vertex_count", Quantity::VertexCount, int(g.n() as u128), Claim::Eq(int(inst.vertex_count() as u128))));
    let m = int(g.m() as u128);
    match inst.params() {
        EmbeddingParams::CliqueHiding(p) => {
            out.push(VerificationReport::new("edge_count", Quantity::EdgeCount, m, Claim::Eq(int(inst.edge_count()))));
            let zero = zero_instance(inst);
            if p.target == 2 {
                let base = int(zero.edge_count());
                let claim = if hit { Claim::Ge(base + int(p.mu)) } else { Claim::Eq(base) };
                out.push(VerificationReport::new("hidden_gap", Quantity::EdgeCount, m, claim));
            } else {
                let q = Quantity::RCliqueCount { r: p.target };
                match (count_r_cliques(g, p.target, Some(CLIQUE_BUDGET)), materialize(&zero)) {
                    (Ok(c), Ok(z)) => {
                        let base = count_r_cliques(&z, p.target, Some(CLIQUE_BUDGET)).unwrap_or(0);
                        let claim = if hit { Claim::Ge(int(base) + int(p.mu)) } else { Claim::Eq(int(base)) };
                        out.push(VerificationReport::new("hidden_gap", q, int(c), claim));
                    }
                    (Err(e), _) => out.push(VerificationReport::refused("hidden_gap", q, e.to_string())),
                    (_, Err(e)) => out.push(VerificationReport::refused("hidden_gap", q, e.to_string())),
                }
            }
        }
        EmbeddingParams::Triangle(p) => {
            let l = p.l as u128;
            let formula = 2 * l * l + 2 * l * p.s_size as u128;
            out.push(VerificationReport::new("edge_count", Quantity::EdgeCount, m, Claim::Eq(int(formula))));
            let expect = if hit { p.intersecting_triangles() as u128 } else { 0 };
            out.push(VerificationReport::new("triangles", Quantity::TriangleCount, int(count_triangles(g)), Claim::Eq(int(expect))));
        }
        EmbeddingParams::RClique(p) => {
            out.push(VerificationReport::new("edge_count", Quantity::EdgeCount, m, Claim::Eq(int(inst.edge_count()))));
            let q = Quantity::RCliqueCount { r: p.r };
            let expect = if hit { p.intersecting_cliques() as u128 } else { 0 };
            match count_r_cliques(g, p.r, Some(CLIQUE_BUDGET)) {
                Ok(c) => out.push(VerificationReport::new("r_cliques", q, int(c), Claim::Eq(int(expect)))),
                Err(e) => out.push(VerificationReport::refused("r_cliques", q, e.to_string())),
            }
        }
        EmbeddingParams::Connectivity(p) => {
            out.push(VerificationReport::new("edge_count", Quantity::EdgeCount, m, Claim::Eq(int(p.edge_count()))));
            let cut = min_cut(g);
            if hit {
                out.push(VerificationReport::new("min_cut", Quantity::MinCut, int(cut.value), Claim::Ge(int(p.k as u128))));
            } else {
                out.push(VerificationReport::new("components", Quantity::ConnectedComponents, int(cut.components as u128), Claim::Ge(int(2u8))));
            }
        }
        EmbeddingParams::DegreeOnly(p) => {
            let per = (p.vertices * p.k / 3) as u128;
            let expect = if hit { 2 * per } else { per };
            out.push(VerificationReport::new("edge_count", Quantity::EdgeCount, m, Claim::Eq(int(expect))));
        }
        EmbeddingParams::MomentsHiding(p) => {
            let q = Quantity::Moment { s: p.s };
            let base = p.m_tilde.expect("resolved");
            let value = int(moment(g, p.s));
            out.push(VerificationReport::new("edge_count", Quantity::EdgeCount, m, Claim::Eq(int(inst.edge_count()))));
            if hit {
                out.push(VerificationReport::new("moment_exact", q, value, Claim::Eq(int(base + hits * p.hidden_moment()))));
                out.push(VerificationReport::new("moment_gap", q, value, Claim::Ge(int(base) * int(1 + p.c as u128))));
            } else {
                out.push(VerificationReport::new("moment_exact", q, value, Claim::Eq(int(base))));
            }
        }
        EmbeddingParams::MomentsBlock(p) => {
            let q = Quantity::Moment { s: p.s };
            let value = int(moment(g, p.s));
            out.push(VerificationReport::new("edge_count", Quantity::EdgeCount, m, Claim::Eq(int(inst.edge_count()))));
            let low = p.disjoint_moment();
            if hit {
                out.push(VerificationReport::new("moment_exact", q, value, Claim::Eq(int(p.intersecting_moment()))));
                out.push(VerificationReport::new("moment_gap", q, value, Claim::Ge(int(low) * Exact::new(4, 3))));
            } else {
                out.push(VerificationReport::new("moment_exact", q, value, Claim::Eq(int(low))));
            }
        }
    }
    out
}

/// Search-node cap for clique counts inside the verifier suite.
pub const CLIQUE_BUDGET: u64 = 50_000_000;

/// The same construction on all-zero inputs.
fn zero_instance(inst: &EmbeddingInstance) -> EmbeddingInstance {
    let n = inst.inputs().len();
    let pair = PromisePair::new(BitVector::zeros(n), BitVector::zeros(n), inst.inputs().promise())
        .expect("all-zero inputs satisfy every promise");
    inst.with_inputs(pair, inst.seed()).expect("same shape")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> ExplicitGraph {
        ExplicitGraph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    fn bipartite(a: usize, b: usize) -> ExplicitGraph {
        ExplicitGraph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_triangles(&complete(4)), 4);
        assert_eq!(count_triangles(&bipartite(3, 4)), 0);
        assert_eq!(count_r_cliques(&complete(5), 4, None), Ok(5));
        assert_eq!(count_r_cliques(&complete(5), 3, None), Ok(10));
        assert!(matches!(
            count_r_cliques(&complete(12), 6, Some(10)),
            Err(VerifyError::BudgetExceeded { budget: 10, .. })
        ));
    }

    #[test]
    fn cuts() {
        assert_eq!(min_cut(&complete(4)).value, 3);
        let two = ExplicitGraph::from_edges(4, [(0, 1), (2, 3)]);
        assert_eq!(min_cut(&two), MinCut { value: 0, components: 2 });
        // two triangles joined by one bridge
        let bridged = ExplicitGraph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]);
        assert_eq!(min_cut(&bridged).value, 1);
        // cycle: 2
        let c = ExplicitGraph::from_edges(7, (0..7).map(|v| (v, (v + 1) % 7)));
        assert_eq!(min_cut(&c).value, 2);
    }

    #[test]
    fn moments() {
        let star = ExplicitGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        assert_eq!(moment(&star, 2), 12);
        assert_eq!(moment(&star, 1), 6);
        assert_eq!(moment(&bipartite(4, 2), 2), 48);
    }

    #[test]
    fn arboricity() {
        let tree = ExplicitGraph::from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)]);
        assert_eq!(densest_subgraph_bruteforce(&tree).unwrap().arboricity, 1);
        assert_eq!(densest_subgraph_bruteforce(&complete(4)).unwrap().arboricity, 2);
        let h = densest_subgraph_bruteforce(&bipartite(4, 2)).unwrap();
        assert_eq!(h.arboricity, 2);
        assert!(densest_subgraph_bruteforce(&complete(21)).is_err());
        let b = arboricity_bounds(&complete(6));
        assert!(b.lower <= 3 && 3 <= b.upper);
        assert_eq!(arboricity_bounds(&tree), ArboricityBounds { lower: 1, upper: 1 });
    }

    #[test]
    fn alpha_claim_examples() {
        // K4, s = 2: 36/16 > 2, so the lower side fails in exact arithmetic
        let r = check_alpha_bounds(&complete(4), 2, 2);
        assert!(!r.pass);
        let edge = ExplicitGraph::from_edges(2, [(0, 1)]);
        assert!(check_alpha_bounds(&edge, 1, 1).pass);
    }

    #[test]
    fn tvd_basics() {
        let u = uniform(&[0, 1]);
        assert_eq!(tvd(&u, &u), Ok(Exact::from_integer(0)));
        let point: Distribution<i32> = [(0, Exact::from_integer(1)), (1, Exact::from_integer(0))].into();
        assert_eq!(tvd(&point, &u), Ok(Exact::new(1, 2)));
        assert_eq!(tvd(&point, &uniform(&[0, 2])), Err(VerifyError::UniverseMismatch));
    }

    #[test]
    fn report_json() {
        let r = VerificationReport::new("triangles", Quantity::TriangleCount, int(8u8), Claim::Eq(int(8u8)));
        assert_eq!(
            r.to_json_line(),
            r#"{"check":"triangles","quantity":"triangle_count","value":8,"claim":"== 8","pass":true}"#
        );
        let r = VerificationReport::new("tvd", Quantity::Tvd, Exact::new(1, 50), Claim::Le(Exact::new(1, 50)));
        assert!(r.pass);
        assert!(r.to_json_line().contains(r#""value":"1/50""#));
    }

    fn arb_graph(max_n: usize) -> impl proptest::strategy::Strategy<Value = ExplicitGraph> {
        use proptest::prelude::*;
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
                ExplicitGraph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e))
            })
        })
    }

    proptest::proptest! {
        #[test]
        fn triangle_counters_agree(g in arb_graph(12)) {
            proptest::prop_assert_eq!(count_r_cliques(&g, 3, None), Ok(count_triangles(&g)));
        }

        #[test]
        fn min_cut_at_most_min_degree(g in arb_graph(12)) {
            let cut = min_cut(&g);
            let min_deg = (0..g.n()).map(|v| g.degree(v)).min().unwrap_or(0) as u64;
            proptest::prop_assert!(cut.value <= min_deg);
            proptest::prop_assert_eq!(cut.value == 0, cut.components != 1 || g.n() < 2);
        }

        #[test]
        fn peel_bounds_bracket_exact_arboricity(g in arb_graph(10)) {
            let exact = densest_subgraph_bruteforce(&g).unwrap().arboricity;
            let b = arboricity_bounds(&g);
            proptest::prop_assert!(b.lower <= exact && exact <= b.upper, "{:?} vs {}", b, exact);
        }

        #[test]
        fn upper_alpha_side_always_holds(g in arb_graph(10), s in 1u32..4) {
            let a = densest_subgraph_bruteforce(&g).unwrap().arboricity;
            proptest::prop_assert!(pow(a, s + 1).unwrap() <= moment(&g, s));
        }

        #[test]
        fn tvd_is_a_metric_value(p in proptest::collection::vec(1u64..50, 1..8), q in proptest::collection::vec(1u64..50, 1..8)) {
            let len = p.len().min(q.len());
            let hist = |v: &[u64]| -> BTreeMap<usize, u64> { v[..len].iter().copied().enumerate().collect() };
            let (a, b) = (empirical(&hist(&p)), empirical(&hist(&q)));
            let d = tvd(&a, &b).unwrap();
            proptest::prop_assert_eq!(d, tvd(&b, &a).unwrap());
            proptest::prop_assert!(d <= Exact::from_integer(1));
        }
    }
}
