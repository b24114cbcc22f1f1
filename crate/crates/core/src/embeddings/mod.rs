//! Graph constructions `ℰ(x, y)` built from two-party inputs.
//!
//! Every construction answers degree/neighbor/pair queries lazily from its
//! public structure plus the input coordinates it needs, read through a
//! [`CoordinateSource`]. The only input-dependent fact any single query ever
//! needs is one value `xⱼ ∧ yⱼ`, so a source that exchanges `xⱼ` and `yⱼ`
//! turns each query into a protocol costing at most two bits.
//!
//! Orderings the constructions leave arbitrary are pinned here: base-graph
//! neighbors keep their given order, shared sets (`S`, `C`) are listed by
//! ascending id, and input-dependent neighbors occupy the index ranges the
//! per-query protocols assume.

mod base;
mod clique_hiding;
mod connectivity;
mod cross;
mod degree_only;
mod moments;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    sample_edge_by_degrees, DegreeTable, ExplicitGraph, GraphOracle, Query, QueryAnswer,
    QueryError, QueryKind, VertexId,
};
use crate::inputs::{BitVector, InputError, Promise, PromisePair, Side};

pub use base::BaseGraph;
pub use clique_hiding::{
    edge_counting_block_size, edge_sampling_block_size, triangle_testing_block_size,
    CliqueHidingParams,
};
pub use connectivity::{connectivity_block_side, ConnectivityParams};
pub use cross::{RCliqueParams, TriangleParams};
pub use degree_only::DegreeOnlyParams;
pub use moments::{MomentCase, MomentSubcase, MomentsBlockParams, MomentsHidingParams};
pub(crate) use moments::moment_of;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{kind}: {constraint}")]
    InvalidParams { kind: &'static str, constraint: String },
    #[error("{kind} expects inputs of length N = {expected}, got {found}")]
    InputLength { kind: &'static str, expected: usize, found: usize },
    #[error("{kind} requires promise {expected}, got {found}")]
    WrongPromise { kind: &'static str, expected: String, found: Promise },
    #[error("materialization refused: n = {n}, m = {m} exceeds cap of {max_vertices} vertices / {max_edges} edges")]
    CapExceeded { n: usize, m: u64, max_vertices: usize, max_edges: u64 },
    #[error("{kind} cannot answer {query} queries")]
    Unsupported { kind: &'static str, query: QueryKind },
    #[error("derived parameter mismatch: {0}")]
    DerivedMismatch(String),
}

pub(crate) fn invalid(kind: &'static str, constraint: impl Into<String>) -> EmbeddingError {
    EmbeddingError::InvalidParams { kind, constraint: constraint.into() }
}

/// Reads `xⱼ ∧ yⱼ` for the lazy rules.
pub trait CoordinateSource {
    fn both(&mut self, j: usize) -> Result<bool, QueryError>;
}

/// Reads coordinates straight from a [`PromisePair`], counting reads.
pub struct DirectSource<'a> {
    inputs: &'a PromisePair,
    reads: u64,
}

impl<'a> DirectSource<'a> {
    pub fn new(inputs: &'a PromisePair) -> Self {
        DirectSource { inputs, reads: 0 }
    }

    pub fn reads(&self) -> u64 {
        self.reads
    }
}

impl CoordinateSource for DirectSource<'_> {
    fn both(&mut self, j: usize) -> Result<bool, QueryError> {
        self.reads += 1;
        Ok(self.inputs.both(j))
    }
}

/// The public structure of one construction: everything both parties know
/// before seeing any input.
pub(crate) trait Layout: Send + Sync + fmt::Debug {
    fn vertex_count(&self) -> usize;

    fn supported(&self) -> &'static [QueryKind];

    /// The degree sequence, when it does not depend on the inputs.
    fn degree_table(&self) -> Option<DegreeTable>;

    fn degree(&self, v: VertexId, src: &mut dyn CoordinateSource) -> Result<usize, QueryError>;

    fn neighbor(
        &self,
        v: VertexId,
        i: usize,
        src: &mut dyn CoordinateSource,
    ) -> Result<Option<VertexId>, QueryError>;

    fn pair(&self, u: VertexId, v: VertexId, src: &mut dyn CoordinateSource)
        -> Result<bool, QueryError>;

    fn edge_count(&self, inputs: &PromisePair) -> u64;

    /// Builds the graph by enumerating the lazy neighbor rule.
    fn materialize(&self, inputs: &PromisePair) -> ExplicitGraph {
        let mut src = DirectSource::new(inputs);
        let adjacency = (0..self.vertex_count())
            .map(|v| {
                let d = self.degree(v, &mut src).expect("in-range degree");
                (1..=d)
                    .map(|i| {
                        self.neighbor(v, i, &mut src)
                            .expect("in-range neighbor")
                            .expect("index within degree")
                    })
                    .collect()
            })
            .collect();
        ExplicitGraph::from_adjacency(adjacency)
    }
}

const ALL_QUERIES: &[QueryKind] =
    &[QueryKind::Degree, QueryKind::Neighbor, QueryKind::Pair, QueryKind::RandomEdge];
const NO_RANDOM_EDGE: &[QueryKind] = &[QueryKind::Degree, QueryKind::Neighbor, QueryKind::Pair];
const DEGREE_ONLY: &[QueryKind] = &[QueryKind::Degree];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingKind {
    CliqueHiding,
    Triangle,
    RClique,
    Connectivity,
    DegreeOnly,
    MomentsHiding,
    MomentsBlock,
}

impl EmbeddingKind {
    pub const ALL: [EmbeddingKind; 7] = [
        EmbeddingKind::CliqueHiding,
        EmbeddingKind::Triangle,
        EmbeddingKind::RClique,
        EmbeddingKind::Connectivity,
        EmbeddingKind::DegreeOnly,
        EmbeddingKind::MomentsHiding,
        EmbeddingKind::MomentsBlock,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EmbeddingKind::CliqueHiding => "clique-hiding",
            EmbeddingKind::Triangle => "triangle",
            EmbeddingKind::RClique => "r-clique",
            EmbeddingKind::Connectivity => "connectivity",
            EmbeddingKind::DegreeOnly => "degree-only",
            EmbeddingKind::MomentsHiding => "moments-hiding",
            EmbeddingKind::MomentsBlock => "moments-block",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// The communication problem this construction embeds.
    pub fn problem(self) -> Problem {
        match self {
            EmbeddingKind::Triangle | EmbeddingKind::RClique | EmbeddingKind::Connectivity => {
                Problem::KIntersection
            }
            _ => Problem::Disjointness,
        }
    }
}

impl fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    /// `DISJ`: 1 on the disjoint side.
    Disjointness,
    /// `INTER_k`: 1 on the intersecting side.
    KIntersection,
}

impl Problem {
    pub fn value_on(self, side: Side) -> bool {
        match self {
            Problem::Disjointness => side == Side::Disjoint,
            Problem::KIntersection => side == Side::Intersecting,
        }
    }
}

/// Parameters of one construction, with every derived quantity explicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum EmbeddingParams {
    CliqueHiding(CliqueHidingParams),
    Triangle(TriangleParams),
    RClique(RCliqueParams),
    Connectivity(ConnectivityParams),
    DegreeOnly(DegreeOnlyParams),
    MomentsHiding(MomentsHidingParams),
    MomentsBlock(MomentsBlockParams),
}

impl EmbeddingParams {
    pub fn kind(&self) -> EmbeddingKind {
        match self {
            EmbeddingParams::CliqueHiding(_) => EmbeddingKind::CliqueHiding,
            EmbeddingParams::Triangle(_) => EmbeddingKind::Triangle,
            EmbeddingParams::RClique(_) => EmbeddingKind::RClique,
            EmbeddingParams::Connectivity(_) => EmbeddingKind::Connectivity,
            EmbeddingParams::DegreeOnly(_) => EmbeddingKind::DegreeOnly,
            EmbeddingParams::MomentsHiding(_) => EmbeddingKind::MomentsHiding,
            EmbeddingParams::MomentsBlock(_) => EmbeddingKind::MomentsBlock,
        }
    }

    /// Input length `N`.
    pub fn input_len(&self) -> usize {
        match self {
            EmbeddingParams::CliqueHiding(p) => p.blocks,
            EmbeddingParams::Triangle(p) => p.coordinates,
            EmbeddingParams::RClique(p) => p.coordinates,
            EmbeddingParams::Connectivity(p) => p.coordinates,
            EmbeddingParams::DegreeOnly(p) => p.blocks,
            EmbeddingParams::MomentsHiding(p) => p.blocks.unwrap_or(0),
            EmbeddingParams::MomentsBlock(p) => p.blocks,
        }
    }

    /// The promise instances of this construction are drawn under.
    pub fn promise(&self) -> Promise {
        match self {
            EmbeddingParams::Triangle(p) => Promise::KIntersectOrDisjoint { k: p.k },
            EmbeddingParams::RClique(p) => Promise::KIntersectOrDisjoint { k: p.k },
            EmbeddingParams::Connectivity(p) => Promise::KIntersectOrDisjoint { k: p.k },
            _ => Promise::UniqueIntersection,
        }
    }

    /// Recomputes every derived field from the primary ones.
    pub fn resolve(self) -> Result<Self, EmbeddingError> {
        Ok(match self {
            EmbeddingParams::CliqueHiding(p) => EmbeddingParams::CliqueHiding(p.resolve()?),
            EmbeddingParams::Triangle(p) => EmbeddingParams::Triangle(p.resolve()?),
            EmbeddingParams::RClique(p) => EmbeddingParams::RClique(p.resolve()?),
            EmbeddingParams::Connectivity(p) => EmbeddingParams::Connectivity(p.resolve()?),
            EmbeddingParams::DegreeOnly(p) => EmbeddingParams::DegreeOnly(p.resolve()?),
            EmbeddingParams::MomentsHiding(p) => EmbeddingParams::MomentsHiding(p.resolve()?),
            EmbeddingParams::MomentsBlock(p) => EmbeddingParams::MomentsBlock(p.resolve()?),
        })
    }

    fn layout(&self) -> Result<Arc<dyn Layout>, EmbeddingError> {
        Ok(match self {
            EmbeddingParams::CliqueHiding(p) => Arc::new(p.layout()?),
            EmbeddingParams::Triangle(p) => Arc::new(p.layout()),
            EmbeddingParams::RClique(p) => Arc::new(p.layout()),
            EmbeddingParams::Connectivity(p) => Arc::new(p.layout()),
            EmbeddingParams::DegreeOnly(p) => Arc::new(p.layout()),
            EmbeddingParams::MomentsHiding(p) => Arc::new(p.layout()?),
            EmbeddingParams::MomentsBlock(p) => Arc::new(p.layout()),
        })
    }

    fn accepts_promise(&self, promise: Promise) -> bool {
        match self {
            EmbeddingParams::Triangle(_)
            | EmbeddingParams::RClique(_)
            | EmbeddingParams::Connectivity(_) => promise == self.promise(),
            _ => matches!(promise, Promise::Disjoint | Promise::UniqueIntersection),
        }
    }
}

/// Caps on what [`materialize`] will build. Above the cap an instance is
/// lazy-only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaterializeCap {
    pub max_vertices: usize,
    pub max_edges: u64,
}

impl Default for MaterializeCap {
    fn default() -> Self {
        MaterializeCap { max_vertices: 1_000_000, max_edges: 10_000_000 }
    }
}

impl MaterializeCap {
    pub const VERTICES_ENV: &'static str = "QLB_MAX_VERTICES";
    pub const EDGES_ENV: &'static str = "QLB_MAX_EDGES";

    /// Default caps, overridden by `QLB_MAX_VERTICES` / `QLB_MAX_EDGES`.
    pub fn from_env() -> Self {
        let mut cap = Self::default();
        if let Some(v) = std::env::var(Self::VERTICES_ENV).ok().and_then(|s| s.parse().ok()) {
            cap.max_vertices = v;
        }
        if let Some(e) = std::env::var(Self::EDGES_ENV).ok().and_then(|s| s.parse().ok()) {
            cap.max_edges = e;
        }
        cap
    }

    pub fn admits(&self, n: usize, m: u64) -> bool {
        n <= self.max_vertices && m <= self.max_edges
    }
}

/// One construction applied to one input pair.
#[derive(Clone, Debug)]
pub struct EmbeddingInstance {
    params: EmbeddingParams,
    inputs: PromisePair,
    seed: u64,
    layout: Arc<dyn Layout>,
}

impl EmbeddingInstance {
    pub fn build(params: EmbeddingParams, inputs: PromisePair, seed: u64) -> Result<Self, EmbeddingError> {
        let params = params.resolve()?;
        let layout = params.layout()?;
        Self::assemble(params, layout, inputs, seed)
    }

    fn assemble(
        params: EmbeddingParams,
        layout: Arc<dyn Layout>,
        inputs: PromisePair,
        seed: u64,
    ) -> Result<Self, EmbeddingError> {
        let kind = params.kind().as_str();
        if inputs.len() != params.input_len() {
            return Err(EmbeddingError::InputLength {
                kind,
                expected: params.input_len(),
                found: inputs.len(),
            });
        }
        if !params.accepts_promise(inputs.promise()) {
            let expected = match params.kind().problem() {
                Problem::KIntersection => params.promise().to_string(),
                Problem::Disjointness => "disjoint or unique-intersection".to_string(),
            };
            return Err(EmbeddingError::WrongPromise { kind, expected, found: inputs.promise() });
        }
        Ok(EmbeddingInstance { params, inputs, seed, layout })
    }

    /// The same construction on different inputs; the layout is shared.
    pub fn with_inputs(&self, inputs: PromisePair, seed: u64) -> Result<Self, EmbeddingError> {
        Self::assemble(self.params.clone(), Arc::clone(&self.layout), inputs, seed)
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.params.kind()
    }

    pub fn params(&self) -> &EmbeddingParams {
        &self.params
    }

    pub fn inputs(&self) -> &PromisePair {
        &self.inputs
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn vertex_count(&self) -> usize {
        self.layout.vertex_count()
    }

    pub fn supports(&self, kind: QueryKind) -> bool {
        self.layout.supported().contains(&kind)
    }

    pub fn supported_queries(&self) -> &'static [QueryKind] {
        self.layout.supported()
    }

    /// `Some` when degrees do not depend on the inputs.
    pub fn degree_table(&self) -> Option<DegreeTable> {
        self.layout.degree_table()
    }

    /// Number of edges, from the construction's formula.
    pub fn edge_count(&self) -> u64 {
        self.layout.edge_count(&self.inputs)
    }

    pub fn side(&self) -> Side {
        self.inputs.side()
    }

    /// Answers `q` through `src`; `rng` drives only the vertex/slot choice
    /// of `RandomEdge`.
    pub fn answer_with<R: Rng + ?Sized>(
        &self,
        q: Query,
        rng: &mut R,
        src: &mut dyn CoordinateSource,
    ) -> Result<QueryAnswer, QueryError> {
        let n = self.vertex_count();
        if !self.supports(q.kind()) {
            return Err(QueryError::Unsupported { kind: q.kind(), oracle: self.kind().as_str() });
        }
        q.check(n)?;
        Ok(match q {
            Query::Degree(v) => QueryAnswer::DegreeIs(self.layout.degree(v, src)?),
            Query::Neighbor(v, i) => QueryAnswer::NeighborIs(self.layout.neighbor(v, i, src)?),
            Query::Pair(u, v) => QueryAnswer::PairIs(u != v && self.layout.pair(u, v, src)?),
            Query::RandomEdge => {
                let table = self
                    .layout
                    .degree_table()
                    .expect("random edges are only supported with input-independent degrees");
                let (u, v) = sample_edge_by_degrees(
                    &table,
                    |v, i| {
                        self.layout
                            .neighbor(v, i, src)?
                            .ok_or(QueryError::NoEdges)
                    },
                    rng,
                )?;
                QueryAnswer::EdgeIs(u, v)
            }
        })
    }
}

/// Answers a query directly from `(x, y)` and the construction's rules.
pub fn lazy_answer<R: Rng + ?Sized>(
    inst: &EmbeddingInstance,
    q: Query,
    rng: &mut R,
) -> Result<QueryAnswer, QueryError> {
    inst.answer_with(q, rng, &mut DirectSource::new(&inst.inputs))
}

pub fn materialize(inst: &EmbeddingInstance) -> Result<ExplicitGraph, EmbeddingError> {
    materialize_capped(inst, MaterializeCap::default())
}

/// Builds the explicit graph, whose neighbor orderings match the lazy rules
/// position by position.
pub fn materialize_capped(
    inst: &EmbeddingInstance,
    cap: MaterializeCap,
) -> Result<ExplicitGraph, EmbeddingError> {
    let n = inst.vertex_count();
    let m = inst.edge_count();
    if !cap.admits(n, m) {
        return Err(EmbeddingError::CapExceeded {
            n,
            m,
            max_vertices: cap.max_vertices,
            max_edges: cap.max_edges,
        });
    }
    Ok(inst.layout.materialize(&inst.inputs))
}

/// `g(ℰ(x, y))`: the value of the embedded function, computed from the
/// inputs. 1 on the disjoint side for disjointness embeddings and on the
/// intersecting side for k-intersection embeddings.
pub fn gap_label(inst: &EmbeddingInstance) -> Result<bool, EmbeddingError> {
    let intersection = inst.inputs.intersection_size();
    let promise = inst.inputs.promise();
    if !promise.admits(intersection) {
        return Err(InputError::PromiseViolation { promise, intersection }.into());
    }
    Ok(inst.kind().problem().value_on(inst.side()))
}

/// A [`GraphOracle`] over an instance's lazy rules, reading inputs directly.
pub struct LazyOracle<'a, R> {
    inst: &'a EmbeddingInstance,
    rng: R,
    answered: u64,
}

impl<'a, R: Rng> LazyOracle<'a, R> {
    pub fn new(inst: &'a EmbeddingInstance, rng: R) -> Self {
        LazyOracle { inst, rng, answered: 0 }
    }
}

impl<R: Rng> GraphOracle for LazyOracle<'_, R> {
    fn vertex_count(&self) -> usize {
        self.inst.vertex_count()
    }

    fn supports(&self, kind: QueryKind) -> bool {
        self.inst.supports(kind)
    }

    fn query(&mut self, q: Query) -> Result<QueryAnswer, QueryError> {
        let answer = lazy_answer(self.inst, q, &mut self.rng)?;
        self.answered += 1;
        Ok(answer)
    }

    fn queries_answered(&self) -> u64 {
        self.answered
    }
}

/// On-disk form of an instance. The `kind`/`params` pair is flattened in;
/// `x` and `y` are MSB-first hex of length `N`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(flatten)]
    pub params: EmbeddingParams,
    pub promise: Promise,
    pub x: String,
    pub y: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<InstanceMetadata>,
}

/// Informational summary written alongside an instance; ignored on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceMetadata {
    pub n: usize,
    pub m: u64,
    pub side: Side,
    pub supported_queries: Vec<QueryKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_runs: Option<Vec<(usize, usize, usize)>>,
}

impl EmbeddingInstance {
    pub fn to_file(&self, with_metadata: bool) -> InstanceFile {
        let metadata = with_metadata.then(|| {
            let degree_runs = (self.kind() == EmbeddingKind::DegreeOnly).then(|| {
                let mut src = DirectSource::new(&self.inputs);
                let degrees: Vec<usize> = (0..self.vertex_count())
                    .map(|v| self.layout.degree(v, &mut src).expect("in range"))
                    .collect();
                DegreeTable::from_degrees(&degrees)
                    .runs()
                    .iter()
                    .map(|r| (r.start, r.len, r.degree))
                    .collect()
            });
            InstanceMetadata {
                n: self.vertex_count(),
                m: self.edge_count(),
                side: self.side(),
                supported_queries: self.supported_queries().to_vec(),
                degree_runs,
            }
        });
        InstanceFile {
            params: self.params.clone(),
            promise: self.inputs.promise(),
            x: self.inputs.x().to_hex(),
            y: self.inputs.y().to_hex(),
            seed: self.seed,
            metadata,
        }
    }

    /// Rebuilds an instance, rejecting files whose derived parameters do not
    /// match what the primary parameters imply.
    pub fn from_file(file: &InstanceFile) -> Result<Self, EmbeddingError> {
        let resolved = file.params.clone().resolve()?;
        if resolved != file.params {
            return Err(EmbeddingError::DerivedMismatch(format!(
                "file has {:?}, primary parameters imply {:?}",
                file.params, resolved
            )));
        }
        let n = resolved.input_len();
        let x = BitVector::from_hex(&file.x, n)?;
        let y = BitVector::from_hex(&file.y, n)?;
        let inputs = PromisePair::new(x, y, file.promise)?;
        Self::build(resolved, inputs, file.seed)
    }

    pub fn to_json(&self, with_metadata: bool) -> String {
        serde_json::to_string_pretty(&self.to_file(with_metadata)).expect("instance serializes")
    }
}

#[cfg(test)]
mod tests;
