//! `U, V, W`, each of size `n/3` and cut into `N = n/3k` blocks of size `k`.
//! Disjoint inputs give `V_i × W_i` complete bipartite for every `i`;
//! intersecting at `j` makes `U_j` complete to `V ∪ W` with no other edges.
//! Only degree queries are answerable cheaply.

use serde::{Deserialize, Serialize};

use crate::graph::{DegreeTable, ExplicitGraph, QueryError, QueryKind, VertexId};
use crate::inputs::PromisePair;

use super::{invalid, CoordinateSource, EmbeddingError, Layout, DEGREE_ONLY};

const KIND: &str = "degree-only";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeOnlyParams {
    /// Requested vertex count.
    pub n: usize,
    pub k: usize,
    /// Derived: `n` rounded up to a multiple of `3k`.
    #[serde(default)]
    pub vertices: usize,
    /// Derived: `vertices − n`.
    #[serde(default)]
    pub padding: usize,
    /// Derived: `N = vertices / 3k`.
    #[serde(default)]
    pub blocks: usize,
}

impl DegreeOnlyParams {
    pub fn new(n: usize, k: usize) -> Self {
        DegreeOnlyParams { n, k, vertices: 0, padding: 0, blocks: 0 }
    }

    pub(super) fn resolve(mut self) -> Result<Self, EmbeddingError> {
        if self.k == 0 {
            return Err(invalid(KIND, "k must be positive"));
        }
        if self.n == 0 {
            return Err(invalid(KIND, "n must be positive"));
        }
        let unit = 3 * self.k;
        self.vertices = self.n.div_ceil(unit) * unit;
        self.padding = self.vertices - self.n;
        self.blocks = self.vertices / unit;
        Ok(self)
    }

    pub(super) fn layout(&self) -> DegreeOnlyLayout {
        DegreeOnlyLayout { n: self.vertices, k: self.k }
    }
}

#[derive(Debug)]
pub(super) struct DegreeOnlyLayout {
    n: usize,
    k: usize,
}

impl DegreeOnlyLayout {
    fn third(&self) -> usize {
        self.n / 3
    }

    /// The intersecting block, found by scanning every coordinate. Only used
    /// to build the graph, never by a query protocol.
    fn hot_block(&self, src: &mut dyn CoordinateSource) -> Result<Option<usize>, QueryError> {
        for j in 0..self.third() / self.k {
            if src.both(j)? {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }

    fn neighbors(&self, v: VertexId, hot: Option<usize>) -> Vec<VertexId> {
        let (t, k) = (self.third(), self.k);
        match hot {
            Some(j) => {
                if v < t {
                    if v / k == j {
                        (t..self.n).collect()
                    } else {
                        Vec::new()
                    }
                } else {
                    (j * k..(j + 1) * k).collect()
                }
            }
            None => {
                if v < t {
                    Vec::new()
                } else {
                    let i = (v - t) % t / k;
                    let other = if v < 2 * t { 2 * t } else { t };
                    (other + i * k..other + (i + 1) * k).collect()
                }
            }
        }
    }
}

impl Layout for DegreeOnlyLayout {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn supported(&self) -> &'static [QueryKind] {
        DEGREE_ONLY
    }

    fn degree_table(&self) -> Option<DegreeTable> {
        None
    }

    fn degree(&self, v: VertexId, src: &mut dyn CoordinateSource) -> Result<usize, QueryError> {
        if v >= self.third() {
            return Ok(self.k);
        }
        Ok(if src.both(v / self.k)? { 2 * self.third() } else { 0 })
    }

    fn neighbor(
        &self,
        v: VertexId,
        i: usize,
        src: &mut dyn CoordinateSource,
    ) -> Result<Option<VertexId>, QueryError> {
        let hot = self.hot_block(src)?;
        Ok(self.neighbors(v, hot).get(i - 1).copied())
    }

    fn pair(&self, u: VertexId, v: VertexId, src: &mut dyn CoordinateSource) -> Result<bool, QueryError> {
        let hot = self.hot_block(src)?;
        Ok(self.neighbors(u, hot).contains(&v))
    }

    fn edge_count(&self, inputs: &PromisePair) -> u64 {
        let per_side = (self.n * self.k / 3) as u64;
        if inputs.intersection_size() > 0 {
            2 * per_side
        } else {
            per_side
        }
    }

    fn materialize(&self, inputs: &PromisePair) -> ExplicitGraph {
        let mut src = super::DirectSource::new(inputs);
        let hot = self.hot_block(&mut src).expect("direct reads cannot fail");
        ExplicitGraph::from_adjacency((0..self.n).map(|v| self.neighbors(v, hot)).collect())
    }
}
