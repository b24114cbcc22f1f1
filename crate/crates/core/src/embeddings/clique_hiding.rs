use serde::{Deserialize, Serialize};

use crate::arith::binom;
use crate::graph::{DegreeTable, ExplicitGraph, QueryError, QueryKind, VertexId};
use crate::inputs::PromisePair;

use super::{invalid, BaseGraph, CoordinateSource, EmbeddingError, Layout, NO_RANDOM_EDGE};

const KIND: &str = "clique-hiding";

/// A base graph `G′` followed by `N` blocks of `ℓ` vertices; block `j` is a
/// clique iff `xⱼ = yⱼ = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueHidingParams {
    pub base: BaseGraph,
    pub l: usize,
    /// `N`, the input length.
    pub blocks: usize,
    #[serde(default)]
    pub augment_connect: bool,
    /// Size of the subgraph whose count the gap is stated in (2 = edges).
    #[serde(default = "default_target")]
    pub target: usize,
    /// Derived: `C(ℓ, target)`, the count one hidden clique adds.
    #[serde(default)]
    pub mu: u64,
    /// Derived: `n′`.
    #[serde(default)]
    pub base_vertices: usize,
    /// Derived: `m′`.
    #[serde(default)]
    pub base_edges: usize,
    /// Derived: `n′ + N·ℓ`.
    #[serde(default)]
    pub n: usize,
}

fn default_target() -> usize {
    2
}

impl CliqueHidingParams {
    pub fn new(base: BaseGraph, l: usize, blocks: usize) -> Self {
        CliqueHidingParams {
            base,
            l,
            blocks,
            augment_connect: false,
            target: 2,
            mu: 0,
            base_vertices: 0,
            base_edges: 0,
            n: 0,
        }
    }

    pub fn with_augment_connect(mut self, on: bool) -> Self {
        self.augment_connect = on;
        self
    }

    pub fn with_target(mut self, target: usize) -> Self {
        self.target = target;
        self
    }

    pub(super) fn resolve(mut self) -> Result<Self, EmbeddingError> {
        let g = self.base.build()?;
        if self.l < 2 {
            return Err(invalid(KIND, format!("block size ℓ = {} must be at least 2", self.l)));
        }
        if self.blocks == 0 {
            return Err(invalid(KIND, "needs at least one block (N ≥ 1)"));
        }
        if self.target < 2 || self.target > self.l {
            return Err(invalid(KIND, format!("target clique size must lie in [2, ℓ = {}]", self.l)));
        }
        if self.augment_connect && g.n() == 0 {
            return Err(invalid(KIND, "augment_connect needs a nonempty base graph for the hub"));
        }
        self.mu = binom(self.l as u64, self.target as u64)
            .ok_or_else(|| invalid(KIND, "C(ℓ, target) overflows"))?;
        self.base_vertices = g.n();
        self.base_edges = g.m();
        self.n = self
            .blocks
            .checked_mul(self.l)
            .and_then(|b| b.checked_add(g.n()))
            .ok_or_else(|| invalid(KIND, "vertex count overflows"))?;
        Ok(self)
    }

    pub(super) fn layout(&self) -> Result<CliqueHidingLayout, EmbeddingError> {
        Ok(CliqueHidingLayout {
            base: self.base.build()?,
            l: self.l,
            blocks: self.blocks,
            augment: self.augment_connect,
        })
    }
}

/// `ℓ = ⌈2√(ε·m′)⌉`: one hidden clique adds at least `ε·m′` edges.
pub fn edge_counting_block_size(epsilon: f64, base_edges: usize) -> usize {
    ceil_sqrt(4.0 * epsilon * base_edges as f64)
}

/// `ℓ = ⌈√(ε·m)⌉`, the triangle-testing preset.
pub fn triangle_testing_block_size(epsilon: f64, m: usize) -> usize {
    ceil_sqrt(epsilon * m as f64)
}

/// Smallest `ℓ` with `C(ℓ, 2) ≥ m′`, so a hidden clique holds at least half
/// of all edges.
pub fn edge_sampling_block_size(base_edges: usize) -> usize {
    let mut l = 2usize;
    while binom(l as u64, 2).unwrap_or(u64::MAX) < base_edges as u64 {
        l += 1;
    }
    l
}

fn ceil_sqrt(v: f64) -> usize {
    let mut l = v.max(0.0).sqrt().ceil() as usize;
    while l > 0 && ((l - 1) * (l - 1)) as f64 >= v {
        l -= 1;
    }
    while ((l * l) as f64) < v {
        l += 1;
    }
    l
}

#[derive(Debug)]
pub(super) struct CliqueHidingLayout {
    base: ExplicitGraph,
    l: usize,
    blocks: usize,
    augment: bool,
}

const HUB: VertexId = 0;

impl CliqueHidingLayout {
    fn n0(&self) -> usize {
        self.base.n()
    }

    /// `(block, position within block)` for a block vertex.
    fn block_of(&self, v: VertexId) -> Option<(usize, usize)> {
        v.checked_sub(self.n0()).map(|o| (o / self.l, o % self.l))
    }

    fn block_vertex(&self, j: usize, z: usize) -> VertexId {
        self.n0() + j * self.l + z
    }

    /// Base vertices the hub gains under augmentation, ascending.
    fn hub_extra(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n0()).filter(|&w| w != HUB && !self.base.has_edge(HUB, w))
    }

    fn hub_gains(&self, v: VertexId) -> bool {
        self.augment && v != HUB && !self.base.has_edge(HUB, v)
    }
}

impl Layout for CliqueHidingLayout {
    fn vertex_count(&self) -> usize {
        self.n0() + self.blocks * self.l
    }

    fn supported(&self) -> &'static [QueryKind] {
        NO_RANDOM_EDGE
    }

    fn degree_table(&self) -> Option<DegreeTable> {
        None
    }

    fn degree(&self, v: VertexId, src: &mut dyn CoordinateSource) -> Result<usize, QueryError> {
        let extra = usize::from(self.augment);
        match self.block_of(v) {
            None if self.augment && v == HUB => Ok(self.n0() - 1 + self.blocks * self.l),
            None => Ok(self.base.degree(v) + usize::from(self.hub_gains(v))),
            Some((j, _)) => Ok(if src.both(j)? { self.l - 1 } else { 0 } + extra),
        }
    }

    fn neighbor(
        &self,
        v: VertexId,
        i: usize,
        src: &mut dyn CoordinateSource,
    ) -> Result<Option<VertexId>, QueryError> {
        let Some((j, z)) = self.block_of(v) else {
            let own = self.base.neighbors(v);
            if let Some(&w) = own.get(i - 1) {
                return Ok(Some(w));
            }
            let rest = i - 1 - own.len();
            if !self.augment {
                return Ok(None);
            }
            if v == HUB {
                let extra: Vec<VertexId> = self.hub_extra().collect();
                return Ok(extra
                    .get(rest)
                    .copied()
                    .or_else(|| {
                        let b = rest - extra.len();
                        (b < self.blocks * self.l).then(|| self.n0() + b)
                    }));
            }
            return Ok((rest == 0 && self.hub_gains(v)).then_some(HUB));
        };
        let active = src.both(j)?;
        let inner = if active { self.l - 1 } else { 0 };
        Ok(if i <= inner {
            Some(self.block_vertex(j, (z + i) % self.l))
        } else if self.augment && i == inner + 1 {
            Some(HUB)
        } else {
            None
        })
    }

    fn pair(&self, u: VertexId, v: VertexId, src: &mut dyn CoordinateSource) -> Result<bool, QueryError> {
        match (self.block_of(u), self.block_of(v)) {
            (None, None) => Ok(self.base.has_edge(u, v) || (u == HUB && self.hub_gains(v)) || (v == HUB && self.hub_gains(u))),
            (Some(_), None) => Ok(self.augment && v == HUB),
            (None, Some(_)) => Ok(self.augment && u == HUB),
            (Some((ju, _)), Some((jv, _))) => Ok(ju == jv && src.both(ju)?),
        }
    }

    fn edge_count(&self, inputs: &PromisePair) -> u64 {
        let l = self.l as u64;
        let cliques = inputs.intersection_size() as u64 * (l * (l - 1) / 2);
        let hub = if self.augment {
            self.hub_extra().count() as u64 + (self.blocks * self.l) as u64
        } else {
            0
        };
        self.base.m() as u64 + cliques + hub
    }
}
