//! The four-set gadget behind the triangle and r-clique constructions.
//!
//! Vertices `A, A′, B, B′` (each of size `ℓ`), the parts `S₁..S_{r−2}`, and
//! a set `C` of isolated padding vertices, laid out in that order. For each
//! coordinate `(i, j)` (index `i·ℓ + j`) the graph has either
//! `{(aᵢ, bⱼ), (a′ⱼ, b′ᵢ)}` (when `x_ij = y_ij = 1`) or `{(aᵢ, a′ⱼ), (bⱼ, b′ᵢ)}`.
//! `A` and `B` are complete to every part of `S`, and the parts are pairwise
//! complete inside their boxes (the full parts unless a clique budget
//! shrinks them).

use serde::{Deserialize, Serialize};

use crate::arith::pow;
use crate::graph::{DegreeRun, DegreeTable, QueryError, QueryKind, VertexId};
use crate::inputs::PromisePair;

use super::{invalid, CoordinateSource, EmbeddingError, Layout, ALL_QUERIES};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleParams {
    pub l: usize,
    pub k: usize,
    /// Total vertex count; vertices past `4ℓ + |S|` form the isolated set `C`.
    pub n: usize,
    /// `|S|`; `ℓ` by default, smaller for the few-triangles variant.
    pub s_size: usize,
    /// Derived: `N = ℓ²`.
    #[serde(default)]
    pub coordinates: usize,
}

impl TriangleParams {
    pub fn new(l: usize, k: usize) -> Self {
        TriangleParams { l, k, n: 5 * l, s_size: l, coordinates: 0 }
    }

    /// Changes `|S|`, keeping `C` empty.
    pub fn with_s_size(mut self, s_size: usize) -> Self {
        self.s_size = s_size;
        self.n = 4 * self.l + s_size;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub(super) fn resolve(mut self) -> Result<Self, EmbeddingError> {
        const KIND: &str = "triangle";
        check_common(KIND, self.l, self.k)?;
        if self.s_size == 0 {
            return Err(invalid(KIND, "|S| must be positive"));
        }
        let needed = 4 * self.l + self.s_size;
        if self.n < needed {
            return Err(invalid(KIND, format!("n = {} < 4ℓ + |S| = {needed}", self.n)));
        }
        self.coordinates = self.l * self.l;
        Ok(self)
    }

    pub(super) fn layout(&self) -> CrossLayout {
        CrossLayout::new(
            self.l,
            vec![self.s_size],
            vec![self.s_size],
            self.n,
        )
    }

    /// `C₃` on the intersecting side: `k·|S|`.
    pub fn intersecting_triangles(&self) -> u64 {
        (self.k * self.s_size) as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RCliqueParams {
    pub r: usize,
    pub l: usize,
    pub k: usize,
    pub n: usize,
    /// Target number of `(r−2)`-cliques inside `S` for the sparse-`S`
    /// variant; `None` keeps the parts pairwise complete.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_clique_budget: Option<u64>,
    /// Derived: `N = ℓ²`.
    #[serde(default)]
    pub coordinates: usize,
    /// Derived: box size in each part `S₁..S_{r−2}`.
    #[serde(default)]
    pub boxes: Vec<usize>,
    /// Derived: number of `(r−2)`-cliques inside `S`.
    #[serde(default)]
    pub s_cliques: u64,
}

impl RCliqueParams {
    pub fn new(r: usize, l: usize, k: usize) -> Self {
        RCliqueParams {
            r,
            l,
            k,
            n: (r + 2) * l,
            s_clique_budget: None,
            coordinates: 0,
            boxes: Vec::new(),
            s_cliques: 0,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.s_clique_budget = Some(budget);
        self
    }

    pub(super) fn resolve(mut self) -> Result<Self, EmbeddingError> {
        const KIND: &str = "r-clique";
        if self.r < 3 {
            return Err(invalid(KIND, format!("r = {} must be at least 3", self.r)));
        }
        check_common(KIND, self.l, self.k)?;
        let needed = (self.r + 2) * self.l;
        if self.n < needed {
            return Err(invalid(KIND, format!("n = {} < (r+2)ℓ = {needed}", self.n)));
        }
        let parts = self.r - 2;
        self.boxes = match self.s_clique_budget {
            None => vec![self.l; parts],
            Some(budget) => sparse_boxes(self.r, self.l, budget)?,
        };
        self.s_cliques = self
            .boxes
            .iter()
            .try_fold(1u64, |acc, &b| acc.checked_mul(b as u64))
            .ok_or_else(|| invalid(KIND, "clique count overflows"))?;
        self.coordinates = self.l * self.l;
        Ok(self)
    }

    pub(super) fn layout(&self) -> CrossLayout {
        CrossLayout::new(
            self.l,
            vec![self.l; self.r - 2],
            self.boxes.clone(),
            self.n,
        )
    }

    /// `C_r` on the intersecting side: `k` times the `(r−2)`-cliques in `S`.
    pub fn intersecting_cliques(&self) -> u64 {
        self.k as u64 * self.s_cliques
    }

    /// `ℓ²·(C(r−2, 2) + 2(r−2) + 2)`, the edge count without a budget.
    pub fn full_edge_count(&self) -> u64 {
        let l2 = (self.l * self.l) as u64;
        let p = (self.r - 2) as u64;
        l2 * (p * p.saturating_sub(1) / 2 + 2 * p + 2)
    }
}

fn check_common(kind: &'static str, l: usize, k: usize) -> Result<(), EmbeddingError> {
    if l == 0 {
        return Err(invalid(kind, "ℓ must be positive"));
    }
    if k == 0 || k > l * l {
        return Err(invalid(kind, format!("k = {k} must lie in [1, ℓ² = {}]", l * l)));
    }
    Ok(())
}

/// Box sizes `t, …, t, u` holding `t^{r−3}·u ≤ budget` cliques, with `t` the
/// largest side such that `t^{r−2} ≤ budget`.
fn sparse_boxes(r: usize, l: usize, budget: u64) -> Result<Vec<usize>, EmbeddingError> {
    const KIND: &str = "r-clique";
    if r < 4 {
        return Err(invalid(KIND, "the sparse-S variant needs r ≥ 4 (use s_size for r = 3)"));
    }
    let full = pow(l as u64, (r - 2) as u32).unwrap_or(u128::MAX);
    if budget == 0 || budget as u128 > full {
        return Err(invalid(
            KIND,
            format!("clique budget {budget} must lie in [1, ℓ^(r−2) = {full}]"),
        ));
    }
    let t = crate::arith::floor_root(budget as u128, (r - 2) as u32).min(l as u64);
    let base = pow(t, (r - 3) as u32).expect("t^(r−3) ≤ budget");
    let u = (budget as u128 / base).min(l as u128) as usize;
    let mut boxes = vec![t as usize; r - 3];
    boxes.push(u);
    Ok(boxes)
}

#[derive(Debug)]
pub(super) struct CrossLayout {
    l: usize,
    parts: Vec<usize>,
    boxes: Vec<usize>,
    part_start: Vec<VertexId>,
    s_total: usize,
    n: usize,
}

enum Role {
    A(usize),
    APrime(usize),
    B(usize),
    BPrime(usize),
    S { part: usize, idx: usize },
    C,
}

impl CrossLayout {
    fn new(l: usize, parts: Vec<usize>, boxes: Vec<usize>, n: usize) -> Self {
        let mut part_start = Vec::with_capacity(parts.len());
        let mut at = 4 * l;
        for &p in &parts {
            part_start.push(at);
            at += p;
        }
        CrossLayout { l, s_total: at - 4 * l, parts, boxes, part_start, n }
    }

    fn role(&self, v: VertexId) -> Role {
        let l = self.l;
        match v / l {
            0 => Role::A(v),
            1 => Role::APrime(v - l),
            2 => Role::B(v - 2 * l),
            3 => Role::BPrime(v - 3 * l),
            _ if v < 4 * l + self.s_total => {
                let part = self.part_start.partition_point(|&s| s <= v) - 1;
                Role::S { part, idx: v - self.part_start[part] }
            }
            _ => Role::C,
        }
    }

    fn a(&self, i: usize) -> VertexId {
        i
    }
    fn a_prime(&self, j: usize) -> VertexId {
        self.l + j
    }
    fn b(&self, j: usize) -> VertexId {
        2 * self.l + j
    }
    fn b_prime(&self, i: usize) -> VertexId {
        3 * self.l + i
    }

    fn coord(&self, i: usize, j: usize) -> usize {
        i * self.l + j
    }

    /// Inter-part degree of an `S` vertex.
    fn s_cross_degree(&self, part: usize, idx: usize) -> usize {
        if idx >= self.boxes[part] {
            return 0;
        }
        self.boxes.iter().enumerate().filter(|&(p, _)| p != part).map(|(_, b)| b).sum()
    }

    /// The `q`-th (0-based) inter-part neighbor of an `S` vertex.
    fn s_cross_neighbor(&self, part: usize, mut q: usize) -> Option<VertexId> {
        for (p, &b) in self.boxes.iter().enumerate() {
            if p == part {
                continue;
            }
            if q < b {
                return Some(self.part_start[p] + q);
            }
            q -= b;
        }
        None
    }

    fn s_neighbor(&self, i: usize) -> Option<VertexId> {
        (i < self.s_total).then(|| 4 * self.l + i)
    }
}

impl Layout for CrossLayout {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn supported(&self) -> &'static [QueryKind] {
        ALL_QUERIES
    }

    fn degree_table(&self) -> Option<DegreeTable> {
        let l = self.l;
        let ab = l + self.s_total;
        let mut runs = vec![
            DegreeRun { start: 0, len: l, degree: ab },
            DegreeRun { start: l, len: l, degree: l },
            DegreeRun { start: 2 * l, len: l, degree: ab },
            DegreeRun { start: 3 * l, len: l, degree: l },
        ];
        for (p, (&size, &start)) in self.parts.iter().zip(&self.part_start).enumerate() {
            let boxed = self.boxes[p];
            runs.push(DegreeRun { start, len: boxed, degree: 2 * l + self.s_cross_degree(p, 0) });
            runs.push(DegreeRun { start: start + boxed, len: size - boxed, degree: 2 * l });
        }
        let c_start = 4 * l + self.s_total;
        runs.push(DegreeRun { start: c_start, len: self.n - c_start, degree: 0 });
        Some(DegreeTable::from_runs(runs))
    }

    fn degree(&self, v: VertexId, _src: &mut dyn CoordinateSource) -> Result<usize, QueryError> {
        Ok(match self.role(v) {
            Role::A(_) | Role::B(_) => self.l + self.s_total,
            Role::APrime(_) | Role::BPrime(_) => self.l,
            Role::S { part, idx } => 2 * self.l + self.s_cross_degree(part, idx),
            Role::C => 0,
        })
    }

    fn neighbor(
        &self,
        v: VertexId,
        i: usize,
        src: &mut dyn CoordinateSource,
    ) -> Result<Option<VertexId>, QueryError> {
        let l = self.l;
        let pos = i - 1;
        Ok(match self.role(v) {
            Role::A(a) if pos < l => {
                let j = pos;
                Some(if src.both(self.coord(a, j))? { self.b(j) } else { self.a_prime(j) })
            }
            Role::B(b) if pos < l => {
                let i = pos;
                Some(if src.both(self.coord(i, b))? { self.a(i) } else { self.b_prime(i) })
            }
            Role::A(_) | Role::B(_) => self.s_neighbor(pos - l),
            Role::APrime(j) if pos < l => {
                let i = pos;
                Some(if src.both(self.coord(i, j))? { self.b_prime(i) } else { self.a(i) })
            }
            Role::BPrime(i) if pos < l => {
                let j = pos;
                Some(if src.both(self.coord(i, j))? { self.a_prime(j) } else { self.b(j) })
            }
            Role::APrime(_) | Role::BPrime(_) => None,
            Role::S { part, idx } => {
                if pos < 2 * l {
                    Some(if pos < l { self.a(pos) } else { self.b(pos - l) })
                } else if idx < self.boxes[part] {
                    self.s_cross_neighbor(part, pos - 2 * l)
                } else {
                    None
                }
            }
            Role::C => None,
        })
    }

    fn pair(&self, u: VertexId, v: VertexId, src: &mut dyn CoordinateSource) -> Result<bool, QueryError> {
        let (ru, rv) = (self.role(u), self.role(v));
        // order so that each case appears once
        let (ru, rv) = if rank(&ru) <= rank(&rv) { (ru, rv) } else { (rv, ru) };
        Ok(match (ru, rv) {
            (Role::A(i), Role::APrime(j)) => !src.both(self.coord(i, j))?,
            (Role::A(i), Role::B(j)) => src.both(self.coord(i, j))?,
            (Role::APrime(j), Role::BPrime(i)) => src.both(self.coord(i, j))?,
            (Role::B(j), Role::BPrime(i)) => !src.both(self.coord(i, j))?,
            (Role::A(_) | Role::B(_), Role::S { .. }) => true,
            (Role::S { part: p, idx: a }, Role::S { part: q, idx: b }) => {
                p != q && a < self.boxes[p] && b < self.boxes[q]
            }
            _ => false,
        })
    }

    fn edge_count(&self, _inputs: &PromisePair) -> u64 {
        let l = self.l as u64;
        let mut cross = 0u64;
        for p in 0..self.boxes.len() {
            for q in p + 1..self.boxes.len() {
                cross += (self.boxes[p] * self.boxes[q]) as u64;
            }
        }
        2 * l * l + 2 * l * self.s_total as u64 + cross
    }
}

fn rank(r: &Role) -> u8 {
    match r {
        Role::A(_) => 0,
        Role::APrime(_) => 1,
        Role::B(_) => 2,
        Role::BPrime(_) => 3,
        Role::S { .. } => 4,
        Role::C => 5,
    }
}
