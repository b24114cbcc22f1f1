//! `A, A′, B, B′` (each of size `ℓ`) followed by `C`. Coordinate `(i, j)`
//! (index `i·ℓ + j`) contributes `{(aᵢ, b′ⱼ), (bᵢ, a′ⱼ)}` when
//! `x_ij = y_ij = 1` and `{(aᵢ, a′ⱼ), (bᵢ, b′ⱼ)}` otherwise. Each `c_t`
//! attaches to `k` consecutive `A` vertices round-robin:
//! `a_{(t·k + r) mod ℓ}`, `r = 0..k−1`.

use serde::{Deserialize, Serialize};

use crate::graph::{DegreeRun, DegreeTable, QueryError, QueryKind, VertexId};
use crate::inputs::PromisePair;

use super::{invalid, CoordinateSource, EmbeddingError, Layout, ALL_QUERIES};

const KIND: &str = "connectivity";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityParams {
    pub k: usize,
    pub l: usize,
    pub n: usize,
    /// Derived: `N = ℓ²`.
    #[serde(default)]
    pub coordinates: usize,
}

impl ConnectivityParams {
    pub fn new(k: usize, l: usize, n: usize) -> Self {
        ConnectivityParams { k, l, n, coordinates: 0 }
    }

    pub(super) fn resolve(mut self) -> Result<Self, EmbeddingError> {
        if self.k == 0 {
            return Err(invalid(KIND, "k must be positive"));
        }
        if self.l < 2 * self.k {
            return Err(invalid(KIND, format!("ℓ = {} < 2k = {}", self.l, 2 * self.k)));
        }
        if self.n < 4 * self.l {
            return Err(invalid(KIND, format!("n = {} < 4ℓ = {}", self.n, 4 * self.l)));
        }
        self.coordinates = self.l * self.l;
        Ok(self)
    }

    pub(super) fn layout(&self) -> ConnectivityLayout {
        ConnectivityLayout { k: self.k, l: self.l, n: self.n }
    }

    /// `m = 2ℓ² + k(n − 4ℓ)`.
    pub fn edge_count(&self) -> u64 {
        (2 * self.l * self.l + self.k * (self.n - 4 * self.l)) as u64
    }
}

/// Smallest `ℓ ≥ 2k` with `4ℓ ≤ n` and `ℓ² ≥ N`, or `None` if none fits.
pub fn connectivity_block_side(k: usize, n: usize, coordinates: usize) -> Option<usize> {
    let mut l = 2 * k;
    while l * l < coordinates {
        l += 1;
    }
    (4 * l <= n).then_some(l)
}

#[derive(Debug)]
pub(super) struct ConnectivityLayout {
    k: usize,
    l: usize,
    n: usize,
}

impl ConnectivityLayout {
    fn c_count(&self) -> usize {
        self.n - 4 * self.l
    }

    /// Number of `C` vertices attached to `aᵢ`.
    fn c_degree(&self, i: usize) -> usize {
        let slots = self.c_count() * self.k;
        if slots > i {
            (slots - i - 1) / self.l + 1
        } else {
            0
        }
    }

    fn coord(&self, i: usize, j: usize) -> usize {
        i * self.l + j
    }
}

impl Layout for ConnectivityLayout {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn supported(&self) -> &'static [QueryKind] {
        ALL_QUERIES
    }

    fn degree_table(&self) -> Option<DegreeTable> {
        let l = self.l;
        let mut runs: Vec<DegreeRun> = (0..l)
            .map(|i| DegreeRun { start: i, len: 1, degree: l + self.c_degree(i) })
            .collect();
        runs.push(DegreeRun { start: l, len: 3 * l, degree: l });
        runs.push(DegreeRun { start: 4 * l, len: self.c_count(), degree: self.k });
        Some(DegreeTable::from_runs(runs))
    }

    fn degree(&self, v: VertexId, _src: &mut dyn CoordinateSource) -> Result<usize, QueryError> {
        let l = self.l;
        Ok(if v < l {
            l + self.c_degree(v)
        } else if v < 4 * l {
            l
        } else {
            self.k
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
        if v >= 4 * l {
            let t = v - 4 * l;
            return Ok((pos < self.k).then(|| (t * self.k + pos) % l));
        }
        if pos >= l {
            if v >= l {
                return Ok(None);
            }
            let q = pos - l;
            return Ok((q < self.c_degree(v)).then(|| 4 * l + (v + l * q) / self.k));
        }
        let (side, idx) = (v / l, v % l);
        Ok(Some(match side {
            // a_i: position j+1 is b′_j or a′_j
            0 => {
                let (i, j) = (idx, pos);
                if src.both(self.coord(i, j))? { 3 * l + j } else { l + j }
            }
            // a′_j: position i+1 is b_i or a_i
            1 => {
                let (i, j) = (pos, idx);
                if src.both(self.coord(i, j))? { 2 * l + i } else { i }
            }
            // b_i: position j+1 is a′_j or b′_j
            2 => {
                let (i, j) = (idx, pos);
                if src.both(self.coord(i, j))? { l + j } else { 3 * l + j }
            }
            // b′_j: position i+1 is a_i or b_i
            _ => {
                let (i, j) = (pos, idx);
                if src.both(self.coord(i, j))? { i } else { 2 * l + i }
            }
        }))
    }

    fn pair(&self, u: VertexId, v: VertexId, src: &mut dyn CoordinateSource) -> Result<bool, QueryError> {
        let l = self.l;
        let (u, v) = (u.min(v), u.max(v));
        let (su, sv) = (u / l, (v / l).min(4));
        Ok(match (su, sv) {
            (0, 4) => {
                let t = v - 4 * l;
                (u + l - (t * self.k) % l) % l < self.k
            }
            (0, 1) => !src.both(self.coord(u, v - l))?,
            (0, 3) => src.both(self.coord(u, v - 3 * l))?,
            (1, 2) => src.both(self.coord(v - 2 * l, u - l))?,
            (2, 3) => !src.both(self.coord(u - 2 * l, v - 3 * l))?,
            _ => false,
        })
    }

    fn edge_count(&self, _inputs: &PromisePair) -> u64 {
        (2 * self.l * self.l + self.k * self.c_count()) as u64
    }
}
