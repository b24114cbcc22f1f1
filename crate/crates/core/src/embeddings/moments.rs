//! Constructions that hide a large share of the `s`-th degree moment.

use serde::{Deserialize, Serialize};

use crate::arith::{ceil_root, floor_root, pow};
use crate::graph::{DegreeTable, ExplicitGraph, QueryError, QueryKind, VertexId};
use crate::inputs::PromisePair;

use super::{invalid, BaseGraph, CoordinateSource, EmbeddingError, Layout, NO_RANDOM_EDGE};

/// `u128` fields in JSON: a plain number when it fits in `u64`, a decimal
/// string otherwise. Flattened enums buffer their content, which has no
/// `u128` slot.
mod wide {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Small(u64),
        Text(String),
    }

    fn decode<E: Error>(r: Repr) -> Result<u128, E> {
        match r {
            Repr::Small(v) => Ok(v.into()),
            Repr::Text(t) => t.parse().map_err(E::custom),
        }
    }

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        match u64::try_from(*v) {
            Ok(small) => s.serialize_u64(small),
            Err(_) => s.collect_str(v),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        decode(Repr::deserialize(d)?)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<u128>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => super::serialize(v, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u128>, D::Error> {
            Option::<Repr>::deserialize(d)?.map(decode).transpose()
        }
    }
}

/// `M_s(g) = Σ_v deg(v)^s`, saturating at `u128::MAX`.
pub(crate) fn moment_of(g: &ExplicitGraph, s: u32) -> u128 {
    (0..g.n())
        .map(|v| pow(g.degree(v) as u64, s).unwrap_or(u128::MAX))
        .fold(0u128, u128::saturating_add)
}

/// Base graph `G′` plus blocks of `a + α` vertices; an intersecting block
/// becomes `K_{a,α}` with `a = ⌈(c·M̃_s/α)^{1/s}⌉`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentsHidingParams {
    pub s: u32,
    pub alpha: usize,
    pub c: u64,
    pub base: BaseGraph,
    /// `N`; defaults to `⌊n′ / block size⌋`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<usize>,
    /// Derived: `M_s(G′)`. If given, must equal the base graph's moment.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "wide::option")]
    pub m_tilde: Option<u128>,
    /// Derived: the large side `a` of the hidden bipartite block.
    #[serde(default)]
    pub a: usize,
    /// Derived: `a + α`.
    #[serde(default)]
    pub block_size: usize,
    /// Derived: total vertex count.
    #[serde(default)]
    pub n: usize,
}

impl MomentsHidingParams {
    pub fn new(s: u32, alpha: usize, c: u64, base: BaseGraph) -> Self {
        MomentsHidingParams { s, alpha, c, base, blocks: None, m_tilde: None, a: 0, block_size: 0, n: 0 }
    }

    pub fn with_blocks(mut self, blocks: usize) -> Self {
        self.blocks = Some(blocks);
        self
    }

    pub fn with_m_tilde(mut self, m: u128) -> Self {
        self.m_tilde = Some(m);
        self
    }

    pub(super) fn resolve(mut self) -> Result<Self, EmbeddingError> {
        const KIND: &str = "moments-hiding";
        if self.s == 0 || self.alpha == 0 || self.c == 0 {
            return Err(invalid(KIND, "s, α and c must be positive"));
        }
        let g = self.base.build()?;
        let m = moment_of(&g, self.s);
        match self.m_tilde {
            Some(given) if given != m => {
                return Err(invalid(KIND, format!("M̃_s = {given} but the base graph has M_s = {m}")));
            }
            _ => self.m_tilde = Some(m),
        }
        if m == 0 {
            return Err(invalid(KIND, "the base graph has M_s = 0; pick one with edges"));
        }
        // smallest a with a^s·α ≥ c·M̃
        let target = (self.c as u128)
            .checked_mul(m)
            .ok_or_else(|| invalid(KIND, "c·M̃_s overflows"))?;
        self.a = ceil_root(target.div_ceil(self.alpha as u128), self.s) as usize;
        self.block_size = self.a + self.alpha;
        let blocks = match self.blocks {
            Some(b) => b,
            None => g.n() / self.block_size,
        };
        if blocks == 0 {
            return Err(invalid(
                KIND,
                format!(
                    "block size a + α = {} exceeds the n′ = {} base vertices; set blocks explicitly",
                    self.block_size,
                    g.n()
                ),
            ));
        }
        self.blocks = Some(blocks);
        self.n = g.n() + blocks * self.block_size;
        Ok(self)
    }

    pub(super) fn layout(&self) -> Result<MomentsHidingLayout, EmbeddingError> {
        Ok(MomentsHidingLayout {
            base: self.base.build()?,
            a: self.a,
            alpha: self.alpha,
            blocks: self.blocks.expect("resolved"),
        })
    }

    /// `M_s(K_{a,α}) = a·α^s + α·a^s`.
    pub fn hidden_moment(&self) -> u128 {
        let s = self.s;
        self.a as u128 * pow(self.alpha as u64, s).unwrap_or(u128::MAX)
            + self.alpha as u128 * pow(self.a as u64, s).unwrap_or(u128::MAX)
    }
}

#[derive(Debug)]
pub(super) struct MomentsHidingLayout {
    base: ExplicitGraph,
    a: usize,
    alpha: usize,
    blocks: usize,
}

impl MomentsHidingLayout {
    fn size(&self) -> usize {
        self.a + self.alpha
    }

    fn block_of(&self, v: VertexId) -> Option<(usize, usize)> {
        v.checked_sub(self.base.n()).map(|o| (o / self.size(), o % self.size()))
    }
}

impl Layout for MomentsHidingLayout {
    fn vertex_count(&self) -> usize {
        self.base.n() + self.blocks * self.size()
    }

    fn supported(&self) -> &'static [QueryKind] {
        NO_RANDOM_EDGE
    }

    fn degree_table(&self) -> Option<DegreeTable> {
        None
    }

    fn degree(&self, v: VertexId, src: &mut dyn CoordinateSource) -> Result<usize, QueryError> {
        let Some((j, z)) = self.block_of(v) else {
            return Ok(self.base.degree(v));
        };
        Ok(match src.both(j)? {
            false => 0,
            true if z < self.a => self.alpha,
            true => self.a,
        })
    }

    fn neighbor(
        &self,
        v: VertexId,
        i: usize,
        src: &mut dyn CoordinateSource,
    ) -> Result<Option<VertexId>, QueryError> {
        let Some((j, z)) = self.block_of(v) else {
            return Ok(self.base.neighbors(v).get(i - 1).copied());
        };
        if !src.both(j)? {
            return Ok(None);
        }
        let start = self.base.n() + j * self.size();
        Ok(if z < self.a {
            (i <= self.alpha).then(|| start + self.a + i - 1)
        } else {
            (i <= self.a).then(|| start + i - 1)
        })
    }

    fn pair(&self, u: VertexId, v: VertexId, src: &mut dyn CoordinateSource) -> Result<bool, QueryError> {
        match (self.block_of(u), self.block_of(v)) {
            (None, None) => Ok(self.base.has_edge(u, v)),
            (Some((ju, zu)), Some((jv, zv))) if ju == jv && (zu < self.a) != (zv < self.a) => {
                src.both(ju)
            }
            _ => Ok(false),
        }
    }

    fn edge_count(&self, inputs: &PromisePair) -> u64 {
        self.base.m() as u64 + inputs.intersection_size() as u64 * (self.a * self.alpha) as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentCase {
    /// `c^s·M̃_s ≤ n^s`.
    LowMoment,
    /// `M̃_s > n^s`.
    HighMoment,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentSubcase {
    /// `α^s·n < M̃_s`: `d = α`.
    SmallAlpha,
    /// Otherwise: `d = ⌊(M̃_s/n)^{1/s}⌋`.
    LargeAlpha,
}

/// `A ∪ B` (`d`-regular bipartite, `|A| = |B| = n`), a clique `R` on `α`
/// vertices, and `N = d/ℓ` sets `W_j` of `w` vertices each. The `j`-th block
/// of `ℓ` neighbors of every `A ∪ B` vertex is rerouted into `W_j` when
/// `xⱼ = yⱼ = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentsBlockParams {
    pub s: u32,
    pub alpha: usize,
    pub c: u64,
    #[serde(with = "wide")]
    pub m_tilde: u128,
    /// Requested side size `|A| = |B|`.
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<MomentCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcase: Option<MomentSubcase>,
    /// Derived: side size after padding so the `W` chunks divide `2n`.
    #[serde(default)]
    pub side: usize,
    #[serde(default)]
    pub padding: usize,
    #[serde(default)]
    pub d: usize,
    #[serde(default)]
    pub l: usize,
    #[serde(default)]
    pub w_size: usize,
    /// Derived: `N = d/ℓ`.
    #[serde(default)]
    pub blocks: usize,
    /// Derived: degree of an active `W` vertex, `2n·ℓ/w`.
    #[serde(default)]
    pub w_degree: usize,
}

impl MomentsBlockParams {
    pub fn new(s: u32, alpha: usize, c: u64, m_tilde: u128, n: usize) -> Self {
        MomentsBlockParams {
            s,
            alpha,
            c,
            m_tilde,
            n,
            case: None,
            subcase: None,
            side: 0,
            padding: 0,
            d: 0,
            l: 0,
            w_size: 0,
            blocks: 0,
            w_degree: 0,
        }
    }

    pub(super) fn resolve(mut self) -> Result<Self, EmbeddingError> {
        const KIND: &str = "moments-block";
        let (s, n, m) = (self.s, self.n, self.m_tilde);
        if s == 0 || self.alpha < 2 || self.c == 0 || n == 0 || m == 0 {
            return Err(invalid(KIND, "needs s, c, n, M̃_s ≥ 1 and α ≥ 2"));
        }
        let overflow = || invalid(KIND, "parameters overflow 128-bit arithmetic");
        let n_s = pow(n as u64, s).ok_or_else(overflow)?;
        let c_s = pow(self.c, s).ok_or_else(overflow)?;
        let c_s_m = c_s.checked_mul(m).ok_or_else(overflow)?;
        let case = if c_s_m <= n_s {
            MomentCase::LowMoment
        } else if m > n_s {
            MomentCase::HighMoment
        } else {
            return Err(invalid(
                KIND,
                format!("M̃_s = {m} falls between (n/c)^s and n^s; neither case applies"),
            ));
        };
        let alpha_s = pow(self.alpha as u64, s).ok_or_else(overflow)?;
        let subcase = if alpha_s.checked_mul(n as u128).ok_or_else(overflow)? < m {
            MomentSubcase::SmallAlpha
        } else {
            MomentSubcase::LargeAlpha
        };
        let d = match subcase {
            MomentSubcase::SmallAlpha => self.alpha,
            MomentSubcase::LargeAlpha => floor_root(m / n as u128, s) as usize,
        };
        let (l, w) = match case {
            // smallest ℓ with (2nℓ)^s ≥ c^s·M̃
            MomentCase::LowMoment => {
                let mut l = 1usize;
                while pow((2 * n * l) as u64, s).ok_or_else(overflow)? < c_s_m {
                    l += 1;
                }
                (l, self.c as usize)
            }
            MomentCase::HighMoment => {
                let two_n_s = pow(2 * n as u64, s).ok_or_else(overflow)?;
                let k = (self.c as u128 * m).div_ceil(two_n_s) as usize;
                (k, k)
            }
        };
        if self.case.is_some_and(|c| c != case) || self.subcase.is_some_and(|c| c != subcase) {
            return Err(invalid(KIND, "declared case or subcase does not match the parameters"));
        }
        if d == 0 {
            return Err(invalid(KIND, "d = 0: M̃_s is too small for n"));
        }
        if case == MomentCase::HighMoment && d <= l {
            return Err(invalid(KIND, format!("HighMoment requires d > ℓ, got d = {d}, ℓ = {l}")));
        }
        if d % l != 0 {
            return Err(invalid(KIND, format!("d = {d} is not a multiple of ℓ = {l}")));
        }
        if w % l != 0 {
            return Err(invalid(KIND, format!("w = {w} is not a multiple of ℓ = {l}")));
        }
        let chunks = w / l;
        let mut side = n;
        while (2 * side) % chunks != 0 {
            side += 1;
        }
        if d > side {
            return Err(invalid(KIND, format!("d = {d} exceeds n = {side}")));
        }
        self.case = Some(case);
        self.subcase = Some(subcase);
        self.side = side;
        self.padding = side - n;
        self.d = d;
        self.l = l;
        self.w_size = w;
        self.blocks = d / l;
        self.w_degree = 2 * side * l / w;
        Ok(self)
    }

    pub(super) fn layout(&self) -> MomentsBlockLayout {
        MomentsBlockLayout {
            n: self.side,
            d: self.d,
            l: self.l,
            w: self.w_size,
            g: self.w_degree,
            alpha: self.alpha,
            blocks: self.blocks,
        }
    }

    /// Exact `M_s` on the disjoint side: `2n·d^s + α(α−1)^s`.
    pub fn disjoint_moment(&self) -> u128 {
        2 * self.side as u128 * pow(self.d as u64, self.s).unwrap_or(u128::MAX)
            + self.alpha as u128 * pow(self.alpha as u64 - 1, self.s).unwrap_or(u128::MAX)
    }

    /// Exact `M_s` on the intersecting side: the disjoint value plus `w·g^s`.
    pub fn intersecting_moment(&self) -> u128 {
        self.disjoint_moment()
            + self.w_size as u128 * pow(self.w_degree as u64, self.s).unwrap_or(u128::MAX)
    }
}

#[derive(Debug)]
pub(super) struct MomentsBlockLayout {
    n: usize,
    d: usize,
    l: usize,
    w: usize,
    /// Active degree of a `W` vertex.
    g: usize,
    alpha: usize,
    blocks: usize,
}

impl MomentsBlockLayout {
    fn r_start(&self) -> usize {
        2 * self.n
    }

    fn w_start(&self) -> usize {
        2 * self.n + self.alpha
    }

    fn ab_vertex(&self, p: usize) -> VertexId {
        p
    }

    /// The `W_j` vertex (offset within `W_j`) that slot `o` of the `A ∪ B`
    /// vertex `p` lands on.
    fn w_slot(&self, p: usize, o: usize) -> usize {
        (p / self.g) * self.l + o
    }
}

impl Layout for MomentsBlockLayout {
    fn vertex_count(&self) -> usize {
        self.w_start() + self.blocks * self.w
    }

    fn supported(&self) -> &'static [QueryKind] {
        NO_RANDOM_EDGE
    }

    fn degree_table(&self) -> Option<DegreeTable> {
        None
    }

    fn degree(&self, v: VertexId, src: &mut dyn CoordinateSource) -> Result<usize, QueryError> {
        Ok(if v < self.r_start() {
            self.d
        } else if v < self.w_start() {
            self.alpha - 1
        } else {
            let j = (v - self.w_start()) / self.w;
            if src.both(j)? { self.g } else { 0 }
        })
    }

    fn neighbor(
        &self,
        v: VertexId,
        i: usize,
        src: &mut dyn CoordinateSource,
    ) -> Result<Option<VertexId>, QueryError> {
        let n = self.n;
        if v < 2 * n {
            if i > self.d {
                return Ok(None);
            }
            let j = (i - 1) / self.l;
            if src.both(j)? {
                let q = self.w_slot(v, (i - 1) % self.l);
                return Ok(Some(self.w_start() + j * self.w + q));
            }
            return Ok(Some(if v < n {
                n + (v + i - 1) % n
            } else {
                (v - n + n - (i - 1) % n) % n
            }));
        }
        if v < self.w_start() {
            let t = v - self.r_start();
            return Ok((i < self.alpha).then(|| self.r_start() + (t + i) % self.alpha));
        }
        let (j, q) = ((v - self.w_start()) / self.w, (v - self.w_start()) % self.w);
        if !src.both(j)? || i > self.g {
            return Ok(None);
        }
        Ok(Some(self.ab_vertex((q / self.l) * self.g + i - 1)))
    }

    fn pair(&self, u: VertexId, v: VertexId, src: &mut dyn CoordinateSource) -> Result<bool, QueryError> {
        let n = self.n;
        let (u, v) = (u.min(v), u.max(v));
        if v < 2 * n {
            if u >= n || v < n {
                return Ok(false);
            }
            let r = (v - n + n - u) % n + 1;
            if r > self.d {
                return Ok(false);
            }
            return Ok(!src.both((r - 1) / self.l)?);
        }
        if v < self.w_start() {
            return Ok(u >= self.r_start());
        }
        if u >= 2 * n {
            return Ok(false);
        }
        let (j, q) = ((v - self.w_start()) / self.w, (v - self.w_start()) % self.w);
        Ok(q / self.l == u / self.g && src.both(j)?)
    }

    fn edge_count(&self, inputs: &PromisePair) -> u64 {
        let active = inputs.intersection_size() as u64;
        let sum = 2 * (self.n * self.d) as u64
            + (self.alpha * (self.alpha - 1)) as u64
            + active * (self.w * self.g) as u64;
        sum / 2
    }
}
