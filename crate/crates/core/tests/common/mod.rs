//! Reference edge sets built straight from each construction's definition,
//! sharing no code with the library's lazy rules.
#![allow(dead_code)]

use std::collections::BTreeSet;

use qlb::embeddings::{
    lazy_answer, materialize, BaseGraph, CliqueHidingParams, ConnectivityParams, DegreeOnlyParams, EmbeddingInstance,
    EmbeddingKind, EmbeddingParams, MomentsBlockParams, MomentsHidingParams, RCliqueParams, TriangleParams,
};
use qlb::graph::{Query, QueryAnswer, QueryKind};
use qlb::protocol::gen_promise_instance;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type EdgeSet = BTreeSet<(usize, usize)>;

fn add(e: &mut EdgeSet, u: usize, v: usize) {
    assert_ne!(u, v, "reference produced a loop");
    e.insert((u.min(v), u.max(v)));
}

fn base_edges(b: &BaseGraph, e: &mut EdgeSet) -> usize {
    match *b {
        BaseGraph::Empty { n } => n,
        BaseGraph::Path { n } => {
            (1..n).for_each(|v| add(e, v - 1, v));
            n
        }
        BaseGraph::Cycle { n } => {
            (0..n).for_each(|v| add(e, v, (v + 1) % n));
            n
        }
        BaseGraph::Complete { n } => {
            (0..n).for_each(|u| (u + 1..n).for_each(|v| add(e, u, v)));
            n
        }
        BaseGraph::Star { n } => {
            (1..n).for_each(|v| add(e, 0, v));
            n
        }
        BaseGraph::Explicit { .. } => panic!("reference covers the named families only"),
    }
}

/// `(n, E)` for the resolved `params` on inputs with `hit(j) = x_j ∧ y_j`.
pub fn reference(params: &EmbeddingParams, hit: &dyn Fn(usize) -> bool) -> (usize, EdgeSet) {
    let mut e = EdgeSet::new();
    let n = match params {
        EmbeddingParams::CliqueHiding(p) => clique_hiding(p, hit, &mut e),
        EmbeddingParams::Triangle(p) => {
            cross(p.l, &[p.s_size], &[p.s_size], hit, &mut e);
            p.n
        }
        EmbeddingParams::RClique(p) => {
            cross(p.l, &vec![p.l; p.r - 2], &p.boxes, hit, &mut e);
            p.n
        }
        EmbeddingParams::Connectivity(p) => connectivity(p, hit, &mut e),
        EmbeddingParams::DegreeOnly(p) => degree_only(p, hit, &mut e),
        EmbeddingParams::MomentsHiding(p) => moments_hiding(p, hit, &mut e),
        EmbeddingParams::MomentsBlock(p) => moments_block(p, hit, &mut e),
    };
    (n, e)
}

fn clique_hiding(p: &CliqueHidingParams, hit: &dyn Fn(usize) -> bool, e: &mut EdgeSet) -> usize {
    let n0 = base_edges(&p.base, e);
    let n = n0 + p.blocks * p.l;
    for j in (0..p.blocks).filter(|&j| hit(j)) {
        let s = n0 + j * p.l;
        (s..s + p.l).for_each(|u| (u + 1..s + p.l).for_each(|v| add(e, u, v)));
    }
    if p.augment_connect {
        (1..n).for_each(|v| add(e, 0, v));
    }
    n
}

/// A, A′, B, B′ of size `l`, then the S parts; boxes are pairwise complete.
fn cross(l: usize, parts: &[usize], boxes: &[usize], hit: &dyn Fn(usize) -> bool, e: &mut EdgeSet) {
    let (a, ap, b, bp) = (0, l, 2 * l, 3 * l);
    for i in 0..l {
        for j in 0..l {
            if hit(i * l + j) {
                add(e, a + i, b + j);
                add(e, ap + j, bp + i);
            } else {
                add(e, a + i, ap + j);
                add(e, b + j, bp + i);
            }
        }
    }
    let mut starts = Vec::new();
    let mut at = 4 * l;
    for &size in parts {
        starts.push(at);
        for s in at..at + size {
            (0..l).for_each(|i| {
                add(e, s, a + i);
                add(e, s, b + i);
            });
        }
        at += size;
    }
    for p in 0..parts.len() {
        for q in p + 1..parts.len() {
            for u in starts[p]..starts[p] + boxes[p] {
                (starts[q]..starts[q] + boxes[q]).for_each(|v| add(e, u, v));
            }
        }
    }
}

fn connectivity(p: &ConnectivityParams, hit: &dyn Fn(usize) -> bool, e: &mut EdgeSet) -> usize {
    let l = p.l;
    let (a, ap, b, bp) = (0, l, 2 * l, 3 * l);
    for i in 0..l {
        for j in 0..l {
            if hit(i * l + j) {
                add(e, a + i, bp + j);
                add(e, b + i, ap + j);
            } else {
                add(e, a + i, ap + j);
                add(e, b + i, bp + j);
            }
        }
    }
    for t in 0..p.n - 4 * l {
        (0..p.k).for_each(|r| add(e, 4 * l + t, a + (t * p.k + r) % l));
    }
    p.n
}

fn degree_only(p: &DegreeOnlyParams, hit: &dyn Fn(usize) -> bool, e: &mut EdgeSet) -> usize {
    let (n, k) = (p.vertices, p.k);
    let third = n / 3;
    match (0..p.blocks).find(|&j| hit(j)) {
        Some(j) => {
            for u in j * k..(j + 1) * k {
                (third..n).for_each(|v| add(e, u, v));
            }
        }
        None => {
            for i in 0..p.blocks {
                for v in third + i * k..third + (i + 1) * k {
                    (2 * third + i * k..2 * third + (i + 1) * k).for_each(|w| add(e, v, w));
                }
            }
        }
    }
    n
}

fn moments_hiding(p: &MomentsHidingParams, hit: &dyn Fn(usize) -> bool, e: &mut EdgeSet) -> usize {
    let n0 = base_edges(&p.base, e);
    let (a, alpha) = (p.a, p.alpha);
    let blocks = p.blocks.expect("resolved");
    for j in (0..blocks).filter(|&j| hit(j)) {
        let s = n0 + j * (a + alpha);
        for u in s..s + a {
            (s + a..s + a + alpha).for_each(|v| add(e, u, v));
        }
    }
    n0 + blocks * (a + alpha)
}

/// Circulant `a_i ~ b_{i+r}` for offsets `r < d`; offsets `[jℓ, (j+1)ℓ)`
/// belong to coordinate `j` and move into `W_j` when it is hit.
fn moments_block(p: &MomentsBlockParams, hit: &dyn Fn(usize) -> bool, e: &mut EdgeSet) -> usize {
    let side = p.side;
    let (r0, w0) = (2 * side, 2 * side + p.alpha);
    for i in 0..side {
        for r in 0..p.d {
            if !hit(r / p.l) {
                add(e, i, side + (i + r) % side);
            }
        }
    }
    (r0..w0).for_each(|u| (u + 1..w0).for_each(|v| add(e, u, v)));
    for j in (0..p.blocks).filter(|&j| hit(j)) {
        for q in 0..p.w_size {
            for v in 0..2 * side {
                if v / p.w_degree == q / p.l {
                    add(e, w0 + j * p.w_size + q, v);
                }
            }
        }
    }
    w0 + p.blocks * p.w_size
}

/// Mismatches between `inst`'s lazy oracle, its materialization, and the
/// reference, over every supported query (RandomEdge only checked for
/// membership).
pub fn mismatches(inst: &EmbeddingInstance, rng: &mut ChaCha8Rng) -> Vec<String> {
    let inputs = inst.inputs();
    let (n, edges) = reference(inst.params(), &|j| inputs.both(j));
    let mut bad = Vec::new();
    if n != inst.vertex_count() {
        bad.push(format!("vertex count {} vs reference {n}", inst.vertex_count()));
        return bad;
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(u, v) in &edges {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    match materialize(inst) {
        Ok(g) => {
            let got: EdgeSet = g.edges().into_iter().collect();
            if got != edges {
                bad.push(format!("materialized edge set differs: {} vs {} edges", got.len(), edges.len()));
            }
        }
        Err(e) => bad.push(format!("materialize failed: {e}")),
    }
    if inst.edge_count() != edges.len() as u64 {
        bad.push(format!("edge_count {} vs reference {}", inst.edge_count(), edges.len()));
    }
    let mut ask = |q: Query| lazy_answer(inst, q, rng);
    for (v, nbrs) in adj.iter().enumerate() {
        let deg = nbrs.len();
        if inst.supports(QueryKind::Degree) && ask(Query::Degree(v)) != Ok(QueryAnswer::DegreeIs(deg)) {
            bad.push(format!("degree({v})"));
        }
        if inst.supports(QueryKind::Neighbor) {
            let mut seen = BTreeSet::new();
            for i in 1..=deg {
                match ask(Query::Neighbor(v, i)) {
                    Ok(QueryAnswer::NeighborIs(Some(w))) if nbrs.contains(&w) && seen.insert(w) => {}
                    other => bad.push(format!("neighbor({v}, {i}) = {other:?}")),
                }
            }
            if ask(Query::Neighbor(v, deg + 1)) != Ok(QueryAnswer::NeighborIs(None)) {
                bad.push(format!("neighbor({v}, {}) past degree", deg + 1));
            }
        }
        if inst.supports(QueryKind::Pair) {
            for u in 0..n {
                if ask(Query::Pair(v, u)) != Ok(QueryAnswer::PairIs(nbrs.contains(&u))) {
                    bad.push(format!("pair({v}, {u})"));
                }
            }
        }
    }
    if inst.supports(QueryKind::RandomEdge) {
        for _ in 0..20 {
            match ask(Query::RandomEdge) {
                Ok(QueryAnswer::EdgeIs(u, v)) if u < v && edges.contains(&(u, v)) => {}
                Err(qlb::graph::QueryError::NoEdges) if edges.is_empty() => {}
                other => bad.push(format!("random edge {other:?}")),
            }
        }
    }
    bad
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs[rng.gen_range(0..xs.len())]
}

fn random_base(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> BaseGraph {
    let n = rng.gen_range(lo..=hi);
    match rng.gen_range(0..5) {
        0 => BaseGraph::Empty { n },
        1 => BaseGraph::Path { n },
        2 if n >= 3 => BaseGraph::Cycle { n },
        3 => BaseGraph::Complete { n },
        _ => BaseGraph::Star { n },
    }
}

/// Random primary parameters of `kind` whose instances have at most
/// `max_n` vertices.
pub fn random_params(kind: EmbeddingKind, rng: &mut ChaCha8Rng, max_n: usize) -> EmbeddingParams {
    for _ in 0..100_000 {
        let p = match kind {
            EmbeddingKind::CliqueHiding => {
                let l = rng.gen_range(2..=6);
                EmbeddingParams::CliqueHiding(
                    CliqueHidingParams::new(random_base(rng, 1, 8), l, rng.gen_range(1..=10))
                        .with_target(rng.gen_range(2..=l.min(4)))
                        .with_augment_connect(rng.gen_bool(0.5)),
                )
            }
            EmbeddingKind::Triangle => {
                let l = rng.gen_range(1..=6);
                let s = rng.gen_range(1..=l);
                let extra = rng.gen_range(0..=4);
                EmbeddingParams::Triangle(
                    TriangleParams::new(l, rng.gen_range(1..=l * l)).with_s_size(s).with_n(4 * l + s + extra),
                )
            }
            EmbeddingKind::RClique => {
                let r = rng.gen_range(3..=6);
                let l = rng.gen_range(1..=5);
                let mut p = RCliqueParams::new(r, l, rng.gen_range(1..=l * l)).with_n((r + 2) * l + rng.gen_range(0..=3));
                if r >= 4 && rng.gen_bool(0.5) {
                    p = p.with_budget(rng.gen_range(1..=(l as u64).pow(r as u32 - 2)));
                }
                EmbeddingParams::RClique(p)
            }
            EmbeddingKind::Connectivity => {
                let k = rng.gen_range(1..=3);
                let l = rng.gen_range(2 * k..=2 * k + 4);
                EmbeddingParams::Connectivity(ConnectivityParams::new(k, l, 4 * l + rng.gen_range(0..=20)))
            }
            EmbeddingKind::DegreeOnly => {
                EmbeddingParams::DegreeOnly(DegreeOnlyParams::new(rng.gen_range(1..=150), rng.gen_range(1..=4)))
            }
            EmbeddingKind::MomentsHiding => {
                let mut p = MomentsHidingParams::new(
                    rng.gen_range(1..=3),
                    rng.gen_range(1..=4),
                    rng.gen_range(1..=3),
                    random_base(rng, 3, 10),
                );
                if rng.gen_bool(0.7) {
                    p = p.with_blocks(rng.gen_range(1..=4));
                }
                EmbeddingParams::MomentsHiding(p)
            }
            EmbeddingKind::MomentsBlock => {
                let s = rng.gen_range(1..=3);
                let n = rng.gen_range(4..=40);
                let top = (n as u128).pow(s) * 3;
                EmbeddingParams::MomentsBlock(MomentsBlockParams::new(
                    s,
                    rng.gen_range(2..=5),
                    pick(rng, &[1, 2, 3, 4]),
                    rng.gen_range(1..=top),
                    n,
                ))
            }
        };
        if let Ok(r) = p.resolve() {
            if let Ok(pair) = gen_promise_instance(r.input_len(), r.promise(), 0) {
                let inst = EmbeddingInstance::build(r.clone(), pair, 0).expect("resolved");
                if inst.vertex_count() <= max_n && r.input_len() > 0 {
                    return r;
                }
            }
        }
    }
    panic!("no feasible {kind:?} parameters found")
}

/// A random instance of `kind` on a fair promise side.
pub fn random_instance(kind: EmbeddingKind, rng: &mut ChaCha8Rng, max_n: usize) -> EmbeddingInstance {
    let params = random_params(kind, rng, max_n);
    let pair = gen_promise_instance(params.input_len(), params.promise(), rng.gen()).expect("feasible");
    EmbeddingInstance::build(params, pair, rng.gen()).expect("resolved")
}
