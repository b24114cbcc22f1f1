use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::graph::{answer_on_explicit, validate_graph};
use crate::protocol::gen_promise_instance;

fn bv(s: &str) -> BitVector {
    BitVector::from_binary_str(s).unwrap()
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(9)
}

fn build(params: EmbeddingParams, x: BitVector, y: BitVector, promise: Promise) -> EmbeddingInstance {
    EmbeddingInstance::build(params, PromisePair::new(x, y, promise).unwrap(), 0).unwrap()
}

fn unit(len: usize, hot: &[usize]) -> BitVector {
    let mut v = BitVector::zeros(len);
    for &j in hot {
        v.set(j, true);
    }
    v
}

/// Every supported deterministic query, lazily and on the materialized graph.
fn assert_equivalent(inst: &EmbeddingInstance) {
    let g = materialize(inst).unwrap();
    assert!(validate_graph(&g).is_empty(), "{:?}", validate_graph(&g));
    assert_eq!(g.m() as u64, inst.edge_count());
    let n = inst.vertex_count();
    let mut r = rng();
    for v in 0..n {
        let q = Query::Degree(v);
        assert_eq!(lazy_answer(inst, q, &mut r), answer_on_explicit(&g, q, &mut r), "{q:?}");
        if inst.supports(QueryKind::Neighbor) {
            for i in 1..n {
                let q = Query::Neighbor(v, i);
                assert_eq!(lazy_answer(inst, q, &mut r), answer_on_explicit(&g, q, &mut r), "{q:?}");
            }
        }
        if inst.supports(QueryKind::Pair) {
            for u in 0..n {
                let q = Query::Pair(u, v);
                assert_eq!(lazy_answer(inst, q, &mut r), answer_on_explicit(&g, q, &mut r), "{q:?}");
            }
        }
    }
    if let Some(table) = inst.degree_table() {
        assert_eq!(table.degrees(), (0..n).map(|v| g.degree(v)).collect::<Vec<_>>());
    }
}

#[test]
fn clique_hiding_edge_counts() {
    let p = EmbeddingParams::CliqueHiding(CliqueHidingParams::new(BaseGraph::Path { n: 4 }, 3, 2));
    let disjoint = build(p.clone(), bv("10"), bv("01"), Promise::UniqueIntersection);
    let g = materialize(&disjoint).unwrap();
    assert_eq!(g.m(), 3);
    assert!((4..10).all(|v| g.degree(v) == 0));
    let hit = build(p, bv("11"), bv("01"), Promise::UniqueIntersection);
    assert_eq!(materialize(&hit).unwrap().m(), 6);
    assert_equivalent(&disjoint);
    assert_equivalent(&hit);
}

#[test]
fn clique_hiding_block_ordering_is_modular() {
    let p = EmbeddingParams::CliqueHiding(CliqueHidingParams::new(BaseGraph::Empty { n: 1 }, 4, 1));
    let inst = build(p, bv("1"), bv("1"), Promise::UniqueIntersection);
    let g = materialize(&inst).unwrap();
    // block vertex z sits at 1 + z
    for z in 0..4 {
        let expect: Vec<usize> = (1..4).map(|i| 1 + (z + i) % 4).collect();
        assert_eq!(g.neighbors(1 + z), expect.as_slice());
    }
}

#[test]
fn clique_hiding_augmented_is_diameter_two() {
    let base = BaseGraph::Cycle { n: 6 };
    let p = CliqueHidingParams::new(base, 3, 3).with_augment_connect(true);
    for (x, y) in [("101", "010"), ("110", "011")] {
        let inst = build(EmbeddingParams::CliqueHiding(p.clone()), bv(x), bv(y), Promise::UniqueIntersection);
        assert_equivalent(&inst);
        let g = materialize(&inst).unwrap();
        for u in 0..g.n() {
            for v in 0..g.n() {
                let close = u == v
                    || g.has_edge(u, v)
                    || g.neighbors(u).iter().any(|&w| g.has_edge(w, v));
                assert!(close, "{u} and {v} are more than 2 apart");
            }
        }
        // the hub comes last in every non-hub ordering it joins
        for v in 6..g.n() {
            assert_eq!(g.neighbors(v).last(), Some(&0));
        }
    }
}

#[test]
fn edge_counting_preset() {
    let m0 = 16;
    let l = edge_counting_block_size(0.25, m0);
    assert_eq!(l, 4);
    assert!(binom(l as u64, 2).unwrap() as f64 >= 0.25 * m0 as f64);
    let base = BaseGraph::Cycle { n: 16 };
    let p = EmbeddingParams::CliqueHiding(CliqueHidingParams::new(base, l, 3));
    let hit = build(p.clone(), bv("010"), bv("011"), Promise::UniqueIntersection);
    let m = materialize(&hit).unwrap().m();
    assert!(m as f64 >= 1.25 * m0 as f64, "m = {m}");
    let miss = build(p, bv("010"), bv("101"), Promise::UniqueIntersection);
    assert_eq!(materialize(&miss).unwrap().m(), m0);
    assert_eq!(triangle_testing_block_size(0.25, 64), 4);
    assert_eq!(edge_sampling_block_size(16), 7);
}

fn binom(n: u64, k: u64) -> Option<u64> {
    crate::arith::binom(n, k)
}

#[test]
fn triangle_counts_and_layout() {
    let l = 4;
    let params = TriangleParams::new(l, 2);
    let x = unit(16, &[1, 6]);
    let y = unit(16, &[1, 6, 9]);
    let inst = build(EmbeddingParams::Triangle(params.clone()), x, y, Promise::KIntersectOrDisjoint { k: 2 });
    assert_eq!(inst.edge_count(), 64);
    assert_equivalent(&inst);
    let mut r = rng();
    // a_i: j-th neighbor b_j or a′_j, then S in index order
    let a1 = (1..=2 * l)
        .map(|i| match lazy_answer(&inst, Query::Neighbor(1, i), &mut r).unwrap() {
            QueryAnswer::NeighborIs(Some(w)) => w,
            other => panic!("{other:?}"),
        })
        .collect::<Vec<_>>();
    // coordinate (1, 1) = 5 is not shared, (1, 2) = 6 is
    assert_eq!(a1, vec![4, 5, 10, 7, 16, 17, 18, 19]);
    assert_eq!(lazy_answer(&inst, Query::Degree(16), &mut r), Ok(QueryAnswer::DegreeIs(8)));
    assert_eq!(lazy_answer(&inst, Query::Degree(5), &mut r), Ok(QueryAnswer::DegreeIs(4)));
}

#[test]
fn triangle_degree_reads_nothing() {
    let inst = build(
        EmbeddingParams::Triangle(TriangleParams::new(4, 1)),
        unit(16, &[3]),
        unit(16, &[3]),
        Promise::KIntersectOrDisjoint { k: 1 },
    );
    let mut src = DirectSource::new(inst.inputs());
    let a = inst.answer_with(Query::Degree(16), &mut rng(), &mut src).unwrap();
    assert_eq!(a, QueryAnswer::DegreeIs(8));
    assert_eq!(src.reads(), 0);
}

#[test]
fn r_clique_edge_count() {
    let p = RCliqueParams::new(4, 3, 2);
    let inst = build(
        EmbeddingParams::RClique(p.clone()),
        unit(9, &[0, 4]),
        unit(9, &[0, 4]),
        Promise::KIntersectOrDisjoint { k: 2 },
    );
    assert_eq!(inst.edge_count(), 63);
    let EmbeddingParams::RClique(resolved) = inst.params() else { unreachable!() };
    assert_eq!(resolved.full_edge_count(), 63);
    assert_eq!(resolved.intersecting_cliques(), 18);
    assert_equivalent(&inst);
}

#[test]
fn sparse_s_boxes() {
    let p = EmbeddingParams::RClique(RCliqueParams::new(5, 4, 1).with_budget(20)).resolve().unwrap();
    let EmbeddingParams::RClique(p) = p else { unreachable!() };
    // t = ⌊20^{1/3}⌋ = 2, u = ⌊20/4⌋ = 5 capped at ℓ = 4
    assert_eq!(p.boxes, vec![2, 2, 4]);
    assert_eq!(p.s_cliques, 16);
    let inst = build(EmbeddingParams::RClique(p), unit(16, &[5]), unit(16, &[5]), Promise::KIntersectOrDisjoint { k: 1 });
    assert_equivalent(&inst);
    for bad in [0, 1000] {
        assert!(EmbeddingParams::RClique(RCliqueParams::new(4, 3, 1).with_budget(bad)).resolve().is_err());
    }
    assert!(EmbeddingParams::RClique(RCliqueParams::new(3, 3, 1).with_budget(2)).resolve().is_err());
}

#[test]
fn connectivity_formula_and_rules() {
    let p = ConnectivityParams::new(2, 4, 20);
    assert_eq!(p.edge_count(), 40);
    let inst = build(
        EmbeddingParams::Connectivity(p),
        unit(16, &[2, 13, 7]),
        unit(16, &[2, 13]),
        Promise::KIntersectOrDisjoint { k: 2 },
    );
    assert_eq!(inst.edge_count(), 40);
    assert_equivalent(&inst);
    let g = materialize(&inst).unwrap();
    // c_t attaches to a_{(2t + r) mod 4}
    assert_eq!(g.neighbors(16), &[0, 1]);
    assert_eq!(g.neighbors(17), &[2, 3]);
    assert_eq!(g.neighbors(18), &[0, 1]);
    assert!(EmbeddingParams::Connectivity(ConnectivityParams::new(3, 5, 20)).resolve().is_err());
    assert_eq!(connectivity_block_side(2, 40, 30), Some(6));
}

#[test]
fn degree_only_counts() {
    let p = EmbeddingParams::DegreeOnly(DegreeOnlyParams::new(12, 2));
    let miss = build(p.clone(), bv("10"), bv("01"), Promise::UniqueIntersection);
    assert_eq!(materialize(&miss).unwrap().m(), 8);
    let hit = build(p, bv("01"), bv("01"), Promise::UniqueIntersection);
    let g = materialize(&hit).unwrap();
    assert_eq!(g.m(), 16);
    assert_eq!(g.adjacency().iter().map(Vec::len).sum::<usize>(), 32);
    for v in 4..12 {
        assert_eq!(lazy_answer(&miss, Query::Degree(v), &mut rng()), Ok(QueryAnswer::DegreeIs(2)));
        assert_eq!(lazy_answer(&hit, Query::Degree(v), &mut rng()), Ok(QueryAnswer::DegreeIs(2)));
    }
    assert_equivalent(&hit);
    assert!(matches!(
        lazy_answer(&hit, Query::Pair(0, 5), &mut rng()),
        Err(QueryError::Unsupported { kind: QueryKind::Pair, .. })
    ));
    let padded = EmbeddingParams::DegreeOnly(DegreeOnlyParams::new(13, 2)).resolve().unwrap();
    let EmbeddingParams::DegreeOnly(padded) = padded else { unreachable!() };
    assert_eq!((padded.vertices, padded.padding, padded.blocks), (18, 5, 3));
}

#[test]
fn moments_hiding_block() {
    let p = MomentsHidingParams::new(2, 2, 2, BaseGraph::Cycle { n: 4 }).with_blocks(2);
    let resolved = EmbeddingParams::MomentsHiding(p.clone()).resolve().unwrap();
    let EmbeddingParams::MomentsHiding(r) = &resolved else { unreachable!() };
    assert_eq!(r.m_tilde, Some(16));
    assert_eq!(r.a, 4);
    assert_eq!(r.hidden_moment(), 48);
    let hit = build(resolved.clone(), bv("01"), bv("11"), Promise::UniqueIntersection);
    assert_equivalent(&hit);
    let g = materialize(&hit).unwrap();
    assert_eq!(moments::moment_of(&g, 2), 16 + 48);
    let miss = build(resolved, bv("01"), bv("10"), Promise::UniqueIntersection);
    assert_eq!(moments::moment_of(&materialize(&miss).unwrap(), 2), 16);
    // default block count needs n′ ≥ a + α
    assert!(EmbeddingParams::MomentsHiding(MomentsHidingParams::new(2, 2, 2, BaseGraph::Cycle { n: 4 }))
        .resolve()
        .is_err());
    assert!(EmbeddingParams::MomentsHiding(p.with_m_tilde(17)).resolve().is_err());
}

fn block_params(p: MomentsBlockParams) -> MomentsBlockParams {
    match EmbeddingParams::MomentsBlock(p).resolve().unwrap() {
        EmbeddingParams::MomentsBlock(p) => p,
        _ => unreachable!(),
    }
}

#[test]
fn moments_block_high_case() {
    // s = 2, n = 8, M̃ = 130 > n² ⇒ HighMoment; α²·n = 128 < 130 ⇒ d = α = 4
    let p = block_params(MomentsBlockParams::new(2, 4, 1, 130, 8));
    assert_eq!(p.case, Some(MomentCase::HighMoment));
    assert_eq!(p.subcase, Some(MomentSubcase::SmallAlpha));
    assert_eq!((p.d, p.l, p.w_size, p.blocks, p.w_degree), (4, 1, 1, 4, 16));
    let miss = build(EmbeddingParams::MomentsBlock(p.clone()), bv("1010"), bv("0101"), Promise::UniqueIntersection);
    let g = materialize(&miss).unwrap();
    assert!((0..16).all(|v| g.degree(v) == 4));
    assert!((20..24).all(|v| g.degree(v) == 0));
    assert_eq!(moments::moment_of(&g, 2), p.disjoint_moment());
    assert_eq!(p.disjoint_moment(), 2 * 8 * 16 + 4 * 9);
    assert_equivalent(&miss);
    let hit = build(EmbeddingParams::MomentsBlock(p.clone()), bv("0010"), bv("0111"), Promise::UniqueIntersection);
    let g = materialize(&hit).unwrap();
    assert_eq!(g.degree(22), 16);
    assert_eq!(moments::moment_of(&g, 2), p.intersecting_moment());
    assert_equivalent(&hit);
}

#[test]
fn moments_block_low_case() {
    // s = 1, c = 4, n = 40: c·M̃ = 24 ≤ 40 ⇒ LowMoment; α·n = 80 ≥ 6 ⇒ d = ⌊6/40⌋ = 0 fails
    assert!(EmbeddingParams::MomentsBlock(MomentsBlockParams::new(1, 2, 4, 6, 40)).resolve().is_err());
    // s = 2, c = 4, n = 30, M̃ = 56: c²M̃ = 896 ≤ 900; α = 2: α²n = 120 ≥ 56 ⇒ d = ⌊√(56/30)⌋ = 1
    let p = block_params(MomentsBlockParams::new(2, 2, 4, 56, 30));
    assert_eq!(p.case, Some(MomentCase::LowMoment));
    assert_eq!(p.subcase, Some(MomentSubcase::LargeAlpha));
    assert_eq!((p.d, p.l, p.w_size), (1, 1, 4));
    // W degree is 2nℓ/c, at least M̃^{1/s}
    assert_eq!(p.w_degree, 15);
    assert!(p.w_degree * p.w_degree >= 56);
    let hit = build(EmbeddingParams::MomentsBlock(p.clone()), bv("1"), bv("1"), Promise::UniqueIntersection);
    assert_equivalent(&hit);
    let g = materialize(&hit).unwrap();
    assert_eq!(moments::moment_of(&g, 2), p.intersecting_moment());
    // padding: c = 4 must divide 2n
    let q = block_params(MomentsBlockParams::new(2, 2, 4, 56, 31));
    assert_eq!((q.side, q.padding), (32, 1));
    // between the two cases
    assert!(EmbeddingParams::MomentsBlock(MomentsBlockParams::new(2, 2, 4, 100, 30)).resolve().is_err());
}

#[test]
fn json_round_trip_and_tamper_detection() {
    let pair = gen_promise_instance(16, Promise::KIntersectOrDisjoint { k: 2 }, 4).unwrap();
    let inst = EmbeddingInstance::build(EmbeddingParams::Triangle(TriangleParams::new(4, 2)), pair, 4).unwrap();
    let json = inst.to_json(true);
    let file: InstanceFile = serde_json::from_str(&json).unwrap();
    let back = EmbeddingInstance::from_file(&file).unwrap();
    assert_eq!(back.inputs(), inst.inputs());
    assert_eq!(materialize(&back).unwrap(), materialize(&inst).unwrap());
    assert_eq!(back.to_json(true), json);

    let tampered = json.replace("\"coordinates\": 16", "\"coordinates\": 15");
    assert_ne!(tampered, json);
    let file: InstanceFile = serde_json::from_str(&tampered).unwrap();
    assert!(matches!(EmbeddingInstance::from_file(&file), Err(EmbeddingError::DerivedMismatch(_))));
}

#[test]
fn wrong_promise_and_length_rejected() {
    let p = EmbeddingParams::Triangle(TriangleParams::new(2, 1));
    let pair = PromisePair::new(bv("1000"), bv("1000"), Promise::UniqueIntersection).unwrap();
    assert!(matches!(EmbeddingInstance::build(p.clone(), pair, 0), Err(EmbeddingError::WrongPromise { .. })));
    let pair = PromisePair::new(bv("100"), bv("100"), Promise::KIntersectOrDisjoint { k: 1 }).unwrap();
    assert!(matches!(EmbeddingInstance::build(p, pair, 0), Err(EmbeddingError::InputLength { .. })));
}

#[test]
fn cap_refuses_large_instances() {
    let pair = gen_promise_instance(16, Promise::KIntersectOrDisjoint { k: 1 }, 0).unwrap();
    let inst = EmbeddingInstance::build(EmbeddingParams::Triangle(TriangleParams::new(4, 1)), pair, 0).unwrap();
    let cap = MaterializeCap { max_vertices: 10, max_edges: 1000 };
    assert!(matches!(materialize_capped(&inst, cap), Err(EmbeddingError::CapExceeded { .. })));
}

#[test]
fn gap_labels() {
    let p = EmbeddingParams::CliqueHiding(CliqueHidingParams::new(BaseGraph::Path { n: 4 }, 3, 2));
    assert!(gap_label(&build(p.clone(), bv("10"), bv("01"), Promise::UniqueIntersection)).unwrap());
    assert!(!gap_label(&build(p, bv("11"), bv("01"), Promise::UniqueIntersection)).unwrap());
    let t = EmbeddingParams::Triangle(TriangleParams::new(2, 1));
    assert!(gap_label(&build(t, bv("0100"), bv("0110"), Promise::KIntersectOrDisjoint { k: 1 })).unwrap());
}

#[test]
fn wide_moment_fields_survive_json() {
    let big = u64::MAX as u128 + 5;
    let p = EmbeddingParams::MomentsHiding(MomentsHidingParams::new(2, 2, 2, BaseGraph::Cycle { n: 4 }).with_m_tilde(big));
    let text = serde_json::to_string(&p).unwrap();
    assert!(text.contains(&format!("\"{big}\"")), "{text}");
    assert_eq!(serde_json::from_str::<EmbeddingParams>(&text).unwrap(), p);
    let small = EmbeddingParams::MomentsBlock(MomentsBlockParams::new(2, 4, 1, 130, 8));
    let text = serde_json::to_string(&small).unwrap();
    assert!(text.contains("\"m_tilde\":130"), "{text}");
    assert_eq!(serde_json::from_str::<EmbeddingParams>(&text).unwrap(), small);
}
