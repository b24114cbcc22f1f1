use qlb::embeddings::{
    materialize, BaseGraph, CliqueHidingParams, ConnectivityParams, DegreeOnlyParams, EmbeddingInstance,
    EmbeddingParams, MomentsBlockParams, MomentsHidingParams, RCliqueParams, TriangleParams,
};
use qlb::graph::ExplicitGraph;
use qlb::inputs::Side;
use qlb::protocol::gen_on_side;
use qlb::seed::rng_from_seed;
use qlb::verify::verify_instance;

fn sample_params() -> Vec<EmbeddingParams> {
    vec![
        EmbeddingParams::CliqueHiding(CliqueHidingParams::new(BaseGraph::Cycle { n: 6 }, 4, 3)),
        EmbeddingParams::CliqueHiding(CliqueHidingParams::new(BaseGraph::Complete { n: 4 }, 4, 2).with_target(3)),
        EmbeddingParams::CliqueHiding(
            CliqueHidingParams::new(BaseGraph::Path { n: 5 }, 3, 2).with_augment_connect(true),
        ),
        EmbeddingParams::Triangle(TriangleParams::new(4, 2)),
        EmbeddingParams::Triangle(TriangleParams::new(3, 1).with_s_size(1)),
        EmbeddingParams::RClique(RCliqueParams::new(4, 3, 2)),
        EmbeddingParams::RClique(RCliqueParams::new(5, 3, 1).with_budget(4)),
        EmbeddingParams::Connectivity(ConnectivityParams::new(2, 4, 20)),
        EmbeddingParams::DegreeOnly(DegreeOnlyParams::new(12, 2)),
        EmbeddingParams::MomentsHiding(MomentsHidingParams::new(2, 2, 2, BaseGraph::Cycle { n: 4 }).with_blocks(2)),
        EmbeddingParams::MomentsBlock(MomentsBlockParams::new(2, 4, 1, 130, 8)),
        EmbeddingParams::MomentsBlock(MomentsBlockParams::new(2, 2, 4, 56, 30)),
    ]
}

fn instance(params: &EmbeddingParams, side: Side, seed: u64) -> EmbeddingInstance {
    let resolved = params.clone().resolve().unwrap();
    let pair = gen_on_side(resolved.input_len(), resolved.promise(), side, &mut rng_from_seed(seed)).unwrap();
    EmbeddingInstance::build(resolved, pair, seed).unwrap()
}

#[test]
fn every_check_passes_on_honest_graphs() {
    for params in sample_params() {
        for side in [Side::Disjoint, Side::Intersecting] {
            for seed in 0..3 {
                let inst = instance(&params, side, seed);
                let g = materialize(&inst).unwrap();
                for r in verify_instance(&inst, &g) {
                    assert!(r.pass, "{:?} {side:?}: {}", inst.kind(), r.to_json_line());
                }
            }
        }
    }
}

#[test]
fn deleting_an_edge_is_caught() {
    for params in sample_params() {
        for side in [Side::Disjoint, Side::Intersecting] {
            let inst = instance(&params, side, 7);
            let g = materialize(&inst).unwrap();
            let Some(&(u, v)) = g.edges().first() else { continue };
            let damaged: ExplicitGraph = g.without_edge(u, v);
            let reports = verify_instance(&inst, &damaged);
            assert!(reports.iter().any(|r| !r.pass), "{:?} {side:?}", inst.kind());
        }
    }
}

