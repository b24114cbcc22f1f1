use serde::{Deserialize, Serialize};

use crate::graph::{validate_graph, ExplicitGraph};

use super::EmbeddingError;

/// A fixed base graph `G′`, described by family so instance files stay small.
/// Neighbor orderings are ascending by id except for `Explicit`, which keeps
/// the orderings it was given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BaseGraph {
    Empty { n: usize },
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    Star { n: usize },
    Explicit { edge_list: String },
}

impl BaseGraph {
    pub fn build(&self) -> Result<ExplicitGraph, EmbeddingError> {
        let invalid = |c: &str| EmbeddingError::InvalidParams {
            kind: "base graph",
            constraint: c.to_string(),
        };
        Ok(match *self {
            BaseGraph::Empty { n } => ExplicitGraph::empty(n),
            BaseGraph::Path { n } => ExplicitGraph::from_edges(n, (1..n).map(|v| (v - 1, v))),
            BaseGraph::Cycle { n } => {
                if n < 3 {
                    return Err(invalid("a cycle needs n ≥ 3"));
                }
                ExplicitGraph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
            }
            BaseGraph::Complete { n } => {
                ExplicitGraph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
            }
            BaseGraph::Star { n } => ExplicitGraph::from_edges(n, (1..n).map(|v| (0, v))),
            BaseGraph::Explicit { ref edge_list } => {
                let g = ExplicitGraph::parse_edge_list(edge_list)
                    .map_err(|e| invalid(&format!("base edge list: {e}")))?;
                if let Some(f) = validate_graph(&g).first() {
                    return Err(invalid(&format!("base graph is not simple and undirected: {f:?}")));
                }
                g
            }
        })
    }

    /// Parses `family:n` (e.g. `cycle:8`).
    pub fn parse_family(spec: &str) -> Option<Self> {
        let (family, n) = spec.split_once(':')?;
        let n: usize = n.parse().ok()?;
        Some(match family {
            "empty" => BaseGraph::Empty { n },
            "path" => BaseGraph::Path { n },
            "cycle" => BaseGraph::Cycle { n },
            "complete" => BaseGraph::Complete { n },
            "star" => BaseGraph::Star { n },
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        assert_eq!(BaseGraph::Path { n: 4 }.build().unwrap().m(), 3);
        assert_eq!(BaseGraph::Cycle { n: 5 }.build().unwrap().m(), 5);
        assert_eq!(BaseGraph::Complete { n: 5 }.build().unwrap().m(), 10);
        assert_eq!(BaseGraph::Star { n: 4 }.build().unwrap().m(), 3);
        assert!(BaseGraph::Cycle { n: 2 }.build().is_err());
        assert_eq!(BaseGraph::parse_family("cycle:4"), Some(BaseGraph::Cycle { n: 4 }));
        assert_eq!(BaseGraph::parse_family("torus:4"), None);
    }

    #[test]
    fn explicit_keeps_ordering() {
        let g = BaseGraph::Explicit { edge_list: "n 3\n0: 2 1\n1: 0\n2: 0\n".into() }
            .build()
            .unwrap();
        assert_eq!(g.neighbors(0), &[2, 1]);
        let bad = BaseGraph::Explicit { edge_list: "n 2\n0: 1\n1:\n".into() };
        assert!(bad.build().is_err());
    }
}
