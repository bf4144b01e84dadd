use gwloc::graphs::{DecoratedGraph, RefinedTree};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// One enumerated fixed locus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub encoding: String,
    /// Vertex labels in encoding order; `null` for dashed vertices.
    pub mu: Vec<Option<u8>>,
    pub deg: Vec<u32>,
    pub aut: u64,
    #[serde(rename = "A_order")]
    pub a_order: u64,
    #[serde(rename = "locusData", default, skip_serializing_if = "Option::is_none")]
    pub locus_data: Option<serde_json::Value>,
}

impl GraphRecord {
    pub fn from_graph(g: &DecoratedGraph) -> Self {
        let parsed = DecoratedGraph::parse(&g.canonical_encoding()).unwrap_or_else(|_| g.clone());
        GraphRecord {
            encoding: parsed.canonical_encoding(),
            mu: parsed.vertices.iter().map(|v| Some(v.label)).collect(),
            deg: parsed.edges.iter().map(|e| e.degree).collect(),
            aut: parsed.automorphism_count(),
            a_order: parsed.automorphism_factor(),
            locus_data: None,
        }
    }

    pub fn from_tree(t: &RefinedTree) -> Result<Self, CliError> {
        let data = t.locus_data()?;
        Ok(GraphRecord {
            encoding: t.encoding(),
            mu: t.nodes().iter().map(|v| v.label).collect(),
            deg: t.nodes().iter().filter_map(|v| v.degree).collect(),
            aut: t.automorphism_count(),
            a_order: t.automorphism_factor(),
            locus_data: Some(serde_json::to_value(data)?),
        })
    }

    pub fn graph(&self) -> Result<DecoratedGraph, CliError> {
        Ok(DecoratedGraph::parse(&self.encoding)?)
    }

    pub fn tree(&self) -> Result<RefinedTree, CliError> {
        Ok(RefinedTree::parse(&self.encoding)?)
    }
}
