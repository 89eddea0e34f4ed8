//! Resumable search checkpoints.
//!
//! A checkpoint is a JSON document:
//!
//! ```json
//! {
//!   "format": "mixcage-checkpoint",
//!   "version": 1,
//!   "params": {"r": 3, "z": 1, "g": 6},
//!   "n": 30,
//!   "mode": "decide",
//!   "skeleton": 4,
//!   "parts": [26, 4],
//!   "path": [0, 2, 1],
//!   "stats": {"nodes": 1000, ...},
//!   "witnesses": [{"edges": [[0, 5], ...], "arcs": [[0, 1], ...]}]
//! }
//! ```
//!
//! `skeleton` indexes the skeleton stream for `(n, g)`; `path` lists child
//! indices from that skeleton's root down to the first node not yet visited.
//! The search is deterministic, so replaying the path rebuilds the frontier.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::graph::{CageParams, MixedGraph};

use super::{Mode, SearchError, SearchStats};

pub const FORMAT: &str = "mixcage-checkpoint";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub arcs: Vec<(usize, usize)>,
}

impl From<&MixedGraph> for GraphRecord {
    fn from(g: &MixedGraph) -> Self {
        GraphRecord {
            n: g.order(),
            edges: g.edges().to_vec(),
            arcs: g.arcs().to_vec(),
        }
    }
}

impl GraphRecord {
    pub fn to_graph(&self) -> Result<MixedGraph, SearchError> {
        MixedGraph::new(self.n, self.edges.iter().copied(), self.arcs.iter().copied())
            .map_err(|e| SearchError::BadCheckpoint(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub params: CageParams,
    pub n: usize,
    pub mode: Mode,
    pub skeleton: usize,
    pub parts: Vec<usize>,
    pub path: Vec<usize>,
    pub stats: SearchStats,
    pub witnesses: Vec<GraphRecord>,
}

impl Checkpoint {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("checkpoint serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SearchError> {
        let c: Checkpoint = serde_json::from_str(text).map_err(|e| SearchError::BadCheckpoint(e.to_string()))?;
        if c.format != FORMAT {
            return Err(SearchError::BadCheckpoint(format!("unknown format {:?}", c.format)));
        }
        if c.version != VERSION {
            return Err(SearchError::BadCheckpoint(format!("unsupported version {}", c.version)));
        }
        Ok(c)
    }

    pub fn save(&self, path: &Path) -> Result<(), SearchError> {
        std::fs::write(path, self.to_json()).map_err(|e| SearchError::Io(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, SearchError> {
        let text = std::fs::read_to_string(path).map_err(|e| SearchError::Io(e.to_string()))?;
        Self::from_json(&text)
    }
}
