//! The mixed-graph data model.
//!
//! A [`MixedGraph`] has vertices `0..n`, a set of undirected edges and a set
//! of directed arcs. Edges are stored as `(u, v)` with `u < v`. An edge and an
//! arc may join the same pair of vertices, and so may two antiparallel arcs;
//! both configurations are 2-cycles and are left for verification to reject.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("endpoint {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(usize, usize),
    #[error("permutation of length {perm} applied to a graph on {n} vertices")]
    LengthMismatch { perm: usize, n: usize },
    #[error("image array is not a permutation")]
    NotAPermutation,
}

/// A simple mixed graph: no loops, no repeated edges, no repeated arcs.
///
/// Immutable once built; neighbour lists are derived from the sorted edge and
/// arc lists so structural equality is equality of those lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    arcs: Vec<(usize, usize)>,
    nbrs: Vec<Vec<usize>>,
    outs: Vec<Vec<usize>>,
    ins: Vec<Vec<usize>>,
}

impl MixedGraph {
    /// Validates and normalizes the incidence lists. Duplicates are errors.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        arcs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let check = |u: usize, v: usize| -> Result<(), GraphError> {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::OutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            Ok(())
        };

        let mut e: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            check(u, v)?;
            e.push((u.min(v), u.max(v)));
        }
        e.sort_unstable();
        if let Some(w) = e.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }

        let mut a: Vec<(usize, usize)> = Vec::new();
        for (u, v) in arcs {
            check(u, v)?;
            a.push((u, v));
        }
        a.sort_unstable();
        if let Some(w) = a.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateArc(w[0].0, w[0].1));
        }

        Ok(Self::from_sorted(n, e, a))
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>, arcs: Vec<(usize, usize)>) -> Self {
        let mut nbrs = vec![Vec::new(); n];
        let mut outs = vec![Vec::new(); n];
        let mut ins = vec![Vec::new(); n];
        for &(u, v) in &edges {
            nbrs[u].push(v);
            nbrs[v].push(u);
        }
        for &(u, v) in &arcs {
            outs[u].push(v);
            ins[v].push(u);
        }
        for list in nbrs.iter_mut().chain(outs.iter_mut()).chain(ins.iter_mut()) {
            list.sort_unstable();
        }
        MixedGraph {
            n,
            edges,
            arcs,
            nbrs,
            outs,
            ins,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new(), Vec::new())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Arcs as `(tail, head)`, sorted.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Undirected neighbours of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.outs[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.ins[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.binary_search(&(u, v)).is_ok()
    }

    /// The same graph with every arc reversed.
    pub fn converse(&self) -> MixedGraph {
        let mut arcs: Vec<_> = self.arcs.iter().map(|&(u, v)| (v, u)).collect();
        arcs.sort_unstable();
        Self::from_sorted(self.n, self.edges.clone(), arcs)
    }

    /// Returns a copy with one extra edge, or an error if it is invalid.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<MixedGraph, GraphError> {
        let mut edges = self.edges.clone();
        edges.push((u, v));
        MixedGraph::new(self.n, edges, self.arcs.iter().copied())
    }

    pub fn with_arc(&self, u: usize, v: usize) -> Result<MixedGraph, GraphError> {
        let mut arcs = self.arcs.clone();
        arcs.push((u, v));
        MixedGraph::new(self.n, self.edges.iter().copied(), arcs)
    }

    pub fn without_edge(&self, u: usize, v: usize) -> MixedGraph {
        let key = (u.min(v), u.max(v));
        let edges = self.edges.iter().copied().filter(|&e| e != key).collect();
        Self::from_sorted(self.n, edges, self.arcs.clone())
    }

    /// Relabels vertex `v` as `p(v)`; arc direction is preserved.
    pub fn apply_permutation(&self, p: &Permutation) -> Result<MixedGraph, GraphError> {
        if p.len() != self.n {
            return Err(GraphError::LengthMismatch {
                perm: p.len(),
                n: self.n,
            });
        }
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (p.apply(u), p.apply(v));
                (a.min(b), a.max(b))
            })
            .collect();
        let mut arcs: Vec<_> = self
            .arcs
            .iter()
            .map(|&(u, v)| (p.apply(u), p.apply(v)))
            .collect();
        edges.sort_unstable();
        arcs.sort_unstable();
        Ok(Self::from_sorted(self.n, edges, arcs))
    }

    /// True when `p` maps the graph onto itself.
    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.len() == self.n
            && self.edges.iter().all(|&(u, v)| self.has_edge(p.apply(u), p.apply(v)))
            && self.arcs.iter().all(|&(u, v)| self.has_arc(p.apply(u), p.apply(v)))
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let deg: Vec<usize> = self.nbrs.iter().map(Vec::len).collect();
        let outdeg: Vec<usize> = self.outs.iter().map(Vec::len).collect();
        let indeg: Vec<usize> = self.ins.iter().map(Vec::len).collect();
        let constant = |xs: &[usize]| xs.windows(2).all(|w| w[0] == w[1]);
        let regular = if constant(&deg) && constant(&outdeg) && outdeg == indeg {
            Some(Regularity {
                r: deg.first().copied().unwrap_or(0),
                z: outdeg.first().copied().unwrap_or(0),
            })
        } else {
            None
        };
        DegreeProfile {
            deg,
            outdeg,
            indeg,
            regular,
        }
    }
}

/// Edge-degree `r` and common in/out-degree `z` of a regular mixed graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regularity {
    pub r: usize,
    pub z: usize,
}

/// Per-vertex degree counts with a regularity witness when one exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub deg: Vec<usize>,
    pub outdeg: Vec<usize>,
    pub indeg: Vec<usize>,
    pub regular: Option<Regularity>,
}

impl DegreeProfile {
    pub fn is_regular_with(&self, r: usize, z: usize) -> bool {
        self.regular == Some(Regularity { r, z })
    }
}

/// Target parameters `(r, z, g)`: edge-degree, out-degree, girth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CageParams {
    pub r: usize,
    pub z: usize,
    pub g: usize,
}

impl CageParams {
    pub fn new(r: usize, z: usize, g: usize) -> Self {
        CageParams { r, z, g }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_graphs() {
        let g = MixedGraph::new(2, [(0, 1)], []).unwrap();
        assert_eq!(g.edges().len(), 1);
        assert!(g.arcs().is_empty());

        let g = MixedGraph::new(2, [], [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.arcs(), &[(0, 1), (1, 0)]);
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(
            MixedGraph::new(1, [(0, 0)], []),
            Err(GraphError::SelfLoop(0))
        );
        assert_eq!(
            MixedGraph::new(2, [(0, 2)], []),
            Err(GraphError::OutOfRange { vertex: 2, n: 2 })
        );
        assert_eq!(
            MixedGraph::new(3, [(0, 1), (1, 0)], []),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(
            MixedGraph::new(3, [], [(2, 1), (2, 1)]),
            Err(GraphError::DuplicateArc(2, 1))
        );
        // an edge and an arc on the same pair are both kept
        let g = MixedGraph::new(2, [(1, 0)], [(0, 1)]).unwrap();
        assert!(g.has_edge(0, 1) && g.has_arc(0, 1) && !g.has_arc(1, 0));
    }

    #[test]
    fn degree_profiles() {
        let c3 = MixedGraph::new(3, [], [(0, 1), (1, 2), (2, 0)]).unwrap();
        let p = c3.degree_profile();
        assert_eq!(p.deg, vec![0, 0, 0]);
        assert_eq!(p.outdeg, vec![1, 1, 1]);
        assert_eq!(p.indeg, vec![1, 1, 1]);
        assert_eq!(p.regular, Some(Regularity { r: 0, z: 1 }));

        let path = MixedGraph::new(3, [(0, 1)], []).unwrap();
        let p = path.degree_profile();
        assert_eq!(p.deg, vec![1, 1, 0]);
        assert_eq!(p.regular, None);

        // constant in and out degree that differ per vertex is not regular
        let g = MixedGraph::new(2, [], [(0, 1)]).unwrap();
        assert_eq!(g.degree_profile().regular, None);
    }

    #[test]
    fn permutation_relabeling() {
        let g = MixedGraph::new(3, [(0, 1)], [(1, 2)]).unwrap();
        assert_eq!(g.apply_permutation(&Permutation::identity(3)).unwrap(), g);

        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let h = g.apply_permutation(&p).unwrap();
        assert!(h.has_edge(2, 0));
        assert!(h.has_arc(0, 1));

        let two = MixedGraph::new(2, [], [(0, 1), (1, 0)]).unwrap();
        let swap = Permutation::new(vec![1, 0]).unwrap();
        assert_eq!(two.apply_permutation(&swap).unwrap(), two);

        assert_eq!(
            g.apply_permutation(&Permutation::identity(2)),
            Err(GraphError::LengthMismatch { perm: 2, n: 3 })
        );
    }
}
