//! The order-30 `(3,1,6)` graph and a three-row generalization of it.
//!
//! Vertices are `v(i, j)` for row `i in 0..3` and position `j in 0..m`, with
//! index `m*i + j`. Each row may carry the directed cycle
//! `v(i,j) -> v(i,j+1)`. Undirected edges come in families
//! `{v(a, j), v(b, j + offset)}` over all `j`, positions taken mod `m`.
//!
//! The written rules for the order-30 graph are one arc family and four edge
//! families:
//!
//! * arcs `v(0,j) -> v(0,j+1)`, with every row inducing a directed 10-cycle;
//! * edges `{v(0,j), v(1,j)}`, `{v(0,j), v(2,j+5)}`, `{v(1,j), v(2,j+2)}`,
//!   `{v(1,j), v(2,j-2)}`.
//!
//! Taken literally they leave row 0 at edge-degree 2. [`build_g30`] checks
//! the literal graph, and when it falls short searches every single extra
//! edge family for completions that reach degree 3, out-degree 1 and girth 6.
//! Exactly one exists, the row-0 matching `{v(0,j), v(0,j+5)}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::girth::{girth, Girth};
use crate::graph::{DegreeProfile, MixedGraph};
use crate::perm::Permutation;

/// Row/position labeling `v(i, j) = m*i + j` of a three-row graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowLabeling {
    pub m: usize,
}

impl RowLabeling {
    pub const ORDER30: RowLabeling = RowLabeling { m: 10 };

    /// Index of `v(row, pos)`; `pos` is reduced mod `m`.
    pub fn vertex(&self, row: usize, pos: i64) -> usize {
        assert!(row < 3);
        self.m * row + pos.rem_euclid(self.m as i64) as usize
    }

    pub fn position(&self, v: usize) -> (usize, usize) {
        (v / self.m, v % self.m)
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = usize> {
        let m = self.m;
        (0..m).map(move |j| m * i + j)
    }

    /// `v(i, j) -> v(i, j + 1)` on every row.
    pub fn rotation(&self) -> Permutation {
        Permutation::from_vec_unchecked(
            (0..3 * self.m)
                .map(|v| {
                    let (i, j) = self.position(v);
                    self.vertex(i, j as i64 + 1)
                })
                .collect(),
        )
    }

    /// Fixes row 0 and sends `v(1, j) -> v(2, j + s)`, `v(2, j) -> v(1, j + s)`.
    /// An involution when `2s = 0 mod m`.
    pub fn row_swap(&self, s: i64) -> Permutation {
        Permutation::from_vec_unchecked(
            (0..3 * self.m)
                .map(|v| match self.position(v) {
                    (0, _) => v,
                    (1, j) => self.vertex(2, j as i64 + s),
                    (_, j) => self.vertex(1, j as i64 + s),
                })
                .collect(),
        )
    }
}

/// Edges `{v(from_row, j), v(to_row, j + offset)}` for every `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeFamily {
    pub from_row: usize,
    pub to_row: usize,
    pub offset: i64,
}

impl EdgeFamily {
    pub const fn new(from_row: usize, to_row: usize, offset: i64) -> Self {
        EdgeFamily {
            from_row,
            to_row,
            offset,
        }
    }

    /// The distinct edges of the family; a same-row family with offset
    /// `m/2` is a perfect matching of that row.
    fn edges(&self, lab: RowLabeling) -> Result<BTreeSet<(usize, usize)>, ConstructionError> {
        let mut out = BTreeSet::new();
        for j in 0..lab.m as i64 {
            let u = lab.vertex(self.from_row, j);
            let v = lab.vertex(self.to_row, j + self.offset);
            if u == v {
                return Err(ConstructionError::SelfLoop(*self));
            }
            out.insert((u.min(v), u.max(v)));
        }
        Ok(out)
    }
}

/// Incidence families of a three-row graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeRowRecipe {
    pub m: usize,
    /// Rows carrying the directed cycle `v(i,j) -> v(i,j+1)`.
    pub arc_rows: [bool; 3],
    pub families: Vec<EdgeFamily>,
}

impl ThreeRowRecipe {
    /// The written order-30 rules: all three rows directed, edge families with
    /// offsets `0` (row 0 to 1), `c` (row 0 to 2), `d` and `e` (row 1 to 2).
    pub fn literal(m: usize, c: i64, d: i64, e: i64) -> Self {
        ThreeRowRecipe {
            m,
            arc_rows: [true; 3],
            families: vec![
                EdgeFamily::new(0, 1, 0),
                EdgeFamily::new(0, 2, c),
                EdgeFamily::new(1, 2, d),
                EdgeFamily::new(1, 2, e),
            ],
        }
    }

    pub fn order30_literal() -> Self {
        Self::literal(10, 5, 2, -2)
    }

    pub fn with_family(mut self, f: EdgeFamily) -> Self {
        self.families.push(f);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("row length {0} is below 3")]
    TooShort(usize),
    #[error("edge family {0:?} joins a vertex to itself")]
    SelfLoop(EdgeFamily),
    #[error("edge {{{0}, {1}}} produced by two families")]
    Collision(usize, usize),
    #[error("graph is not a (3,1,6)-graph: regular={:?}, girth={:?}", profile.regular, girth.value())]
    VerificationFailed {
        profile: Box<DegreeProfile>,
        girth: Box<Girth>,
    },
    #[error("no single-family completion reaches (3,1,6)")]
    NoCompletion,
    #[error("several completions reach (3,1,6): {0:?}")]
    AmbiguousCompletion(Vec<EdgeFamily>),
}

pub fn build_three_row(recipe: &ThreeRowRecipe) -> Result<MixedGraph, ConstructionError> {
    let lab = RowLabeling { m: recipe.m };
    if recipe.m < 3 {
        return Err(ConstructionError::TooShort(recipe.m));
    }
    let mut edges = BTreeSet::new();
    for fam in &recipe.families {
        for e in fam.edges(lab)? {
            if !edges.insert(e) {
                return Err(ConstructionError::Collision(e.0, e.1));
            }
        }
    }
    let arcs = (0..3)
        .filter(|&i| recipe.arc_rows[i])
        .flat_map(|i| (0..recipe.m as i64).map(move |j| (lab.vertex(i, j), lab.vertex(i, j + 1))));
    Ok(MixedGraph::new(3 * recipe.m, edges, arcs).expect("families produce distinct valid pairs"))
}

/// Regular with `r = 3`, `z = 1` and girth exactly 6.
pub fn check_316(g: &MixedGraph) -> Result<(), ConstructionError> {
    let profile = g.degree_profile();
    let gi = girth(g);
    if profile.is_regular_with(3, 1) && gi.value() == Some(6) {
        Ok(())
    } else {
        Err(ConstructionError::VerificationFailed {
            profile: Box::new(profile),
            girth: Box::new(gi),
        })
    }
}

/// Every single extra edge family over the order-30 rows, one per edge set.
pub fn candidate_families(m: usize) -> Vec<EdgeFamily> {
    let mut out = Vec::new();
    for a in 0..3 {
        for b in a..3 {
            let offsets = if a == b { 1..=(m as i64 / 2) } else { 0..=(m as i64 - 1) };
            out.extend(offsets.map(|o| EdgeFamily::new(a, b, o)));
        }
    }
    out
}

/// Extra families that turn the literal order-30 rules into a `(3,1,6)`-graph.
pub fn completions_of(literal: &ThreeRowRecipe) -> Vec<EdgeFamily> {
    candidate_families(literal.m)
        .into_iter()
        .filter(|&f| {
            build_three_row(&literal.clone().with_family(f))
                .map(|g| check_316(&g).is_ok())
                .unwrap_or(false)
        })
        .collect()
}

/// What [`build_g30_with_report`] found on the way.
#[derive(Clone, Debug)]
pub struct G30Report {
    pub literal_failure: Option<ConstructionError>,
    pub completion: Option<EdgeFamily>,
    pub graph: MixedGraph,
}

pub fn build_g30_with_report() -> Result<G30Report, ConstructionError> {
    let literal = ThreeRowRecipe::order30_literal();
    let g = build_three_row(&literal)?;
    let failure = match check_316(&g) {
        Ok(()) => {
            return Ok(G30Report {
                literal_failure: None,
                completion: None,
                graph: g,
            })
        }
        Err(e) => e,
    };
    let found = completions_of(&literal);
    match found.as_slice() {
        [] => Err(ConstructionError::NoCompletion),
        [f] => {
            let graph = build_three_row(&literal.clone().with_family(*f))?;
            check_316(&graph)?;
            Ok(G30Report {
                literal_failure: Some(failure),
                completion: Some(*f),
                graph,
            })
        }
        _ => Err(ConstructionError::AmbiguousCompletion(found)),
    }
}

/// The verified order-30 `(3,1,6)`-graph, labeled `v(i, j) = 10*i + j`.
pub fn build_g30() -> Result<MixedGraph, ConstructionError> {
    build_g30_with_report().map(|r| r.graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_rules_fall_short_on_row_zero() {
        let g = build_three_row(&ThreeRowRecipe::order30_literal()).unwrap();
        assert_eq!(g.order(), 30);
        assert_eq!(g.arcs().len(), 30);
        assert_eq!(g.edges().len(), 40);
        let p = g.degree_profile();
        assert!(p.deg[..10].iter().all(|&d| d == 2));
        assert!(p.deg[10..].iter().all(|&d| d == 3));
        assert!(matches!(
            check_316(&g),
            Err(ConstructionError::VerificationFailed { .. })
        ));
    }

    #[test]
    fn unique_completion_is_row_zero_matching() {
        let r = build_g30_with_report().unwrap();
        assert_eq!(r.completion, Some(EdgeFamily::new(0, 0, 5)));
        assert!(r.literal_failure.is_some());
        assert_eq!(r.graph.edges().len(), 45);
        assert_eq!(r.graph.arcs().len(), 30);
    }

    #[test]
    fn g30_parameters() {
        let g = build_g30().unwrap();
        assert_eq!(g.order(), 30);
        assert!(g.degree_profile().is_regular_with(3, 1));
        assert_eq!(girth(&g).value(), Some(6));
    }

    #[test]
    fn rotation_and_row_swap_preserve_g30() {
        let g = build_g30().unwrap();
        let lab = RowLabeling::ORDER30;
        let rho = lab.rotation();
        let tau = lab.row_swap(5);
        assert_eq!(g.apply_permutation(&rho).unwrap(), g);
        assert_eq!(g.apply_permutation(&tau).unwrap(), g);
        assert!(tau.then(&tau).is_identity());
        assert_eq!(rho.then(&tau), tau.then(&rho));
        assert_eq!(rho.order(), 10);
    }

    #[test]
    fn recipe_errors() {
        assert_eq!(
            build_three_row(&ThreeRowRecipe::literal(10, 5, 2, 2)),
            Err(ConstructionError::Collision(10, 22))
        );
        assert_eq!(
            build_three_row(&ThreeRowRecipe::literal(2, 1, 1, 0)),
            Err(ConstructionError::TooShort(2))
        );
        let r = ThreeRowRecipe::order30_literal().with_family(EdgeFamily::new(1, 1, 10));
        assert_eq!(
            build_three_row(&r),
            Err(ConstructionError::SelfLoop(EdgeFamily::new(1, 1, 10)))
        );
    }

    #[test]
    fn negative_offsets_wrap() {
        let a = build_three_row(&ThreeRowRecipe::literal(10, 5, 2, -2)).unwrap();
        let b = build_three_row(&ThreeRowRecipe::literal(10, 5, 2, 8)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn twelve_row_variant_builds() {
        let g = build_three_row(&ThreeRowRecipe::literal(12, 6, 2, -2)).unwrap();
        assert_eq!(g.order(), 36);
        assert_eq!(g.edges().len(), 48);
    }
}
