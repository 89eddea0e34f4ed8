//! Mixed cages: regular mixed graphs of given degree, out-degree and girth
//! with the fewest vertices.
//!
//! The crate covers the data model ([`graph`]), the adjacency-matrix and DOT
//! formats ([`io`]), Moore and AHM lower bounds ([`bounds`]), mixed girth
//! ([`girth`]), the order-30 `(3,1,6)` construction ([`constructions`]),
//! canonical labeling and automorphism groups ([`iso`]) and the exhaustive
//! cage search ([`search`]). The command-line front end lives in [`cli`].

pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod girth;
pub mod graph;
pub mod io;
pub mod iso;
pub mod perm;
pub mod search;

pub use graph::{CageParams, DegreeProfile, GraphError, MixedGraph, Regularity};
pub use perm::Permutation;
