//! Exact computation in graph products of groups.
//!
//! Elements are canonical graphically reduced words ([`word_engine`]); on top of
//! that sit parabolic cosets, the hyperplane geometry of the quasi-median
//! graph, windows of the crossing graph, the cone-off over proper parabolics,
//! the tree embeddings, and the structural verdicts about automorphism groups.

pub mod aut_structure;
pub mod cone_off;
pub mod crossing;
pub mod fixtures;
pub mod graph_core;
pub mod parabolics;
pub mod qm_geometry;
pub mod trees_embedding;
pub mod verdict;
pub mod word_engine;

pub use graph_core::{SimplicialGraph, VertexId, VertexSet};
pub use verdict::{Status, Verdict3, Witness};
pub use word_engine::{Presentation, Syllable, VertexGroup, Word};
