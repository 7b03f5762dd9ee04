//! Trees over a basis, the fold poset and its order complex, stabilizers of
//! trees, and nuclear vertices.

pub mod dot;
mod homology;
mod nuclear;
mod poset;
mod tree;
mod vertex;

pub use homology::{
    invariant_factors, order_complex_homology, simplicial_homology, HomologyGroup, HomologyReport,
};
pub use nuclear::{nuclear_ball, quotient_star_check, BallEdge, NuclearBall, NuclearVertex, QuotientStarReport};
pub use poset::{enumerate_whitehead_poset, WhiteheadPoset};
pub use tree::{Edge, LabelledBipartiteTree};
pub use vertex::{
    stabilizer_generators, stabilizes, tree_symmetries, vertex_aut_eval, PermutationGenerator,
    StabilizerGenerators, VertexAutomorphismSpec, VertexGenerator,
};

/// Fold the edges `e1`, `e2` at the labelled vertex `v`.
pub fn fold_apply(t: &LabelledBipartiteTree, v: usize, e1: Edge, e2: Edge) -> crate::Result<LabelledBipartiteTree> {
    t.fold(v, e1, e2)
}
