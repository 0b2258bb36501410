//! Finite presentations for finitely generated subgroups of ascending HNN
//! extensions of free groups.
//!
//! The library is organized bottom-up:
//!
//! - [`freegroup`]: reduced words over a finite basis and endomorphisms given
//!   by generator images, with composition, twisting and injectivity testing.
//! - [`labeled_graph`]: based edge-labeled graphs, Stallings folds and
//!   tightening, spanning trees, basis extraction, membership and expression
//!   of words over a basis or an arbitrary finite generating set.
//! - [`graph_pair`]: nested labeled graph pairs `(Z, X)`, relative rank, fold
//!   classification, and the relative tightening procedure that folds the
//!   overgraph while wedging on image loops as needed to keep the pair
//!   invariant under the endomorphism.
//! - [`mapping_torus`]: elements of the HNN extension `<t, E | t e t^-1 =
//!   phi(e)>` as words over `{t} ∪ E`, canonical `t^-q x t^r` normal forms,
//!   equality testing, and reduction of an arbitrary finitely generated
//!   subgroup to one containing the stable letter.
//! - [`presentation`]: the driver that iterates pair tightening with
//!   restart-on-rank-drop, extracts a presentation `<t, A, B | t a_j t^-1 =
//!   w_j>`, certifies free generation to a configurable depth, and verifies
//!   the result.

pub mod error;
pub mod freegroup;
pub mod graph_pair;
pub mod labeled_graph;
pub mod mapping_torus;
pub mod presentation;

pub use error::Error;
pub use freegroup::{Alphabet, Endo, Letter, Sign, Word};
pub use graph_pair::{FoldClass, LabeledGraphPair, PairFoldRecord, PairTrace};
pub use labeled_graph::{
    EdgeId, FoldRecord, FoldTrace, LabeledGraph, SubgraphMarker, SubgroupGraph, TreeData, VertexId,
};
pub use mapping_torus::{MappingTorus, NormalForm, SubgroupReduction, TorusLetter, TorusWord};
pub use presentation::{
    Certificate, Certification, Presentation, PresentationBuild, VerifyReport,
};
