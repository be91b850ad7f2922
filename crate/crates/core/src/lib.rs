//! Randomized algebraic all-pairs edge connectivity in directed graphs.
//!
//! [`apc`] computes every `λ(s,t)` from one inversion of a random
//! edge-adjacency matrix over GF(2^q); [`kapc`] computes `min(k, λ(s,t))`
//! from a smaller inversion. [`oracle`] is the max-flow ground truth and
//! [`series`] checks the underlying walk-enumeration identities symbolically.

pub mod apc;
pub mod connectivity;
pub mod field;
pub mod graph;
pub mod kapc;
pub mod linalg;
pub mod oracle;
pub mod series;

pub use apc::{connectivity_pair, solve_apc, solve_apc_with};
pub use connectivity::{
    Bound, ConnectivityMatrix, FieldChoice, PhaseTimings, SolveError, SolveOptions, SolveReport,
};
pub use field::{FieldConfig, FieldElement, FieldError};
pub use graph::{Digraph, EdgeId, EdgeSet, GraphError, ParseError, VertexId};
pub use kapc::{build_gadget, solve_kapc, solve_kapc_with, GadgetGraph};
pub use linalg::{FieldMatrix, LinalgError};
pub use oracle::{all_pairs_oracle, max_flow};
