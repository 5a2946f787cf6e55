//! Graph algorithms for non-separating planar graphs, linkless and knotless
//! embeddings, and Colin de Verdière number bounds.

pub mod apex;
pub mod budget;
pub mod canon;
pub mod error;
pub mod families;
pub mod graph;
pub mod io;
pub mod minors;
pub mod moves;
pub mod mu;
pub mod nonsep;
pub mod planarity;
pub mod topology;
pub mod verify;

pub use canon::{canonical_form, is_isomorphic, CanonicalForm};
pub use error::{BudgetError, GraphError, ParseError};
pub use graph::{Graph, VertexSet, MAX_ORDER};
