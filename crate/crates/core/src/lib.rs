//! Edge-corona graphs, rainbow vertex and locating rainbow colorings, and
//! exact computation of the rainbow vertex connection number (rvc) and the
//! locating rainbow connection number (rvcl).

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod format;
pub mod graph;
pub mod harness;
pub mod rainbow;
pub mod solver;

pub use bounds::Target;
pub use error::{Error, Result};
pub use graph::{Graph, Vertex, VertexLabel};
pub use rainbow::{VerificationReport, VertexColoring};
