//! Solvers, kernels and instance generators for global multistage graph
//! problems on temporal graphs.
//!
//! A temporal graph is a fixed vertex set with a sequence of edge layers.
//! A solution picks one set per layer, each of size at most `k`, so that the
//! total number of elements newly inserted from one layer to the next stays
//! within a global budget `ell`.

pub mod backward;
pub mod cli;
pub mod element;
pub mod enumeration;
pub mod format;
pub mod forward;
pub mod graph;
pub mod kernels;
pub mod oracle;
pub mod planarity;
pub mod problems;
pub mod random;
pub mod reductions;
pub mod solve;

pub use element::{Element, ElementKind, ElementSet, ModOp};
pub use graph::{Edge, Layer, StaticGraph, TemporalGraph, Vertex};
pub use problems::{ProblemAttrs, ProblemInstance, ProblemKind, SolutionSequence};
pub use solve::{solve, Algorithm, Answer, SolveError, SolveOptions, SolveResult};
