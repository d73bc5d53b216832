//! Maximum weight independent set on hereditary graph classes via
//! extended strip decompositions.
//!
//! The library is organized bottom-up:
//!
//! - [`graph`]: graph representation, pattern detection, instance generation
//! - [`ratio`]: exact rational comparisons (no floating point in any gate)
//! - [`matching`]: max-weight matching in general graphs, with brute-force oracle
//! - [`esd`]: extended strip decompositions, atoms, conflicts, shattering
//! - [`assembly`]: the atom-family / matching translation and global assembly
//! - [`pathfinder`]: balanced-separator path machinery
//! - [`tree_oracle`]: induced-tree search and the claw / lobster pipelines
//! - [`dispersers`]: goodness / uniformity predicates and disperser builders
//! - [`solvers`]: brute force, approximation scheme, subexponential exact,
//!   general-pattern wrappers, tree decompositions
//! - [`report`]: reproducible run reports

pub mod assembly;
pub mod dispersers;
pub mod esd;
pub mod graph;
pub mod matching;
pub mod pathfinder;
pub mod ratio;
pub mod report;
pub mod solvers;
pub mod testutil;
pub mod tree_oracle;

pub use graph::{Graph, VertexSet, WeightFn};
pub use ratio::Ratio;
