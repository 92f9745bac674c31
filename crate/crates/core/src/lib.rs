//! Slepian-Wolf rate regions and structured total-rate bounds for N
//! correlated discrete sources.
//!
//! Sources are modelled as an explicit joint pmf ([`JointSource`]). From it
//! the crate computes exact entropies, the `2^N - 1` inequalities of the
//! admissible rate region with its corner points, and the family of
//! total-rate bounds obtained from Markov, correlation-graph and
//! disjoint-group simplifications, together with the rate penalty each
//! simplification costs against the joint entropy.
//!
//! Library node indices are 0-based. File formats and the CLI use 1-based
//! node numbers.

pub mod bounds;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod grouping;
pub mod io;
pub mod oracle;
pub mod region;
pub mod report;
pub mod source;

pub use bounds::{
    bound_adjacency, bound_disjoint, bound_disjoint_markov, bound_full, bound_markov, bound_mixed,
    compare_bounds, BoundReport, BoundRequest, ComparisonReport,
};
pub use entropy::{
    chain_decomposition, conditional_entropy, joint_entropy, marginal, total_entropy, EntropyValue,
};
pub use error::{Error, Result};
pub use grouping::{
    build_graph, disjoint_partition, pairwise_metric, predecessor_sets, verify_disjoint,
    CorrelationGraph, Metric, Partition, PredecessorSets,
};
pub use region::{
    corner_point, enumerate_inequalities, is_admissible, two_node_boundary, RateVector,
    RegionInequality, TwoNodeBoundary,
};
pub use source::{JointSource, MarkovChainSpec};
