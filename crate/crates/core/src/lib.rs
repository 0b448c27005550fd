//! Hierarchical overlapping clustering of networks.
//!
//! Dithered copies of a network are clustered with a hierarchical linkage,
//! the resulting ultrametrics are averaged into a cut metric, and coverings
//! are read off the cut metric as maximal cliques of its tolerance graphs.
//! Asymmetric networks follow the same path through directed single linkage
//! and quasi-coverings with influence edges between blocks.

pub mod covering;
pub mod cut;
pub mod ensemble;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod linkage;
pub mod matrix;
pub mod metric;
pub mod network;
pub mod quasi;
pub mod run;

pub use covering::{
    clusterability, covering_at, min_local_minimum, overlapping_function, profile_sweep, sweep,
    Covering, NestedCovering, OverlapProfile, OverlapSample, ProfileSweep,
};
pub use cut::{eval_cut_decomposition, CutDecomposition};
pub use ensemble::{
    algorithm1, average_matrices, dither, quasi_algorithm1, sigma_for, DitherConfig, DitherTarget,
    Input, SigmaRule,
};
pub use error::{Error, Result};
pub use graph::{covering_by_classes, maximal_cliques, tolerance_graph, ToleranceGraph};
pub use linkage::{
    agglomerate, dendrogram_from_ultrametric, directed_single_linkage, ultrametric_from_dendrogram,
    Dendrogram, LinkageKind, Merge,
};
pub use matrix::SquareMatrix;
pub use metric::{
    check_four_point, check_metric_axioms, check_quasi_ultrametric, check_ultrametric, MetricKind,
    MetricMatrix,
};
pub use network::{Network, PointCloud};
pub use quasi::{quasi_edge_set, quasi_sweep, validate_def13, NestedQuasiCovering, QuasiCovering};
