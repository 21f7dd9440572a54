//! Clustering of object-centric event logs.
//!
//! The crate turns the objects of one type into profiles (trace, attributes
//! and trace-graph centralities), clusters them, splits the log into one
//! sub-log per cluster and compares the object-centric directly-follows
//! graphs of the sub-logs against the model of the whole log.
//!
//! Data-parallel loops (profiles, distance matrices, per-cluster extraction,
//! cluster-count sweeps) run on rayon when the default `parallel` feature is
//! enabled and sequentially otherwise, with identical results.

pub mod clustering;
pub mod distance;
pub mod error;
pub mod ocdfg;
pub mod ocel;
pub mod par;
pub mod pipeline;
pub mod profile;
pub mod sublog;
pub mod trace_graph;

pub use error::{ClusterError, DistanceError, GraphError, ModelError, OcelError, ProfileError, SublogError};
pub use par::Execution;
