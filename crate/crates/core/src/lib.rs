//! Type-aware second-order random walks on heterogeneous multigraphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] holds the immutable CSR multigraph with node and edge type labels.
//! * [`io`] parses typed edge lists and writes walk corpora and embeddings.
//! * [`bias`] evaluates the unnormalised transition weight of a candidate step,
//!   combining the return/in-out parameters with node- and edge-type switching.
//! * [`walk`] samples walks, exposes the exact transition distribution and
//!   summarises corpora.
//! * [`embedding`] trains skip-gram embeddings with negative sampling.

pub mod bias;
pub mod embedding;
pub mod error;
pub mod graph;
pub mod io;
pub mod rng;
pub mod walk;

pub use bias::{BiasParams, EdgeSwitchModel, NodeSwitchModel, SwitchModel};
pub use embedding::{EmbeddingMatrix, SgnsConfig, TrainReport, Vocab};
pub use error::{Error, Result};
pub use graph::{DistanceClass, EdgeInstance, EdgeTypeId, HetMultigraph, NodeId, NodeTypeId};
pub use walk::{Transition, WalkConfig, WalkCorpus, WalkStats, WalkerState};
