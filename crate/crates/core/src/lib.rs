//! Rule extraction from pruned, discretized neural networks.
//!
//! A three-layer network is grown node by node, pruned connection by
//! connection, its hidden activations clustered, and the resulting discrete
//! network described by `If ... then class` rules over the inputs.

pub mod constructor;
pub mod dataset;
pub mod discretizer;
pub mod error;
pub mod eval;
pub mod kv;
pub mod network;
pub mod pipeline;
pub mod pruner;
pub mod rulegen;
pub mod rules;

pub use dataset::{split, DataView, Dataset, RawDataset, Schema, SplitSpec};
pub use error::{Error, Result};
pub use network::{Network, TrainConfig};
pub use rules::{Condition, Rule, RuleSet};
