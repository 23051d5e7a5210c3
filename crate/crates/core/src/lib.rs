//! Community-aware centrality measures evaluated under Linear Threshold
//! diffusion, with Schulze aggregation of the resulting performance
//! orderings.
//!
//! The pipeline is: load an edge list ([`graph`]), attach a community
//! partition ([`community`]), score nodes with the seven measures
//! ([`centrality`]), seed LT cascades from the top of each ranking
//! ([`diffusion`]), then elect a consensus order of the measures
//! ([`voting`]). [`harness`] wires these together for whole experiments.

pub mod centrality;
pub mod community;
pub mod diffusion;
pub mod error;
pub mod graph;
pub mod harness;
pub mod hash;
pub mod voting;

pub use error::{Error, Result};
