//! Online Max-Min diversification over a stream.
//!
//! Instances arrive one at a time and each must be accepted or rejected on
//! the spot; the goal is `b` selections whose smallest pairwise distance is
//! as large as possible. The crate provides the distance primitives
//! ([`metrics`]), the round-level probability model behind the FRM threshold
//! schedule ([`analytics`]), FRM and its comparison strategies
//! ([`strategies`]), the simulation engine that owns the acceptance rules and
//! produces replayable traces ([`engine`]), offline references ([`oracle`]),
//! stream sources ([`data`]) and the experiment runner ([`harness`]).

pub mod analytics;
pub mod data;
pub mod engine;
pub mod harness;
pub mod metrics;
pub mod oracle;
pub mod strategies;

pub use engine::{run, DecisionTrace};
pub use metrics::Instance;
pub use strategies::{StrategyConfig, StrategyKind, StrategyParams};
