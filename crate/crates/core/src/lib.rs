//! Autologistic actor attribute models: outcome simulation, stochastic
//! approximation estimation (including conditional estimation on snowball
//! samples), test-network generation and sampling experiments.

pub mod effects;
pub mod ergm;
pub mod error;
pub mod estimate;
pub mod graph;
pub mod harness;
pub mod io;
pub mod model;
pub mod sampling;
pub mod seed;

pub use effects::{Effect, ParameterVector, StatisticsVector};
pub use error::{Error, Result};
pub use graph::Graph;
