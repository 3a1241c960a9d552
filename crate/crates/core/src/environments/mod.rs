//! Reward models for experiments: the Markovian ad-click simulator, the
//! position-discounted coverage objective with a synthetic instance
//! generator, plain weighted coverage, and a separable click-through-rate
//! baseline.

mod ads;
mod coverage;
mod separable;

pub use ads::{AdModel, UserType};
pub use coverage::{CoverageInstance, WeightDist, WeightedCoverage};
pub use separable::SeparableCtr;
