//! Convex Pareto-set approximation for multiobjective combinatorial problems
//! through weighted-sum oracles.

pub mod algorithms;
pub mod error;
pub mod numeric;
pub mod problem;
pub mod quality;
pub mod rounding;
pub mod scalarization;
pub mod weightspace;
pub mod toolkit;

pub use error::{Error, Result};
pub use numeric::Rational;
pub use problem::{
    dominates, weighted_value, Encoding, ObjectiveVector, ProblemInstance, Sense, SolutionRecord,
    WeightVector,
};
