//! Volatility filtering, the joint return/measurement likelihood, and
//! quasi-maximum-likelihood estimation.

mod estimate;
mod filter;
pub mod optimize;

pub use estimate::{estimate, estimate_with, profile_loglik_d, EstimationResult, OptimizerOptions, MIN_OBSERVATIONS};
pub use filter::{
    filter_volatility, loglik, DirectConvolver, Evaluator, FilterOutput, LagConvolver, LoglikParts, PresampleFill,
    SeriesPair, LOGLIK_SENTINEL,
};
