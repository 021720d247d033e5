//! Model parameters, the time-varying intercept and the stability analysis.

mod intercept;
mod params;
mod stability;

pub use intercept::{intercept_at, intercept_bounds, Intercept, InterceptBounds, InterceptSpec};
pub use params::ModelParams;
pub use stability::{moment_bound, stability_check, stability_matrix, StabilityReport};
