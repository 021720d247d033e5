//! File formats, configuration, the parallel Monte Carlo runner and the
//! command-line front end built on `arhygarch-core`.

pub mod cli;
pub mod config;
pub mod fft;
pub mod io;
pub mod report;
pub mod runner;

pub use arhygarch_core as core;
