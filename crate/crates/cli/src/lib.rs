//! IO, JSON reports and the command-line driver on top of `borsuk-core`.

pub mod cli;
pub mod json;
pub mod pointset;
