//! File formats, a parallel batch evaluator, the shortest-path experiment
//! harness and the command-line interface on top of `fspeo-core`.

pub mod cli;
pub mod executor;
pub mod experiment;
pub mod io;
pub mod manifest;
