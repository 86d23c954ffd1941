//! File formats, instance generators, benchmarking and the command-line
//! front end for the hyperflow partitioner.

pub use hyperflow_core as core;

pub mod bench;
pub mod cli;
pub mod corpus;
pub mod io;
pub mod netstats;
pub mod run;

pub use run::StdClock;
