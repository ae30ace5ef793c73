//! File formats, configuration, graph export and verification suites for
//! the `cck` command line tool, on top of `cck-core`.

pub mod cli;
pub mod config;
pub mod format;
pub mod graph;
pub mod suites;
