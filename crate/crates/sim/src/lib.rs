//! Monte Carlo harness, file formats and optimization-model emitter around
//! [`v2vsim_core`].
//!
//! This crate carries everything that touches the outside world: TOML
//! experiment configuration, CSV serialization of scenarios, grids, powers
//! and sweep results, the LP-format emitter (with its own reader used to
//! verify emitted models against simulator outcomes), and the parallel
//! replication driver behind the `v2vsim` command-line tool.

pub mod config;
pub mod csvio;
pub mod harness;
pub mod model;
pub mod output;
