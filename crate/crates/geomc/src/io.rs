//! I/O: configs, datasets, traces.

pub mod config;
pub mod edges;
pub mod matches;
pub mod trace;
