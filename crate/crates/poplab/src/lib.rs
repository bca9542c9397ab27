//! File formats, the experiment harness and the `poplab` command line on
//! top of `poplab-core`.

pub use poplab_core as core;

pub mod cli;
pub mod dump;
pub mod experiment;
pub mod source;
