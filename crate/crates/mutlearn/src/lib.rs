//! File formats, parallel campaign execution and the command line for
//! `mutlearn`. All algorithms live in [`mutlearn_core`].

pub mod bundle;
pub mod campaign;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod diffs;
pub mod formats;
pub mod project;
pub mod simulate;

pub use mutlearn_core as core;
