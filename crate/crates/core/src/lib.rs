//! Core of `mutlearn`: learning mutation operators from bug-fix pairs and
//! applying them to MiniJ programs.
//!
//! Everything in this crate is pure computation over [`tree::Node`] values.
//! File IO, thread pools, diff rendering and the command line live in the
//! `mutlearn` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diff;
pub mod gen;
pub mod glob;
pub mod harness;
pub mod lang;
pub mod learn;
pub mod matching;
pub mod mutagen;
pub mod operators;
pub mod report;
pub mod sexpr;
pub mod tree;

pub use tree::{Kind, Node, Sort, Span};
