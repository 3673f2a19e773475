//! Coverage planning for wireless passive sensor networks powered by RF
//! sources and communicating by modulated backscatter.
//!
//! The crate answers the sizing questions for such a network: how far a
//! source can activate a node ([`link_budget::max_range`]), how many
//! non-overlapping sources an event field needs ([`coverage::source_count`]),
//! and the inverse design quantities (power, area). [`deployment`] places
//! sources on concrete grids, measures the packing loss the closed form
//! ignores and flags overlapping ranges; [`sweep`] regenerates parameter
//! sweeps as CSV and SVG.

pub mod cli;
pub mod coverage;
pub mod deployment;
pub mod error;
pub mod link_budget;
pub mod par;
pub mod quantities;
pub mod scenario;
pub mod sweep;

pub use error::{Error, Result};
pub use par::Execution;
