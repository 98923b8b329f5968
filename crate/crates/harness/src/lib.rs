//! Command-line harness: experiments, invariant suites and report envelopes.

pub mod experiments;
pub mod report;
pub mod stats;
pub mod verify;
