//! Document formats and error handling behind the `coherence` binary.

pub mod document;
pub mod error;
pub mod report;
