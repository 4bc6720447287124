//! Library surface of the command line driver: report assembly and the
//! session cache, split out so integration tests can exercise them
//! directly.

pub mod cache;
pub mod report;
