//! Library side of the `pitkit` command: corpus generation, suite runs and benchmarks.

pub mod bench;
pub mod corpus;
pub mod suite;
