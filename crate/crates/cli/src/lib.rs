//! Library half of the `permix` binary: verification suites and the result
//! cache, exposed so integration tests can drive them directly.

pub mod cache;
pub mod suites;
