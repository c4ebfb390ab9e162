//! Document formats and rendering for the `tropic` binary, exposed as a
//! library for integration tests.

pub mod docs;
pub mod svg;
