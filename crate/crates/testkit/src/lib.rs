//! Test support: seeded generators, a reference evaluator and a naive plan
//! enumerator.

pub mod acceptance;
pub mod gen;
pub mod naive;
pub mod oracle;
pub mod props;

pub use gen::{rng, QueryShape, Signature, TestRng, TheoryShape};
pub use oracle::Oracle;
