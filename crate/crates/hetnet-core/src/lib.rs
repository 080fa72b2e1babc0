//! Core library for massive-MIMO HetNet user association: rate modeling,
//! exact and greedy centralized association, joint resource allocation via
//! dual decomposition, distributed association games, and a seeded
//! experiment harness.

pub mod assign;
pub mod experiment;
pub mod games;
pub mod joint;
pub mod error;
pub mod model;
pub mod par;
pub mod verification;

pub use error::{Error, Result};
