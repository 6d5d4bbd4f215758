//! Additive and multiplicative twists of cuspidal L-functions at and near the
//! central point, with numerical verifiers for their modular identities.

pub mod arith;
pub mod characters;
pub mod cli;
pub mod error;
pub mod forms;
pub mod identities;
pub mod ltwist;

pub use error::{Error, Result};
