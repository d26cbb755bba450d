//! Model enumeration for the two-variable fragment of first-order logic.
//!
//! Given a sentence and a domain size `n`, [`Enumerator`] streams every model
//! over `{0, .., n - 1}` exactly once.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod binary;
pub mod config;
mod engine;
pub mod formula;
pub mod oracle;
pub mod snf;
pub mod structure;
pub mod types;
pub mod unary;

pub use engine::{Enumerator, EnumeratorError, Models, SnfModels};
pub use formula::{parse_sentence, Sentence};
pub use structure::Structure;
