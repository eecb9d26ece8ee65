//! Binary patterns in the Thue-Morse word.
//!
//! The crate decides segment membership, pattern avoidability and
//! typicality for finite binary words, and provides exhaustive verification
//! suites for the structural facts these decisions rest on.

pub mod avoidance;
pub mod error;
pub mod morphisms;
pub mod thue_morse;
pub mod typicality;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use morphisms::{Morphism, MonoidForm};
pub use thue_morse::TmPrefix;
pub use words::{Alphabet, Word};
