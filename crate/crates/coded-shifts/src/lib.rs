//! Coded shifts: codes, unambiguous automata, and the constructions that
//! re-present a coded shift as an unambiguously coded one.
//!
//! The crate is organized around a small automaton algebra ([`automata`]),
//! decision procedures for codes ([`codes`]) and the three unambiguity
//! notions ([`unambiguity`]), sofic shift machinery ([`shifts`]),
//! substitution morphisms ([`morphisms`]), the synchronized recoding that
//! turns a synchronized prefix code into a strong one ([`sync`]), and the
//! lazy countable-state constructions ([`countable`]).

pub mod alphabet;
pub mod automata;
pub mod codes;
pub mod countable;
pub mod error;
pub mod io;
pub mod morphisms;
pub mod rational;
pub mod shifts;
pub mod sync;
pub mod unambiguity;

pub use alphabet::{Alphabet, Symbol, Word};
pub use automata::{Automaton, Dfa};
pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
