//! Decide whether the language of a DFA or regular expression is Wheeler.
//!
//! The pipeline trims and minimizes the input, computes the co-lex interval
//! of every state as a pair of ranks, and builds the pruned square
//! automaton: pairs of distinct states whose open intervals intersect. The
//! language is Wheeler iff that graph is acyclic; otherwise a cycle is
//! returned as a certificate.

pub mod automaton;
pub mod bench;
pub mod colex;
pub mod error;
pub mod minimize;
pub mod ov;
pub mod par;
pub mod recognizer;
pub mod regex;
pub mod square;

pub use error::{Error, Result};
