//! Counting the size-`w` windows of a text that contain a set of serial
//! episodes (patterns occurring as subsequences within the window).
//!
//! The patterns are flattened into parent-indexed tables ([`trie`]), each
//! table node gets an `(Ω+1)`-bit lane in a packed state ([`bitstate`]), and
//! a whole automaton transition is a handful of shifts, masks and additions
//! over that state. [`matcher`] drives scans with the packed engine, a
//! classical latest-start baseline, or a brute-force window oracle.

pub mod bench;
pub mod bits;
pub mod bitstate;
mod error;
pub mod matcher;
pub mod selftest;
pub mod trie;
pub mod word;

pub use error::{Error, Result};
pub use matcher::{Backend, CountReport, Engine, Mode, Scanner, WindowFlags};
pub use trie::{Layout, Pattern, TrieTables};
