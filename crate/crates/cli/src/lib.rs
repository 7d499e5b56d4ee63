//! Input parsing and report rendering for the `fairdiv` binary.
//!
//! The binary itself is a thin dispatcher; everything testable lives here.

pub mod io;
pub mod render;
