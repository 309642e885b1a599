//! Built-in initial configurations.
//!
//! `a0` is the canonical 9 x 9 particle block in the top-left corner of the
//! 19 x 19 board with a fixed set of velocities. `a1` is a pre-drawn random
//! microstate of the same block-count macrostate (nine particles in each of
//! the nine top-left blocks), used to check that entropy evolution does not
//! depend on the specially structured starting point.

use crate::dynamics::Configuration;
use crate::io::parse_config;

/// Source text of the `a0` fixture, in the configuration file grammar.
pub const A0_TEXT: &str = include_str!("../fixtures/a0.txt");

/// Source text of the `a1` fixture.
pub const A1_TEXT: &str = include_str!("../fixtures/a1.txt");

/// The 9 x 9 block fixture: 81 particles at (x, y) for x, y in 0..9.
pub fn config_a0() -> Configuration {
    parse_config(A0_TEXT).expect("fixture a0 is valid")
}

/// A generic microstate of the same macrostate as `a0`.
pub fn config_a1() -> Configuration {
    parse_config(A1_TEXT).expect("fixture a1 is valid")
}
