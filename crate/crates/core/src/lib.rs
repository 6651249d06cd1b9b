//! Finite-blocklength model of a ciphered message and its key sent as two
//! superposed packets, with deception-aware utilities, a block coordinate
//! descent allocator for key length and power, and brute-force checks.
//!
//! Module map:
//! - [`fbl`]: normal-approximation packet error and the Q-function.
//! - [`link`]: SINRs, per-receiver errors, utilities and constraints.
//! - [`optimizer`]: full-power allocation by alternating 1-D searches.
//! - [`oracle`]: grid-based verification of the structural claims.
//! - [`experiments`]: configurable sweeps that write CSV artifacts.

pub mod experiments;
pub mod fbl;
pub mod link;
pub mod optimizer;
pub mod oracle;
pub mod units;
