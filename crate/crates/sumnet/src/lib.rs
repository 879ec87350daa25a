//! Solvability analysis and linear network code synthesis for 3-source
//! 3-terminal sum-networks.
//!
//! A sum-network is a directed acyclic multigraph with unit-capacity edges in
//! which every terminal must recover the finite-field sum of all source
//! symbols. This crate decides which of four solvability classes a 3s/3t
//! sum-network falls into (not connected / nonsolvable / solvable everywhere
//! except GF(2) / solvable over all fields), produces re-checkable witnesses
//! for the middle two classes, and synthesizes and verifies explicit linear
//! network codes: scalar codes, XOR codes, the α-parameterized witness
//! construction, and rate-2/3 fractional codes.

#![forbid(unsafe_code)]

pub mod analysis;
pub mod classifier;
pub mod constructor;
pub mod fixtures;
pub mod gf;
pub mod multigraph;
pub mod netcode;
pub mod oracle;
