//! File formats, Monte Carlo sweeps and invariant suites for
//! [`refnet_core`].
//!
//! The `refnet` binary is a thin layer over this library; every command is
//! reproducible by calling the functions here with the same seeds.
//!
//! Text formats use 1-based node labels; everything in memory is 0-based.

pub mod experiments;
pub mod io;
pub mod verify;

pub use refnet_core as core;
