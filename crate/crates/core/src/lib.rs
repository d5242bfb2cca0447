//! Refractory threshold networks on random digraphs.
//!
//! A network is a loop-free digraph together with a refractory period `p_i`
//! and a firing threshold `th_i` for every node. Node states live in
//! `0..=p_i`; a node in state `0` fires. Updates are synchronous:
//!
//! * a node below its refractory period advances by one,
//! * a node at the end of its refractory period fires if at least `th_i`
//!   of its in-neighbours fire, and otherwise stays put.
//!
//! This crate holds the pure algorithmic parts: digraph generation and
//! structure ([`digraph`]), the state machine ([`dynamics`]), transient and
//! attractor detection ([`analysis`]), deterministic witness builders
//! ([`constructions`]) and executable structural checks ([`invariants`]).
//! It needs `alloc` but not `std`; file formats, sweeps and the command-line
//! tool live in the companion `refnet` crate.
//!
//! Nodes are addressed by 0-based indices throughout the API. Text formats
//! in the companion crate use 1-based node labels.
#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod constructions;
pub mod digraph;
pub mod dynamics;
pub mod invariants;

pub use analysis::{
    classify_min_cycling, detect_brent, detect_decomposed, detect_hashing, DecomposeOptions,
    DetectOptions, DynamicsSummary, Restriction,
};
pub use digraph::{gen_erdos_renyi, is_b_small, CondensationInfo, CycleCensus, Digraph, GraphError};
pub use dynamics::{random_network, random_state, Network, NetworkError, State};
