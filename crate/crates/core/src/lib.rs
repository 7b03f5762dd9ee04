//! Symmetric automorphisms of free groups and free products of cyclic
//! groups, the mod-2 reduction and lifting maps between them, constructive
//! kernel certificates, and the labelled-bipartite-tree complexes used to
//! study stabilizers.

pub mod braid;
pub mod complex;
pub mod error;
pub mod kernel;
pub mod lift;
pub mod random;
pub mod selftest;
pub mod symaut;
pub mod words;

pub use error::{Error, Result};
