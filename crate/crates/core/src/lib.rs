//! Finite-volume verification of quasi-locality estimates for quantum spin
//! systems: F-function certificates, Lieb-Robinson commutator bounds and
//! light cones, local approximation norms, the interaction-continuity
//! estimate, spectral gaps along interaction paths, and quasi-adiabatic
//! ground-state transport.

pub mod algebra;
pub mod capacity;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod ffunc;
pub mod gsphase;
pub mod interactions;
pub mod lattice;
pub mod linalg;
pub mod output;

pub use error::{Error, Result};
