//! Computational companion to local-to-global rigidity of vertex-transitive graphs.

pub mod error;
pub mod graph;
pub mod group;
pub mod complexes;
pub mod rigidity;
pub mod discreteness;
pub mod gf2;
pub mod cocycle;
pub mod gluing;
pub mod fox;
pub mod cli;

pub use error::{Budget, Error, Result};
