//! Disordered optimal paths on planar lattices, their minimum spanning tree
//! structure, and the observables used to compare them with SLE curves.

pub mod conformal;
pub mod disorder;
pub mod error;
pub mod graph;
pub mod harness;
pub mod lattice;
pub mod observables;
pub mod percolation;
pub mod spanning;

pub use error::{Error, Result};
