//! Exact-arithmetic toolkit for factored polynomial ideals: lcm
//! lattices, Taylor complexes and their evaluation/fiber complexes,
//! acyclicity certification, minimal free resolutions, Scarf complexes,
//! and the Tor DGA.

pub mod check;
pub mod dga;
pub mod error;
pub mod field;
pub mod homology;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod minres;
pub mod model;
pub mod poset;
pub mod scarf;
pub mod taylor;

pub use error::Error;
