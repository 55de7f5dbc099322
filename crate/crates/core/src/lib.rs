//! Exact lattice-level computations for Bridgeland stability conditions on
//! Weierstrass elliptic surfaces.

pub mod cce;
pub mod charges;
pub mod cli;
pub mod fmt;
pub mod lattice;
pub mod rational;
pub mod regions;
pub mod walls;
