//! Exact verification engine for the arithmetic of irreducible symplectic
//! fourfolds numerically equivalent to the Hilbert square of a K3 surface.

pub mod charclass;
pub mod cubic;
pub mod exact;
pub mod lattice;
pub mod poly;
pub mod report;
pub mod sym2;
pub mod text;
