//! Exact-arithmetic machinery for even integral lattices: Gram-matrix
//! algebra, short-vector enumeration and root-system identification,
//! discriminant quadratic modules, polarisation classification on
//! `3U + 2E8(-1) + A2(-1)`, and quasi-pullback weight certification.

pub mod disc;
pub mod e6;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod polarisation;
pub mod pullback;
pub mod report;
pub mod roots;

pub use error::{Error, Result};
pub use lattice::{parse_lattice, GramLattice, LatticeExpr, LatticeVector};
pub use roots::{classify_root_system, count_vectors, vectors_of_norm, RootSystemLabel};
