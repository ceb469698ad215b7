//! Exact computations around lattice frames of E8-type lattices: binary
//! codes and markings, Z4 glue codes, frame stabilizers, the central
//! extension of a lattice by its commutator cocycle, even unimodular
//! overlattices, and parabolic orbits in F2 quadratic spaces.

pub mod budget;
pub mod codes;
pub mod error;
pub mod f2quad;
pub mod frame;
pub mod hat;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod monomial;
pub mod unimodular;

pub use budget::Budget;
pub use codes::{BinaryCode, Marking, Permutation};
pub use error::{Error, Result};
pub use frame::{LatticeFrame, Z4Code};
pub use lattice::{IntegralLattice, LatticeVector};
pub use monomial::MonomialMap;
