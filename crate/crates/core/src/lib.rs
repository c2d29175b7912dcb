//! Borel orbits on thin ideals of strictly upper triangular matrices and the
//! quasi-hereditary algebra `A(t,1)` attached to them.

pub mod combinatorics;
pub mod constructions;
pub mod error;
pub mod field;
pub mod linalg;
pub mod matrix_model;
pub mod orbit_lab;
pub mod quiver;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Field, Fp, Rational, F10007};
