//! Exact computations over affine semigroup rings in characteristic `p`:
//! Frobenius pushforward decompositions, FFRT certificates, the operator
//! algebra spanned by twisted graded maps between pushforwards, unit modules
//! presented by roots, and graded local cohomology with its associated
//! primes and supports.
//!
//! Everything is integer/`F_p` arithmetic; no floats anywhere. Infinite
//! objects are only ever asserted inside explicit degree windows and every
//! report records the window it used.

pub mod diophantine;
pub mod error;
pub mod fp;
pub mod frobenius;
pub mod lattice;
pub mod localcoh;
pub mod monomial;
pub mod phi;
pub mod report;
pub mod semigroup;
pub mod unitmod;

pub use error::{Error, Result};
pub use lattice::{DegreeBox, Point};
pub use semigroup::{AffineSemigroupRing, RingSpec};
