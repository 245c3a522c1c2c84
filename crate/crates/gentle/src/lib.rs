//! Gentle and skew-gentle algebras built from a combinatorial datum, their
//! complexes of projective modules, the associated bunch-of-chains matrix
//! problem, and generation certificates, all over exact fields.
//!
//! Algorithms are generic over [`scalar::Field`]; [`Q`] and [`Fp`] are the
//! two concrete choices.

pub mod algebra;
pub mod bunch;
pub mod complexes;
pub mod datum;
pub mod error;
pub mod exactla;
pub mod rouquier;
pub mod scalar;
pub mod suite;
pub mod words;

pub use error::{Error, Result};
pub use scalar::{Field, Fp, Rational};

/// The rational numbers.
pub type Q = Rational;
