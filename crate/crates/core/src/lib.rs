//! Root systems of Coxeter groups and the dominance hierarchy of their
//! positive roots.

pub mod cli;
pub mod datum;
pub mod dihedral;
pub mod dominance;
pub mod error;
pub mod laws;
pub mod oracle;
pub mod roots;
pub mod scalar;

pub use datum::{systems, CoxeterDatum};
pub use error::{Error, Result};
pub use roots::{Root, RootKey, Word};
pub use scalar::{classify, Backend, Rational, Scalar, ScalarClass};
