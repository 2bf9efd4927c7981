//! Finite projective spaces PG(N,q), quadrics over them, and exhaustive
//! verification of hyperplane-family intersection conditions.

pub mod bitset;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod family;
pub mod field;
pub mod linalg;
pub mod quadric;
pub mod space;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use field::{Elem, FieldSpec};
pub use linalg::Matrix;
pub use space::{
    CodimTwoFlat, HyperplaneId, Line, PointId, ProjectiveSpace, SpaceOptions, Subspace,
};
