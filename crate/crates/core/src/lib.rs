//! Emptiness and dimension of affine Deligne-Lusztig varieties in affine flag
//! varieties of split groups, computed in the combinatorial shadow: root data,
//! the extended affine Weyl group, alcove geometry, σ-conjugacy classes and the
//! Iwahori-Hecke algebra.

pub mod adlv_engine;
pub mod affine_weyl;
pub mod alcove_geom;
pub mod hecke;
pub mod lattice;
pub mod root_data;
pub mod sigma_classes;

pub use affine_weyl::{ExtAffWeylElt, ReducedExpr};
pub use root_data::{DatumSpec, Family, Levi, Parabolic, RootDatum, Variant};
pub use sigma_classes::SigmaConjClass;

/// Engine version; bump whenever a computed value could change.
pub const ENGINE_VERSION: &str = "1";

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
