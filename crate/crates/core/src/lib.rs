//! Exact construction and verification of braid matrices, projector
//! decompositions and q-deformed Weyl/Clifford algebras, including braided
//! chains of copies and the `GL_q(M) x SL_q(N)`-covariant variant.

pub mod braid;
pub mod consistency;
pub mod error;
pub mod linalg;
pub mod pbw;
pub mod relations;
pub mod scalar;
pub mod suite;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::{Laurent, RatFunc};
pub use tensor::{LegIndex, SparseMat};
