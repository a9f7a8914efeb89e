//! Quotients of the Bruhat-Tits tree of PGL_2 over F_q((1/T)) by unit groups
//! of maximal F_q[T]-orders in quaternion algebras split at infinity.

pub mod algebra;
pub mod error;
pub mod homspace;
pub mod laurent;
pub mod linalg;
pub mod quaternion;
pub mod quotient;
pub mod tree;

pub use error::{Error, Result};
