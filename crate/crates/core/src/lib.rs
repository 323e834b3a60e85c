//! Exact verification of Chowla–Milnor type span and independence statements
//! for cotangent-derivative values and Dirichlet L-value coordinates inside
//! cyclotomic fields, cross-checked by high-precision numerics.

pub mod characters;
pub mod cli;
pub mod cotangent;
pub mod cyclotomic;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod numerics;
pub mod spaces;

pub use error::{Error, Result};
