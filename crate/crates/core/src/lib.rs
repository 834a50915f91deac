//! Exact arithmetic for the Carlitz module over `A = F_q[T]`.

pub mod arith;
pub mod carlitz;
pub mod cli;
pub mod error;
pub mod field;
pub mod infinity;
pub mod padic;
pub mod poly;
pub mod series;
pub mod sums;
pub mod wieferich;

pub use error::{Error, Result};
pub use field::{Fe, FieldElement, FieldRef};
pub use poly::Poly;
