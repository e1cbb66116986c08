//! Exact computation of weighted Davenport constants of cyclic groups and
//! product-one-free sequences in `C_n x|_s C_2`.

pub mod bounds;
pub mod davenport;
pub mod error;
pub mod metacyclic;
pub mod modring;
pub mod zsfree;

pub use error::{Error, Result};
