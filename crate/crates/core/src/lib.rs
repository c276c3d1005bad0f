//! Reduced power graphs of `PGL_3(F_q)`.

pub mod audit;
pub mod cache;
pub mod error;
pub mod gf;
pub mod graph;
pub mod mat;
pub mod pgl;
pub mod theorem;
pub mod witness;

pub use error::{Error, Result};
