//! Exact computer algebra for formal meromorphic connections on the punctured
//! disk, opers in canonical form, and Hitchin bases with level structure, for
//! simple Lie algebras of small rank.

pub mod error;
pub mod exact;
pub mod lie;
pub mod connection;
pub mod oper;
pub mod hitchin;
pub mod suite;

pub use error::{Error, Result};
