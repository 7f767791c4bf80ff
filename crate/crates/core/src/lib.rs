//! Exact finite geometry toolkit: Galois fields, cyclotomic integers and
//! Weil sums, finite projective planes, arcs and ovals, and complete sets of
//! mutually unbiased bases.

pub mod arcs;
pub mod bits;
pub mod cert;
pub mod cyclotomic;
pub mod error;
pub mod galois;
pub mod mub;
pub mod par;
pub mod plane;
pub mod table;

pub use error::{Error, Result};
