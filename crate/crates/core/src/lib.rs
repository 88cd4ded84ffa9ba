//! Bounded reduction of isotropic unimodular columns and matrices in split
//! orthogonal groups over polynomial rings.
//!
//! The crate factors group elements into explicit words of elementary
//! orthogonal transvections, tracks the word lengths against the explicit
//! bounds, and emits certificates that replay the whole reduction with exact
//! arithmetic.

pub mod certificate;
pub mod elimphase;
pub mod enumeration;
pub mod error;
pub mod monicphase;
pub mod pipeline;
pub mod orthocore;
pub mod polyring;

pub use error::{Error, Result};
