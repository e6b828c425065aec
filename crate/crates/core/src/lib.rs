//! Exact-arithmetic models of filtered φ-modules, Fontaine–Ogus structures,
//! linear diagram categories and the linear shadow of Laumon 1-motives.
//!
//! Everything works over ℚ with canonical representatives, so equality of
//! subspaces, objects and morphisms is decidable and reproducible.

pub mod cli;
pub mod diagram;
pub mod error;
pub mod exact_linalg;
pub mod filtered_phi;
pub mod laumon;
pub mod mfog_a;
pub mod ogus;

pub use error::{Error, Result};
