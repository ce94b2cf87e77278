//! Volumes of moduli spaces of oriented 4-valent metric ribbon graphs.
//!
//! The crate computes the volume polynomials `F_{g,n}` and the piecewise polynomial
//! volumes `Z_{g,n+,n-}` by recursion, and checks them against exhaustive ribbon graph
//! enumeration, lattice point counts and Hurwitz-type counts.

pub mod curves;
pub mod decompose;
pub mod enumerate;
pub mod error;
pub mod identities;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod ribbon;
pub mod stable;
pub mod suite;
pub mod surgery;
pub mod symplectic;
pub mod volumes;

pub use error::{Error, Result};
