//! Homological algebra over the field with two elements.
//!
//! The crate is organised bottom-up: [`f2linalg`] provides packed linear
//! algebra, [`chain`] cochain complexes, and the remaining modules build
//! local systems, A∞ structures, Hochschild complexes, twisted complexes and
//! discrete Morse complexes on top of them.

pub mod ainfty;
pub mod chain;
pub mod covers;
pub mod error;
pub mod f2linalg;
pub mod finprop;
pub mod hochschild;
pub mod io;
pub mod morse;
pub mod random;
pub mod simplicial;
pub mod suites;
pub mod twisted;

pub use error::{Error, Result};
