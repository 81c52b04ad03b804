//! Truncated Fock-space simulation of two-way communication with
//! non-classical light.

pub mod bell;
mod combinatorics;
pub mod detectors;
pub mod error;
pub mod fock;
pub mod gyni;
pub mod optics;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
