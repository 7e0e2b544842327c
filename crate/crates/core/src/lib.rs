//! Exact computer algebra for the Yangian double `DY_h(gl_n)`: RTT relations
//! and PBW normal forms, Gauss decomposition and Drinfeld currents, and the
//! central series at the critical level together with their Harish-Chandra
//! and Wakimoto images.
//!
//! Everything is exact over ℚ, truncated at a declared order in `h` and in
//! the spectral parameter.

pub mod algebra;
pub mod error;
pub mod scalar;

pub use error::{Error, Result};
pub mod center;
pub mod fnorm;
pub mod gauss;
pub mod harness;
pub mod hc;
pub mod report;
pub mod tensor;
